#ifndef GABP_MODEL_HPP
#define GABP_MODEL_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gabp/dataset.hpp"
#include "gabp/network.hpp"

namespace gabp::model {

inline constexpr int kFormatVersion = 1;

// A trained network plus the normalization fitted on its training data.
struct Model {
  network::NetworkParams params;
  std::vector<std::string> feature_codes;
  std::vector<dataset::Orientation> orientations;
  std::optional<dataset::NormStats> norm;
};

// Default feature codes: the indicator schema for 19 inputs, x1..xn otherwise.
std::vector<std::string> default_codes(std::size_t inputs);

Model make_model(network::NetworkParams params, std::optional<dataset::NormStats> norm = {});

// Raw features in, network outputs out. Normalizes first when stats exist.
std::vector<double> predict(const Model& m, std::span<const double> raw_features);

std::string to_json(const Model& m);
Model from_json(std::string_view text);

void save(const Model& m, const std::filesystem::path& path);
Model load(const std::filesystem::path& path);

}  // namespace gabp::model

#endif  // GABP_MODEL_HPP
