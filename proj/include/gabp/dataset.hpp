#ifndef GABP_DATASET_HPP
#define GABP_DATASET_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gabp::dataset {

enum class Orientation { Benefit, Cost };

struct Indicator {
  std::string code;
  std::string name;
  Orientation orientation = Orientation::Benefit;
};

// The 19 safety indicators, grouped as personnel (X1*), equipment (X2*),
// working environment (X3*) and management (X4*).
class IndicatorSchema {
 public:
  IndicatorSchema();  // default 19-indicator schema, all benefit-type
  explicit IndicatorSchema(std::vector<Indicator> indicators);

  std::size_t size() const noexcept { return indicators_.size(); }
  const Indicator& operator[](std::size_t i) const { return indicators_[i]; }
  const std::vector<Indicator>& indicators() const noexcept { return indicators_; }

  // Marks the named indicator as cost-type. Throws on an unknown code.
  void set_orientation(std::string_view code, Orientation orientation);

  std::vector<std::string> codes() const;

 private:
  std::vector<Indicator> indicators_;
};

struct Sample {
  std::vector<double> features;
  // Empty when the sample carries no target.
  std::vector<double> targets;

  bool has_target() const noexcept { return !targets.empty(); }
};

using Samples = std::vector<Sample>;

enum class TargetMode { None, Required, Auto };

// Parses comma-separated rows of `n_features` reals plus an optional trailing
// target. A header row and `#` comment lines are skipped. In Auto mode the
// header (a trailing `y` column) or the first data row decides.
Samples parse_samples(std::string_view text, std::size_t n_features, TargetMode mode,
                      std::string_view source = "<memory>");
Samples load_samples(const std::filesystem::path& path, std::size_t n_features,
                     TargetMode mode);
Samples load_samples(const std::filesystem::path& path, const IndicatorSchema& schema,
                     bool has_target);

// Inverse of parse_samples. Reals use the shortest representation that
// parses back to the same double.
std::string format_samples(const Samples& samples, std::span<const std::string> codes);

std::string format_real(double value);

struct ColumnStats {
  double min = 0.0;
  double max = 0.0;
  Orientation orientation = Orientation::Benefit;
};

struct NormStats {
  std::vector<ColumnStats> columns;
};

NormStats fit_normalization(const Samples& raw, const IndicatorSchema& schema);
NormStats fit_normalization(const Samples& raw, std::span<const Orientation> orientations);

// Min-max maps each column to [0,1]; cost columns are reversed, degenerate
// columns map to 0.5, and out-of-range values are clamped.
Sample apply_normalization(const NormStats& stats, const Sample& raw);
Samples apply_normalization(const NormStats& stats, const Samples& raw);

// Ordered from most to least severe.
enum class WarningLevel { High, Higher, Medium, Lower, Low };

// Five equal-width bins over the score clamped to [0,1]; higher score is safer.
WarningLevel classify_warning(double score) noexcept;
std::string_view level_name(WarningLevel level) noexcept;

}  // namespace gabp::dataset

#endif  // GABP_DATASET_HPP
