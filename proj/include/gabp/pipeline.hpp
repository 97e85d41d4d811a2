#ifndef GABP_PIPELINE_HPP
#define GABP_PIPELINE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gabp/dataset.hpp"
#include "gabp/evolution.hpp"
#include "gabp/network.hpp"

namespace gabp::pipeline {

enum class Variant { GaBp, Bp };

struct RunReport {
  Variant variant = Variant::GaBp;
  std::optional<evolution::EvolutionTrace> trace;  // GA-BP only
  network::NetworkParams initial_params;           // where the BP phase started
  network::NetworkParams params;
  network::ErrorCurve curve;
  network::StopReason stop = network::StopReason::MaxIterations;
  network::Evaluation train_metrics;
  std::optional<network::Evaluation> test_metrics;  // absent for an empty test split
  std::vector<double> test_targets;
  double seconds = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t data_fingerprint = 0;
};

// GA evolves the initial weights, then the configured trainer refines them.
RunReport run_gabp(const dataset::Samples& train, const dataset::Samples& test,
                   const network::NetworkShape& shape, const evolution::GAConfig& ga_cfg,
                   const network::TrainConfig& train_cfg);

// Baseline: seeded uniform initialization on [gene_min, gene_max], no GA.
RunReport run_bp(const dataset::Samples& train, const dataset::Samples& test,
                 const network::NetworkShape& shape, const network::TrainConfig& train_cfg,
                 std::uint64_t seed, double gene_min = -1.0, double gene_max = 1.0);

network::NetworkParams random_params(const network::NetworkShape& shape, double gene_min,
                                     double gene_max, Rng& rng);

struct ComparisonRow {
  std::size_t sample = 0;
  double target = 0.0;
  double gabp_prediction = 0.0;
  double bp_prediction = 0.0;
  double gabp_abs_error = 0.0;
  double bp_abs_error = 0.0;
};

struct ComparisonReport {
  RunReport gabp;
  RunReport bp;
  std::vector<ComparisonRow> rows;  // one per test sample
  double relative_reduction = 0.0;
};

// (mse_bp - mse_gabp) / mse_bp, 0 when both are zero.
double relative_reduction(double mse_gabp, double mse_bp) noexcept;

ComparisonReport compare(const RunReport& gabp, const RunReport& bp);

struct SynthData {
  dataset::Samples train;
  dataset::Samples test;
  network::NetworkParams hidden;  // ground-truth network behind the targets
};

// Inputs uniform on [0,1]; targets from a random ground-truth network plus
// Gaussian noise, clamped to [0,1]. The ground truth's output layer is
// rescaled so noiseless targets span [0.05, 0.95]. `n_train` 0 keeps the
// 10-train / 3-test proportion.
SynthData synth_dataset(std::size_t n_samples, const network::NetworkShape& shape,
                        double noise_sd, std::uint64_t seed, std::size_t n_train = 0,
                        double gene_min = -1.0, double gene_max = 1.0);

std::uint64_t fingerprint(const dataset::Samples& train, const dataset::Samples& test);

}  // namespace gabp::pipeline

#endif  // GABP_PIPELINE_HPP
