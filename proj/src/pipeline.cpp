#include "gabp/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "gabp/error.hpp"
#include "gabp/genome.hpp"

namespace gabp::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

void finish(RunReport& report, const network::TrainResult& trained, const dataset::Samples& train,
            const dataset::Samples& test, Clock::time_point started) {
  report.params = trained.params;
  report.curve = trained.curve;
  report.stop = trained.stop;
  report.train_metrics = network::evaluate(report.params, train);
  if (!test.empty()) {
    report.test_metrics = network::evaluate(report.params, test);
    for (const auto& s : test) report.test_targets.push_back(s.targets.front());
  }
  report.data_fingerprint = fingerprint(train, test);
  report.seconds = std::chrono::duration<double>(Clock::now() - started).count();
}

void require_train(const dataset::Samples& train) {
  if (train.empty()) throw Error(ErrorKind::InvalidArgument, "training split is empty");
}

}  // namespace

std::uint64_t fingerprint(const dataset::Samples& train, const dataset::Samples& test) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto* split : {&train, &test}) {
    mix(split->size());
    for (const auto& s : *split) {
      for (double x : s.features) mix(std::bit_cast<std::uint64_t>(x));
      mix(s.targets.size());
      for (double y : s.targets) mix(std::bit_cast<std::uint64_t>(y));
    }
  }
  return h;
}

network::NetworkParams random_params(const network::NetworkShape& shape, double gene_min,
                                     double gene_max, Rng& rng) {
  std::uniform_real_distribution<double> dist(gene_min, gene_max);
  genome::Chromosome genes(genome::chromosome_length(shape));
  for (double& g : genes) g = dist(rng);
  return genome::decode(genes, shape);
}

RunReport run_gabp(const dataset::Samples& train, const dataset::Samples& test,
                   const network::NetworkShape& shape, const evolution::GAConfig& ga_cfg,
                   const network::TrainConfig& train_cfg) {
  require_train(train);
  network::validate(train_cfg);
  const auto started = Clock::now();
  RunReport report;
  report.variant = Variant::GaBp;
  report.seed = ga_cfg.seed;
  auto evolved = evolution::evolve(train, shape, ga_cfg);
  report.initial_params = genome::decode(evolved.best, shape);
  report.trace = std::move(evolved.trace);
  const auto trained = network::train(report.initial_params, train, train_cfg);
  finish(report, trained, train, test, started);
  return report;
}

RunReport run_bp(const dataset::Samples& train, const dataset::Samples& test,
                 const network::NetworkShape& shape, const network::TrainConfig& train_cfg,
                 std::uint64_t seed, double gene_min, double gene_max) {
  require_train(train);
  network::validate(train_cfg);
  network::validate(shape);
  if (!(gene_min < gene_max)) {
    throw Error(ErrorKind::InvalidArgument, "initialization bounds need gene_min < gene_max");
  }
  const auto started = Clock::now();
  RunReport report;
  report.variant = Variant::Bp;
  report.seed = seed;
  auto rng = make_substream(seed, stream::kBpInit);
  report.initial_params = random_params(shape, gene_min, gene_max, rng);
  const auto trained = network::train(report.initial_params, train, train_cfg);
  finish(report, trained, train, test, started);
  return report;
}

double relative_reduction(double mse_gabp, double mse_bp) noexcept {
  if (mse_bp == 0.0) {
    return mse_gabp == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return (mse_bp - mse_gabp) / mse_bp;
}

ComparisonReport compare(const RunReport& gabp, const RunReport& bp) {
  if (gabp.data_fingerprint != bp.data_fingerprint) {
    throw Error(ErrorKind::Mismatch, "reports were produced from different train/test splits");
  }
  if (!gabp.test_metrics || !bp.test_metrics) {
    throw Error(ErrorKind::InvalidArgument, "comparison needs a non-empty test split");
  }
  ComparisonReport cmp;
  cmp.gabp = gabp;
  cmp.bp = bp;
  const auto& g = *gabp.test_metrics;
  const auto& b = *bp.test_metrics;
  for (std::size_t i = 0; i < gabp.test_targets.size(); ++i) {
    cmp.rows.push_back({i, gabp.test_targets[i], g.predictions[i], b.predictions[i],
                        g.per_sample_abs_error[i], b.per_sample_abs_error[i]});
  }
  cmp.relative_reduction = relative_reduction(g.mse, b.mse);
  return cmp;
}

SynthData synth_dataset(std::size_t n_samples, const network::NetworkShape& shape,
                        double noise_sd, std::uint64_t seed, std::size_t n_train,
                        double gene_min, double gene_max) {
  if (n_samples < 4) {
    throw Error(ErrorKind::InvalidArgument, "synthetic data needs at least 4 samples");
  }
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw Error(ErrorKind::InvalidArgument, "noise standard deviation must be >= 0");
  }
  if (n_train == 0) {
    const auto n_test = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(3.0 * static_cast<double>(n_samples) / 13.0)));
    n_train = n_samples - n_test;
  }
  if (n_train >= n_samples) {
    throw Error(ErrorKind::InvalidArgument, "training rows must leave at least one test row");
  }
  network::validate(shape);

  auto rng = make_substream(seed, stream::kDataGen);
  SynthData out;
  out.hidden = random_params(shape, gene_min, gene_max, rng);

  std::vector<std::vector<double>> inputs(n_samples, std::vector<double>(shape.inputs));
  for (auto& x : inputs) {
    for (double& v : x) v = uniform01(rng);
  }

  // Affine output rescale so noiseless targets cover [0.05, 0.95].
  for (std::size_t k = 0; k < shape.outputs; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& x : inputs) {
      const double y = network::forward(out.hidden, x).output[k];
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    double scale = 0.0;
    double shift = 0.5;
    if (hi - lo > 1e-12) {
      scale = 0.9 / (hi - lo);
      shift = 0.05 - scale * lo;
    }
    for (std::size_t j = 0; j < shape.hidden; ++j) out.hidden.v_at(k, j) *= scale;
    out.hidden.h[k] = out.hidden.h[k] * scale + shift;
  }

  std::normal_distribution<double> noise(0.0, noise_sd > 0.0 ? noise_sd : 1.0);
  dataset::Samples all;
  for (auto& x : inputs) {
    dataset::Sample s;
    s.targets = network::forward(out.hidden, x).output;
    for (double& y : s.targets) {
      if (noise_sd > 0.0) y += noise(rng);
      y = std::clamp(y, 0.0, 1.0);
    }
    s.features = std::move(x);
    all.push_back(std::move(s));
  }
  out.train.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train), all.end());
  return out;
}

}  // namespace gabp::pipeline
