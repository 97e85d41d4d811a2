// Test-only reference computations. Nothing here calls into the library's
// forward/gradient code paths.
#ifndef GABP_TESTS_ORACLES_HPP
#define GABP_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "gabp/dataset.hpp"
#include "gabp/network.hpp"

namespace oracle {

inline double tansig_formula(double z) { return 2.0 / (1.0 + std::exp(-2.0 * z)) - 1.0; }

// Scalar-loop forward pass over raw blocks, written independently of the
// library's indexing helpers.
inline std::vector<double> forward(const gabp::network::NetworkParams& p,
                                   const std::vector<double>& x) {
  const std::size_t n = p.shape.inputs, q = p.shape.hidden, m = p.shape.outputs;
  std::vector<double> a(q);
  for (std::size_t j = 0; j < q; ++j) {
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) z += p.w[j * n + i] * x[i];
    a[j] = tansig_formula(z + p.gamma[j]);
  }
  std::vector<double> y(m);
  for (std::size_t k = 0; k < m; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < q; ++j) acc += p.v[k * q + j] * a[j];
    y[k] = acc + p.h[k];
  }
  return y;
}

inline double sse(const gabp::network::NetworkParams& p, const gabp::dataset::Samples& data) {
  double e = 0.0;
  for (const auto& s : data) {
    const auto y = forward(p, s.features);
    for (std::size_t k = 0; k < y.size(); ++k) e += (y[k] - s.targets[k]) * (y[k] - s.targets[k]);
  }
  return e;
}

// Central differences over every parameter, in chromosome order.
inline std::vector<double> fd_gradient(gabp::network::NetworkParams p,
                                       const gabp::dataset::Samples& data, double step = 1e-6) {
  std::vector<double> g;
  for (auto* block : {&p.w, &p.gamma, &p.v, &p.h}) {
    for (double& theta : *block) {
      const double saved = theta;
      theta = saved + step;
      const double up = sse(p, data);
      theta = saved - step;
      const double down = sse(p, data);
      theta = saved;
      g.push_back((up - down) / (2.0 * step));
    }
  }
  return g;
}

inline gabp::network::NetworkParams random_params(const gabp::network::NetworkShape& shape,
                                                  std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  gabp::network::NetworkParams p(shape);
  for (auto* block : {&p.w, &p.gamma, &p.v, &p.h}) {
    for (double& x : *block) x = d(rng);
  }
  return p;
}

inline gabp::dataset::Samples random_samples(std::size_t count, std::size_t inputs,
                                             std::size_t outputs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  gabp::dataset::Samples data(count);
  for (auto& s : data) {
    s.features.resize(inputs);
    s.targets.resize(outputs);
    for (double& x : s.features) x = d(rng);
    for (double& y : s.targets) y = d(rng);
  }
  return data;
}

// max_i |a_i - b_i| / max(1, |a_i|, |b_i|)
inline double max_relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

}  // namespace oracle

#endif  // GABP_TESTS_ORACLES_HPP
