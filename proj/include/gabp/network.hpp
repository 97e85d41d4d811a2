#ifndef GABP_NETWORK_HPP
#define GABP_NETWORK_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "gabp/dataset.hpp"

namespace gabp::network {

struct NetworkShape {
  std::size_t inputs = 19;
  std::size_t hidden = 11;
  std::size_t outputs = 1;

  bool operator==(const NetworkShape&) const = default;
};

// floor((n + m) / 2) + a, with the adjustment term a in [1, 10].
std::size_t hidden_layer_size(std::size_t inputs, std::size_t outputs, int adjust);

void validate(const NetworkShape& shape);

// Weights and thresholds of a single-hidden-layer network. Matrices are
// stored row-major: w(j, i) connects input i to hidden neuron j, v(k, j)
// connects hidden neuron j to output k.
struct NetworkParams {
  NetworkShape shape;
  std::vector<double> w;      // hidden x inputs
  std::vector<double> gamma;  // hidden thresholds
  std::vector<double> v;      // outputs x hidden
  std::vector<double> h;      // output thresholds

  NetworkParams() = default;
  explicit NetworkParams(const NetworkShape& s);  // all zero

  double& w_at(std::size_t j, std::size_t i) { return w[j * shape.inputs + i]; }
  double w_at(std::size_t j, std::size_t i) const { return w[j * shape.inputs + i]; }
  double& v_at(std::size_t k, std::size_t j) { return v[k * shape.hidden + j]; }
  double v_at(std::size_t k, std::size_t j) const { return v[k * shape.hidden + j]; }

  bool operator==(const NetworkParams&) const = default;
};

// Throws unless the four blocks match `shape` and every entry is finite.
void validate(const NetworkParams& params);

// Hyperbolic-tangent sigmoid, 2 / (1 + exp(-2z)) - 1.
double tansig(double z) noexcept;

struct Activations {
  std::vector<double> hidden;
  std::vector<double> output;
};

Activations forward(const NetworkParams& params, std::span<const double> x);

double sse_loss(const NetworkParams& params, const dataset::Samples& data);
double mse_loss(const NetworkParams& params, const dataset::Samples& data);

// dE/dtheta for E = sum of squared residuals, laid out like the parameters.
NetworkParams gradient(const NetworkParams& params, const dataset::Samples& data);

// Residuals r = yhat - y, one per (sample, output) in sample-major order, and
// the Jacobian dr/dtheta with columns in chromosome order (W, gamma, V, h).
struct ResidualJacobian {
  std::vector<double> residuals;
  std::vector<double> jacobian;  // rows x params, row-major
  std::size_t rows = 0;
  std::size_t cols = 0;
};

ResidualJacobian residual_jacobian(const NetworkParams& params, const dataset::Samples& data);

enum class Trainer { LevenbergMarquardt, GradientDescent };

struct TrainConfig {
  Trainer trainer = Trainer::LevenbergMarquardt;
  double learning_rate = 0.001;
  double goal_mse = 1e-5;
  std::size_t max_iterations = 1000;
  double lm_damping_init = 1e-3;
  double lm_damping_factor = 10.0;
  std::size_t lm_max_retries = 30;
  double lm_damping_max = 1e10;
};

void validate(const TrainConfig& cfg);

struct CurvePoint {
  std::size_t iteration = 0;
  double sse = 0.0;
  double mse = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

using ErrorCurve = std::vector<CurvePoint>;

enum class StopReason { Goal, MaxIterations, DampingLimit };

struct TrainResult {
  NetworkParams params;
  ErrorCurve curve;
  StopReason stop = StopReason::MaxIterations;
};

TrainResult train_gd(NetworkParams params, const dataset::Samples& data, const TrainConfig& cfg);
TrainResult train_lm(NetworkParams params, const dataset::Samples& data, const TrainConfig& cfg);
TrainResult train(NetworkParams params, const dataset::Samples& data, const TrainConfig& cfg);

struct Evaluation {
  double mse = 0.0;
  std::vector<double> predictions;         // first output per sample
  std::vector<double> per_sample_abs_error;  // mean |yhat - y| over outputs
  double level_accuracy = 0.0;
};

Evaluation evaluate(const NetworkParams& params, const dataset::Samples& data);

}  // namespace gabp::network

#endif  // GABP_NETWORK_HPP
