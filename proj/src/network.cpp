#include "gabp/network.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <string>

#include "gabp/error.hpp"
#include "gabp/genome.hpp"

namespace gabp::network {

namespace {

void require_targets(const NetworkParams& params, const dataset::Samples& data) {
  for (std::size_t s = 0; s < data.size(); ++s) {
    if (data[s].features.size() != params.shape.inputs) {
      throw Error(ErrorKind::Dimension, "sample " + std::to_string(s) + " has " +
                                            std::to_string(data[s].features.size()) +
                                            " features, network expects " +
                                            std::to_string(params.shape.inputs));
    }
    if (data[s].targets.size() != params.shape.outputs) {
      throw Error(ErrorKind::InvalidArgument,
                  data[s].has_target()
                      ? "sample " + std::to_string(s) + " has " +
                            std::to_string(data[s].targets.size()) + " targets, network has " +
                            std::to_string(params.shape.outputs) + " outputs"
                      : "sample " + std::to_string(s) + " has no target");
    }
  }
}

double mse_from_sse(double sse, const NetworkParams& params, const dataset::Samples& data) {
  const double count = static_cast<double>(data.size() * params.shape.outputs);
  return count > 0 ? sse / count : 0.0;
}

CurvePoint point(std::size_t it, double sse, const NetworkParams& p, const dataset::Samples& d) {
  return {it, sse, mse_from_sse(sse, p, d)};
}

}  // namespace

std::size_t hidden_layer_size(std::size_t inputs, std::size_t outputs, int adjust) {
  if (inputs == 0 || outputs == 0) {
    throw Error(ErrorKind::InvalidArgument, "input and output counts must be positive");
  }
  if (adjust < 1 || adjust > 10) {
    throw Error(ErrorKind::InvalidArgument,
                "hidden-size adjustment must lie in [1, 10], got " + std::to_string(adjust));
  }
  return (inputs + outputs) / 2 + static_cast<std::size_t>(adjust);
}

void validate(const NetworkShape& shape) {
  if (shape.inputs == 0 || shape.hidden == 0 || shape.outputs == 0) {
    throw Error(ErrorKind::InvalidArgument, "network shape has a zero-sized layer");
  }
}

NetworkParams::NetworkParams(const NetworkShape& s)
    : shape(s),
      w(s.hidden * s.inputs, 0.0),
      gamma(s.hidden, 0.0),
      v(s.outputs * s.hidden, 0.0),
      h(s.outputs, 0.0) {}

void validate(const NetworkParams& params) {
  validate(params.shape);
  const auto& s = params.shape;
  if (params.w.size() != s.hidden * s.inputs || params.gamma.size() != s.hidden ||
      params.v.size() != s.outputs * s.hidden || params.h.size() != s.outputs) {
    throw Error(ErrorKind::Dimension, "parameter blocks do not match the network shape");
  }
  for (const auto* block : {&params.w, &params.gamma, &params.v, &params.h}) {
    for (double x : *block) {
      if (!std::isfinite(x)) throw Error(ErrorKind::Numeric, "non-finite network parameter");
    }
  }
}

double tansig(double z) noexcept { return std::tanh(z); }

Activations forward(const NetworkParams& params, std::span<const double> x) {
  const auto& s = params.shape;
  if (x.size() != s.inputs) {
    throw Error(ErrorKind::Dimension, "input has " + std::to_string(x.size()) +
                                          " features, network expects " +
                                          std::to_string(s.inputs));
  }
  Activations out;
  out.hidden.resize(s.hidden);
  for (std::size_t j = 0; j < s.hidden; ++j) {
    double z = params.gamma[j];
    for (std::size_t i = 0; i < s.inputs; ++i) z += params.w_at(j, i) * x[i];
    out.hidden[j] = tansig(z);
  }
  out.output.resize(s.outputs);
  for (std::size_t k = 0; k < s.outputs; ++k) {
    double y = params.h[k];
    for (std::size_t j = 0; j < s.hidden; ++j) y += params.v_at(k, j) * out.hidden[j];
    out.output[k] = y;
  }
  return out;
}

double sse_loss(const NetworkParams& params, const dataset::Samples& data) {
  require_targets(params, data);
  double sse = 0.0;
  for (const auto& sample : data) {
    const auto act = forward(params, sample.features);
    for (std::size_t k = 0; k < act.output.size(); ++k) {
      const double r = act.output[k] - sample.targets[k];
      sse += r * r;
    }
  }
  return sse;
}

double mse_loss(const NetworkParams& params, const dataset::Samples& data) {
  return mse_from_sse(sse_loss(params, data), params, data);
}

NetworkParams gradient(const NetworkParams& params, const dataset::Samples& data) {
  require_targets(params, data);
  const auto& s = params.shape;
  NetworkParams grad(s);
  std::vector<double> delta(s.hidden);
  for (const auto& sample : data) {
    const auto act = forward(params, sample.features);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (std::size_t k = 0; k < s.outputs; ++k) {
      const double g = 2.0 * (act.output[k] - sample.targets[k]);
      grad.h[k] += g;
      for (std::size_t j = 0; j < s.hidden; ++j) {
        grad.v_at(k, j) += g * act.hidden[j];
        delta[j] += g * params.v_at(k, j);
      }
    }
    for (std::size_t j = 0; j < s.hidden; ++j) {
      const double a = act.hidden[j];
      const double dz = delta[j] * (1.0 - a * a);
      grad.gamma[j] += dz;
      for (std::size_t i = 0; i < s.inputs; ++i) grad.w_at(j, i) += dz * sample.features[i];
    }
  }
  return grad;
}

ResidualJacobian residual_jacobian(const NetworkParams& params, const dataset::Samples& data) {
  require_targets(params, data);
  const auto& s = params.shape;
  ResidualJacobian rj;
  rj.rows = data.size() * s.outputs;
  rj.cols = genome::chromosome_length(s);
  rj.residuals.resize(rj.rows);
  rj.jacobian.assign(rj.rows * rj.cols, 0.0);

  const std::size_t gamma_off = s.hidden * s.inputs;
  const std::size_t v_off = gamma_off + s.hidden;
  const std::size_t h_off = v_off + s.outputs * s.hidden;

  for (std::size_t n = 0; n < data.size(); ++n) {
    const auto& x = data[n].features;
    const auto act = forward(params, x);
    for (std::size_t k = 0; k < s.outputs; ++k) {
      const std::size_t row = n * s.outputs + k;
      rj.residuals[row] = act.output[k] - data[n].targets[k];
      double* jr = rj.jacobian.data() + row * rj.cols;
      for (std::size_t j = 0; j < s.hidden; ++j) {
        const double a = act.hidden[j];
        const double dz = params.v_at(k, j) * (1.0 - a * a);
        for (std::size_t i = 0; i < s.inputs; ++i) jr[j * s.inputs + i] = dz * x[i];
        jr[gamma_off + j] = dz;
        jr[v_off + k * s.hidden + j] = a;
      }
      jr[h_off + k] = 1.0;
    }
  }
  return rj;
}

void validate(const TrainConfig& cfg) {
  // A zero learning rate is accepted as a null step.
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw Error(ErrorKind::InvalidArgument, "learning rate must be a finite value >= 0");
  }
  if (!(cfg.goal_mse > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "goal MSE must be positive");
  }
  if (!(cfg.lm_damping_init > 0.0) || !(cfg.lm_damping_factor > 1.0) ||
      !(cfg.lm_damping_max >= cfg.lm_damping_init) || cfg.lm_max_retries == 0) {
    throw Error(ErrorKind::InvalidArgument,
                "LM damping needs init > 0, factor > 1, max >= init and at least one retry");
  }
}

TrainResult train_gd(NetworkParams params, const dataset::Samples& data, const TrainConfig& cfg) {
  validate(cfg);
  validate(params);
  TrainResult result;
  double sse = sse_loss(params, data);
  if (!std::isfinite(sse)) throw Error(ErrorKind::Numeric, "non-finite loss at iteration 0");
  result.curve.push_back(point(0, sse, params, data));
  if (result.curve.back().mse <= cfg.goal_mse) {
    result.stop = StopReason::Goal;
    result.params = std::move(params);
    return result;
  }
  result.stop = StopReason::MaxIterations;
  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    const auto grad = gradient(params, data);
    auto step = [&](std::vector<double>& p, const std::vector<double>& g) {
      for (std::size_t i = 0; i < p.size(); ++i) p[i] -= cfg.learning_rate * g[i];
    };
    step(params.w, grad.w);
    step(params.gamma, grad.gamma);
    step(params.v, grad.v);
    step(params.h, grad.h);
    sse = sse_loss(params, data);
    if (!std::isfinite(sse)) {
      throw Error(ErrorKind::Numeric, "non-finite loss at iteration " + std::to_string(it));
    }
    result.curve.push_back(point(it, sse, params, data));
    if (result.curve.back().mse <= cfg.goal_mse) {
      result.stop = StopReason::Goal;
      break;
    }
  }
  result.params = std::move(params);
  return result;
}

TrainResult train_lm(NetworkParams params, const dataset::Samples& data, const TrainConfig& cfg) {
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Vector = Eigen::VectorXd;

  validate(cfg);
  validate(params);
  if (data.empty()) throw Error(ErrorKind::InvalidArgument, "LM training needs at least one sample");

  TrainResult result;
  double sse = sse_loss(params, data);
  if (!std::isfinite(sse)) throw Error(ErrorKind::Numeric, "non-finite loss at iteration 0");
  result.curve.push_back(point(0, sse, params, data));
  result.stop = StopReason::MaxIterations;
  if (result.curve.back().mse <= cfg.goal_mse) {
    result.stop = StopReason::Goal;
    result.params = std::move(params);
    return result;
  }

  auto genes = genome::encode(params);
  double mu = cfg.lm_damping_init;
  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    const auto rj = residual_jacobian(params, data);
    const Eigen::Map<const Matrix> J(rj.jacobian.data(), static_cast<Eigen::Index>(rj.rows),
                                     static_cast<Eigen::Index>(rj.cols));
    const Eigen::Map<const Vector> r(rj.residuals.data(), static_cast<Eigen::Index>(rj.rows));

    // (J'J + mu I)^-1 J' = J' (J J' + mu I)^-1, so solve in whichever space is
    // smaller. Residuals usually number far fewer than parameters here.
    const bool dual = rj.rows < rj.cols;
    const Matrix gram = dual ? Matrix(J * J.transpose()) : Matrix(J.transpose() * J);
    const Vector jtr = J.transpose() * r;

    bool accepted = false;
    bool any_solved = false;
    for (std::size_t attempt = 0; attempt < cfg.lm_max_retries; ++attempt) {
      Matrix damped = gram;
      damped.diagonal().array() += mu;
      Eigen::LLT<Matrix> llt(damped);
      Vector delta;
      if (llt.info() == Eigen::Success) {
        delta = dual ? Vector(-(J.transpose() * llt.solve(r))) : Vector(-llt.solve(jtr));
      }
      if (llt.info() == Eigen::Success && delta.allFinite()) {
        any_solved = true;
        auto trial_genes = genes;
        for (std::size_t i = 0; i < trial_genes.size(); ++i) {
          trial_genes[i] += delta[static_cast<Eigen::Index>(i)];
        }
        auto trial = genome::decode(trial_genes, params.shape);
        const double trial_sse = sse_loss(trial, data);
        if (std::isfinite(trial_sse) && trial_sse < sse) {
          genes = std::move(trial_genes);
          params = std::move(trial);
          sse = trial_sse;
          mu /= cfg.lm_damping_factor;
          accepted = true;
          break;
        }
      }
      mu *= cfg.lm_damping_factor;
      if (mu > cfg.lm_damping_max) break;
    }
    if (!accepted) {
      if (!any_solved) {
        throw Error(ErrorKind::Numeric, "LM system stayed singular after damping at iteration " +
                                            std::to_string(it));
      }
      result.stop = StopReason::DampingLimit;
      break;
    }
    result.curve.push_back(point(it, sse, params, data));
    if (result.curve.back().mse <= cfg.goal_mse) {
      result.stop = StopReason::Goal;
      break;
    }
  }
  result.params = std::move(params);
  return result;
}

TrainResult train(NetworkParams params, const dataset::Samples& data, const TrainConfig& cfg) {
  return cfg.trainer == Trainer::LevenbergMarquardt ? train_lm(std::move(params), data, cfg)
                                                    : train_gd(std::move(params), data, cfg);
}

Evaluation evaluate(const NetworkParams& params, const dataset::Samples& data) {
  if (data.empty()) throw Error(ErrorKind::InvalidArgument, "cannot evaluate on an empty data set");
  require_targets(params, data);
  Evaluation ev;
  double sse = 0.0;
  std::size_t level_hits = 0;
  for (const auto& sample : data) {
    const auto act = forward(params, sample.features);
    double abs_sum = 0.0;
    for (std::size_t k = 0; k < act.output.size(); ++k) {
      const double r = act.output[k] - sample.targets[k];
      sse += r * r;
      abs_sum += std::abs(r);
    }
    ev.predictions.push_back(act.output.front());
    ev.per_sample_abs_error.push_back(abs_sum / static_cast<double>(act.output.size()));
    if (dataset::classify_warning(act.output.front()) ==
        dataset::classify_warning(sample.targets.front())) {
      ++level_hits;
    }
  }
  ev.mse = mse_from_sse(sse, params, data);
  ev.level_accuracy = static_cast<double>(level_hits) / static_cast<double>(data.size());
  return ev;
}

}  // namespace gabp::network
