#include <cmath>
#include <random>

#include "doctest.h"
#include "gabp/error.hpp"
#include "gabp/genome.hpp"
#include "gabp/network.hpp"
#include "oracles.hpp"

using namespace gabp::network;
using gabp::dataset::Sample;
using gabp::dataset::Samples;

namespace {

NetworkParams hand_net_121() {
  NetworkParams p(NetworkShape{1, 2, 1});
  p.w = {0.5, -1.5};
  p.gamma = {0.1, 0.2};
  p.v = {0.7, -0.3};
  p.h = {0.05};
  return p;
}

// Targets equal to the network's own outputs.
Samples fitted_samples(const NetworkParams& p, std::size_t count, std::mt19937_64& rng) {
  auto data = oracle::random_samples(count, p.shape.inputs, p.shape.outputs, rng);
  for (auto& s : data) s.targets = forward(p, s.features).output;
  return data;
}

std::vector<double> flat(const NetworkParams& p) { return gabp::genome::encode(p); }

}  // namespace

TEST_CASE("hidden_layer_size") {
  CHECK(hidden_layer_size(19, 1, 1) == 11);
  CHECK(hidden_layer_size(1, 1, 1) == 2);
  CHECK(hidden_layer_size(4, 2, 3) == 6);
  CHECK(hidden_layer_size(2, 1, 10) == 11);
  CHECK_THROWS_AS(hidden_layer_size(19, 1, 0), gabp::Error);
  CHECK_THROWS_AS(hidden_layer_size(19, 1, 11), gabp::Error);
}

TEST_CASE("tansig matches its closed form, is odd and bounded") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-20, 20);
  for (int i = 0; i < 1000; ++i) {
    const double z = d(rng);
    const double t = tansig(z);
    CHECK(t == doctest::Approx(oracle::tansig_formula(z)).epsilon(1e-12));
    CHECK(std::abs(tansig(-z) + t) <= 1e-12);
    CHECK(t >= -1.0);
    CHECK(t <= 1.0);
  }
  for (double z : {-3.0, -0.5, 0.0, 0.25, 4.0}) {
    CHECK(tansig(z) > -1.0);
    CHECK(tansig(z) < 1.0);
  }
  CHECK(tansig(0.0) == 0.0);
}

TEST_CASE("forward") {
  SUBCASE("zero weights give tansig(gamma) and h") {
    NetworkParams p(NetworkShape{3, 2, 2});
    p.gamma = {0.3, -0.7};
    p.h = {0.25, -1.5};
    const auto act = forward(p, std::vector<double>{5, -2, 9});
    CHECK(act.hidden[0] == doctest::Approx(std::tanh(0.3)));
    CHECK(act.hidden[1] == doctest::Approx(std::tanh(-0.7)));
    CHECK(act.output == p.h);
  }
  SUBCASE("zero input and thresholds") {
    std::mt19937_64 rng(1);
    auto p = oracle::random_params({4, 3, 1}, rng);
    p.gamma.assign(3, 0.0);
    const auto act = forward(p, std::vector<double>(4, 0.0));
    CHECK(act.hidden == std::vector<double>(3, 0.0));
    CHECK(act.output == p.h);
  }
  SUBCASE("hand-evaluated 1-2-1 network") {
    // x = 0.8: z = (0.5, -1.0), evaluated with 2/(1+exp(-2z))-1.
    const auto act = forward(hand_net_121(), std::vector<double>{0.8});
    CHECK(act.hidden[0] == doctest::Approx(0.4621171572600098).epsilon(1e-12));
    CHECK(act.hidden[1] == doctest::Approx(-0.761594155955765).epsilon(1e-12));
    CHECK(act.output[0] == doctest::Approx(0.6019602568687363).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(forward(hand_net_121(), std::vector<double>{1, 2}), gabp::Error);
  }
  SUBCASE("deterministic and matches the scalar oracle") {
    std::mt19937_64 rng(9);
    const auto p = oracle::random_params({19, 11, 1}, rng);
    const auto x = oracle::random_samples(1, 19, 1, rng).front().features;
    const auto a = forward(p, x).output;
    const auto b = forward(p, x).output;
    CHECK(a == b);
    CHECK(a[0] == doctest::Approx(oracle::forward(p, x)[0]).epsilon(1e-12));
  }
}

TEST_CASE("sse_loss") {
  std::mt19937_64 rng(2);
  const auto p = oracle::random_params({3, 4, 2}, rng);
  CHECK(sse_loss(p, fitted_samples(p, 5, rng)) == 0.0);

  NetworkParams constant(NetworkShape{1, 1, 1});
  constant.h = {0.5};
  CHECK(sse_loss(constant, Samples{{{0.0}, {0.0}}}) == doctest::Approx(0.25));
  CHECK(sse_loss(constant, Samples{{{0.0}, {0.4}}, {{1.0}, {0.7}}}) == doctest::Approx(0.05));

  CHECK_THROWS_AS(sse_loss(constant, Samples{{{0.0}, {}}}), gabp::Error);
}

TEST_CASE("gradient") {
  SUBCASE("perfect fit has zero gradient") {
    std::mt19937_64 rng(4);
    const auto p = oracle::random_params({3, 4, 2}, rng);
    const auto g = flat(gradient(p, fitted_samples(p, 6, rng)));
    for (double x : g) CHECK(x == 0.0);
  }
  SUBCASE("matches central finite differences") {
    std::mt19937_64 rng(8);
    const auto p = oracle::random_params({3, 4, 2}, rng);
    const auto data = oracle::random_samples(5, 3, 2, rng);
    CHECK(oracle::max_relative_error(flat(gradient(p, data)), oracle::fd_gradient(p, data)) < 1e-5);
  }
  SUBCASE("output threshold derivative is 2 (yhat - y)") {
    std::mt19937_64 rng(12);
    auto p = oracle::random_params({2, 3, 1}, rng, 1e-4);
    const Samples one{{{0.3, 0.6}, {0.8}}};
    const double yhat = forward(p, one[0].features).output[0];
    CHECK(gradient(p, one).h[0] == doctest::Approx(2.0 * (yhat - 0.8)).epsilon(1e-12));
  }
}

TEST_CASE("Jacobian transpose times residuals is half the gradient") {
  std::mt19937_64 rng(21);
  for (std::size_t trial = 0; trial < 20; ++trial) {
    const NetworkShape shape{1 + trial % 4, 1 + trial % 5, 1 + trial % 3};
    const auto p = oracle::random_params(shape, rng);
    const auto data = oracle::random_samples(1 + trial % 6, shape.inputs, shape.outputs, rng);
    const auto rj = residual_jacobian(p, data);
    const auto g = flat(gradient(p, data));
    REQUIRE(rj.cols == g.size());
    for (std::size_t c = 0; c < rj.cols; ++c) {
      double jtr = 0.0;
      for (std::size_t r = 0; r < rj.rows; ++r) jtr += rj.jacobian[r * rj.cols + c] * rj.residuals[r];
      CHECK(std::abs(jtr - 0.5 * g[c]) <= 1e-10);
    }
  }
}

TEST_CASE("train_gd") {
  TrainConfig cfg;
  cfg.trainer = Trainer::GradientDescent;

  SUBCASE("already at goal returns immediately") {
    std::mt19937_64 rng(1);
    const auto p = oracle::random_params({2, 2, 1}, rng);
    const auto r = train_gd(p, fitted_samples(p, 3, rng), cfg);
    CHECK(r.curve.size() == 1);
    CHECK(r.stop == StopReason::Goal);
    CHECK(r.params == p);
  }
  SUBCASE("zero learning rate leaves parameters untouched") {
    std::mt19937_64 rng(2);
    const auto p = oracle::random_params({2, 2, 1}, rng);
    cfg.learning_rate = 0.0;
    cfg.max_iterations = 5;
    const auto r = train_gd(p, oracle::random_samples(3, 2, 1, rng), cfg);
    CHECK(r.params == p);
    CHECK(r.stop == StopReason::MaxIterations);
    CHECK(r.curve.size() == 6);
  }
  SUBCASE("output-bias recurrence h_k = y + (1 - 2 lr)^k (h_0 - y)") {
    // With W, gamma, V all zero only h receives gradient.
    NetworkParams p(NetworkShape{1, 1, 1});
    p.h = {0.0};
    const Samples one{{{0.5}, {1.0}}};
    cfg.learning_rate = 0.05;
    cfg.max_iterations = 40;
    cfg.goal_mse = 1e-300;
    const auto r = train_gd(p, one, cfg);
    REQUIRE(r.curve.size() == 41);
    for (std::size_t k = 0; k < r.curve.size(); ++k) {
      const double expected_residual = std::pow(0.9, static_cast<double>(k)) * (0.0 - 1.0);
      CHECK(r.curve[k].sse == doctest::Approx(expected_residual * expected_residual).epsilon(1e-10));
      if (k) CHECK(r.curve[k].sse < r.curve[k - 1].sse);
    }
    CHECK(r.params.h[0] == doctest::Approx(1.0 - std::pow(0.9, 40.0)).epsilon(1e-12));
  }
  SUBCASE("small learning rate never increases SSE") {
    std::mt19937_64 rng(3);
    const auto p = oracle::random_params({5, 4, 1}, rng, 0.5);
    const auto data = oracle::random_samples(8, 5, 1, rng);
    cfg.learning_rate = 1e-3;
    cfg.max_iterations = 300;
    const auto r = train_gd(p, data, cfg);
    for (std::size_t k = 1; k < r.curve.size(); ++k) CHECK(r.curve[k].sse <= r.curve[k - 1].sse);
    CHECK(r.curve.back().sse < r.curve.front().sse);
  }
  SUBCASE("divergence is reported with its iteration") {
    std::mt19937_64 rng(4);
    const auto p = oracle::random_params({2, 2, 1}, rng);
    cfg.learning_rate = 1e300;
    try {
      train_gd(p, oracle::random_samples(3, 2, 1, rng), cfg);
      FAIL("expected divergence");
    } catch (const gabp::Error& e) {
      CHECK(e.kind() == gabp::ErrorKind::Numeric);
      CHECK(std::string(e.what()).find("iteration") != std::string::npos);
    }
  }
}

TEST_CASE("train_lm") {
  TrainConfig cfg;

  SUBCASE("perfect start stops at goal") {
    std::mt19937_64 rng(1);
    const auto p = oracle::random_params({3, 3, 1}, rng);
    const auto r = train_lm(p, fitted_samples(p, 4, rng), cfg);
    CHECK(r.curve.size() == 1);
    CHECK(r.stop == StopReason::Goal);
  }
  SUBCASE("constant inputs converge to the least-squares mean") {
    // Identical inputs make the best achievable prediction the target mean,
    // so the minimum SSE is the targets' sum of squared deviations.
    Samples data;
    for (double y : {0.2, 0.5, 0.9, 0.4}) data.push_back({{0.3, 0.7}, {y}});
    const double least_squares_sse = 0.09 + 0.0 + 0.16 + 0.01;
    std::mt19937_64 rng(2);
    const auto p = oracle::random_params({2, 3, 1}, rng, 0.5);
    cfg.max_iterations = 100;
    const auto r = train_lm(p, data, cfg);
    CHECK(r.curve.back().sse == doctest::Approx(least_squares_sse).epsilon(1e-9));
    CHECK(forward(r.params, data[0].features).output[0] == doctest::Approx(0.5).epsilon(1e-6));
    std::size_t reached = r.curve.size();
    for (std::size_t k = 0; k < r.curve.size(); ++k) {
      if (r.curve[k].sse <= least_squares_sse * (1 + 1e-9)) {
        reached = k;
        break;
      }
    }
    CHECK(reached <= 10);
  }
  SUBCASE("accepted steps strictly decrease SSE and reach the goal") {
    std::mt19937_64 rng(5);
    for (const NetworkShape shape : {NetworkShape{1, 1, 1}, NetworkShape{4, 3, 2}, NetworkShape{19, 11, 1}}) {
      const auto truth = oracle::random_params(shape, rng);
      const auto data = fitted_samples(truth, shape.inputs == 1 ? 12 : 10, rng);
      const auto start = oracle::random_params(shape, rng);
      cfg.max_iterations = 200;
      const auto r = train_lm(start, data, cfg);
      for (std::size_t k = 1; k < r.curve.size(); ++k) {
        CHECK(r.curve[k].sse < r.curve[k - 1].sse);
        CHECK(r.curve[k].iteration == k);
      }
      CHECK(r.stop == StopReason::Goal);
      CHECK(r.curve.back().mse <= cfg.goal_mse);
    }
  }
  SUBCASE("zero iteration cap evaluates only") {
    std::mt19937_64 rng(6);
    const auto p = oracle::random_params({2, 2, 1}, rng);
    cfg.max_iterations = 0;
    const auto r = train_lm(p, oracle::random_samples(3, 2, 1, rng), cfg);
    CHECK(r.params == p);
    CHECK(r.curve.size() == 1);
    CHECK(r.stop == StopReason::MaxIterations);
  }
  SUBCASE("invalid configuration") {
    std::mt19937_64 rng(7);
    const auto p = oracle::random_params({2, 2, 1}, rng);
    cfg.lm_damping_factor = 1.0;
    CHECK_THROWS_AS(train_lm(p, oracle::random_samples(3, 2, 1, rng), cfg), gabp::Error);
  }
}

TEST_CASE("evaluate") {
  NetworkParams constant(NetworkShape{1, 1, 1});
  SUBCASE("perfect predictions") {
    constant.h = {0.7};
    const auto ev = evaluate(constant, Samples{{{0.1}, {0.7}}, {{0.9}, {0.7}}});
    CHECK(ev.mse == 0.0);
    CHECK(ev.level_accuracy == 1.0);
  }
  SUBCASE("level agreement follows bins") {
    constant.h = {0.45};
    CHECK(evaluate(constant, Samples{{{0.0}, {0.55}}}).level_accuracy == 1.0);
    constant.h = {0.39};
    CHECK(evaluate(constant, Samples{{{0.0}, {0.41}}}).level_accuracy == 0.0);
  }
  SUBCASE("single sample arithmetic") {
    constant.h = {0.3};
    const auto ev = evaluate(constant, Samples{{{0.0}, {0.1}}});
    CHECK(ev.mse == doctest::Approx(0.04));
    CHECK(ev.per_sample_abs_error[0] == doctest::Approx(0.2));
  }
  SUBCASE("empty data") { CHECK_THROWS_AS(evaluate(constant, Samples{}), gabp::Error); }
}
