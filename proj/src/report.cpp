#include "gabp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "gabp/dataset.hpp"

namespace gabp::report {

namespace {

using dataset::format_real;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string level(double score) {
  return std::string(dataset::level_name(dataset::classify_warning(score)));
}

struct Plot {
  static constexpr double kWidth = 640, kHeight = 400;
  static constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  double x_min, x_max, y_min, y_max;

  double px(double x) const {
    const double span = x_max > x_min ? x_max - x_min : 1.0;
    return kLeft + (x - x_min) / span * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    const double span = y_max > y_min ? y_max - y_min : 1.0;
    return kHeight - kBottom - (y - y_min) / span * (kHeight - kTop - kBottom);
  }
};

std::string svg_open(const std::string& title) {
  std::string s =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
      "viewBox=\"0 0 640 400\">\n"
      "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"15\">" + title + "</text>\n";
  return s;
}

std::string axes(const Plot& p, const std::string& x_label, const std::string& y_label,
                 const std::vector<std::pair<double, std::string>>& y_ticks,
                 const std::vector<std::pair<double, std::string>>& x_ticks) {
  std::string s;
  const auto x0 = fixed(Plot::kLeft), x1 = fixed(Plot::kWidth - Plot::kRight);
  const auto y0 = fixed(Plot::kHeight - Plot::kBottom), y1 = fixed(Plot::kTop);
  s += "<line x1=\"" + x0 + "\" y1=\"" + y0 + "\" x2=\"" + x1 + "\" y2=\"" + y0 +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + x0 + "\" y1=\"" + y0 + "\" x2=\"" + x0 + "\" y2=\"" + y1 +
       "\" stroke=\"black\"/>\n";
  for (const auto& [v, label] : y_ticks) {
    const auto y = fixed(p.py(v));
    s += "<line x1=\"" + fixed(Plot::kLeft - 5) + "\" y1=\"" + y + "\" x2=\"" + x0 + "\" y2=\"" +
         y + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fixed(Plot::kLeft - 8) + "\" y=\"" + y +
         "\" text-anchor=\"end\" dominant-baseline=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">" + label + "</text>\n";
  }
  for (const auto& [v, label] : x_ticks) {
    const auto x = fixed(p.px(v));
    s += "<line x1=\"" + x + "\" y1=\"" + y0 + "\" x2=\"" + x + "\" y2=\"" +
         fixed(Plot::kHeight - Plot::kBottom + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + x + "\" y=\"" + fixed(Plot::kHeight - Plot::kBottom + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + label +
         "</text>\n";
  }
  s += "<text x=\"" + fixed((Plot::kLeft + Plot::kWidth - Plot::kRight) / 2) + "\" y=\"" +
       fixed(Plot::kHeight - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + x_label +
       "</text>\n";
  s += "<text x=\"16\" y=\"" + fixed((Plot::kTop + Plot::kHeight - Plot::kBottom) / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
       "transform=\"rotate(-90 16 " + fixed((Plot::kTop + Plot::kHeight - Plot::kBottom) / 2) +
       ")\">" + y_label + "</text>\n";
  return s;
}

std::string polyline(const Plot& p, const std::vector<std::pair<double, double>>& pts,
                     const char* color) {
  std::string s = "<polyline fill=\"none\" stroke=\"";
  s += color;
  s += "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += fixed(p.px(pts[i].first)) + "," + fixed(p.py(pts[i].second));
  }
  s += "\"/>\n";
  return s;
}

std::string legend(const std::vector<std::pair<const char*, const char*>>& entries) {
  std::string s;
  double y = Plot::kTop + 10;
  for (const auto& [label, color] : entries) {
    const double x = Plot::kWidth - Plot::kRight - 110;
    s += "<line x1=\"" + fixed(x) + "\" y1=\"" + fixed(y) + "\" x2=\"" + fixed(x + 20) +
         "\" y2=\"" + fixed(y) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fixed(x + 26) + "\" y=\"" + fixed(y) +
         "\" dominant-baseline=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + label +
         "</text>\n";
    y += 16;
  }
  return s;
}

}  // namespace

const char* variant_name(pipeline::Variant v) noexcept {
  return v == pipeline::Variant::GaBp ? "gabp" : "bp";
}

const char* stop_reason_name(network::StopReason r) noexcept {
  switch (r) {
    case network::StopReason::Goal: return "goal";
    case network::StopReason::MaxIterations: return "max_iter";
    case network::StopReason::DampingLimit: return "damping_limit";
  }
  return "unknown";
}

std::string trace_csv(const evolution::EvolutionTrace& trace) {
  std::string out = "generation,best_sse,mean_sse\n";
  for (const auto& g : trace) {
    out += std::to_string(g.generation) + "," + format_real(g.best_error) + "," +
           format_real(g.mean_error) + "\n";
  }
  return out;
}

std::string curve_csv(const network::ErrorCurve& curve) {
  std::string out = "iteration,sse,mse\n";
  for (const auto& p : curve) {
    out += std::to_string(p.iteration) + "," + format_real(p.sse) + "," + format_real(p.mse) + "\n";
  }
  return out;
}

std::string run_summary_csv(const pipeline::RunReport& run) {
  std::string out = "key,value\n";
  auto row = [&out](const std::string& k, const std::string& v) { out += k + "," + v + "\n"; };
  row("variant", variant_name(run.variant));
  row("seed", std::to_string(run.seed));
  row("stop_reason", stop_reason_name(run.stop));
  row("iterations", std::to_string(run.curve.empty() ? 0 : run.curve.back().iteration));
  row("generations", std::to_string(run.trace ? run.trace->size() : 0));
  if (run.trace && !run.trace->empty()) row("ga_best_sse", format_real(run.trace->back().best_error));
  row("initial_sse", format_real(run.curve.empty() ? 0.0 : run.curve.front().sse));
  row("train_mse", format_real(run.train_metrics.mse));
  row("train_level_accuracy", format_real(run.train_metrics.level_accuracy));
  if (run.test_metrics) {
    row("test_mse", format_real(run.test_metrics->mse));
    row("test_level_accuracy", format_real(run.test_metrics->level_accuracy));
  }
  return out;
}

std::string comparison_errors_csv(const pipeline::ComparisonReport& cmp) {
  std::string out =
      "sample,target,gabp_prediction,bp_prediction,gabp_abs_error,bp_abs_error,"
      "target_level,gabp_level,bp_level\n";
  for (const auto& r : cmp.rows) {
    out += std::to_string(r.sample + 1) + "," + format_real(r.target) + "," +
           format_real(r.gabp_prediction) + "," + format_real(r.bp_prediction) + "," +
           format_real(r.gabp_abs_error) + "," + format_real(r.bp_abs_error) + "," +
           level(r.target) + "," + level(r.gabp_prediction) + "," + level(r.bp_prediction) + "\n";
  }
  return out;
}

std::string comparison_curves_csv(const pipeline::ComparisonReport& cmp) {
  std::string out = "iteration,gabp_sse,gabp_mse,bp_sse,bp_mse\n";
  const auto& a = cmp.gabp.curve;
  const auto& b = cmp.bp.curve;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    out += std::to_string(i);
    for (const auto* c : {&a, &b}) {
      if (i < c->size()) {
        out += "," + format_real((*c)[i].sse) + "," + format_real((*c)[i].mse);
      } else {
        out += ",,";
      }
    }
    out += "\n";
  }
  return out;
}

std::string curves_svg(const pipeline::ComparisonReport& cmp) {
  constexpr double kFloor = 1e-12;
  auto log_points = [&](const network::ErrorCurve& c) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : c) {
      pts.emplace_back(static_cast<double>(p.iteration), std::log10(std::max(p.mse, kFloor)));
    }
    return pts;
  };
  const auto ga = log_points(cmp.gabp.curve);
  const auto bp = log_points(cmp.bp.curve);
  double x_max = 1.0, y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
  for (const auto* pts : {&ga, &bp}) {
    for (const auto& [x, y] : *pts) {
      x_max = std::max(x_max, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(y_lo)) y_lo = y_hi = 0.0;
  Plot p{0.0, x_max, std::floor(y_lo), std::ceil(y_hi)};
  if (p.y_max <= p.y_min) p.y_max = p.y_min + 1.0;

  std::vector<std::pair<double, std::string>> y_ticks, x_ticks;
  for (double e = p.y_min; e <= p.y_max; e += 1.0) {
    y_ticks.emplace_back(e, "1e" + std::to_string(static_cast<int>(e)));
  }
  for (int i = 0; i <= 4; ++i) {
    const double x = x_max * i / 4.0;
    x_ticks.emplace_back(x, fixed(x));
  }
  std::string s = svg_open("Training error (MSE) per iteration");
  s += axes(p, "iteration", "log10 MSE", y_ticks, x_ticks);
  s += polyline(p, ga, "#1f77b4");
  s += polyline(p, bp, "#d62728");
  s += legend({{"GA-BP", "#1f77b4"}, {"BP", "#d62728"}});
  s += "</svg>\n";
  return s;
}

std::string predictions_svg(const pipeline::ComparisonReport& cmp) {
  std::vector<std::pair<double, double>> actual, ga, bp;
  for (const auto& r : cmp.rows) {
    const double x = static_cast<double>(r.sample + 1);
    actual.emplace_back(x, r.target);
    ga.emplace_back(x, r.gabp_prediction);
    bp.emplace_back(x, r.bp_prediction);
  }
  double y_lo = 0.0, y_hi = 1.0;
  for (const auto* pts : {&ga, &bp}) {
    for (const auto& [x, y] : *pts) {
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  const double n = static_cast<double>(cmp.rows.size());
  Plot p{0.5, n + 0.5, y_lo, y_hi};
  std::vector<std::pair<double, std::string>> y_ticks, x_ticks;
  for (int i = 0; i <= 5; ++i) y_ticks.emplace_back(0.2 * i, fixed(0.2 * i));
  for (const auto& r : cmp.rows) {
    x_ticks.emplace_back(static_cast<double>(r.sample + 1), std::to_string(r.sample + 1));
  }
  std::string s = svg_open("Predicted vs actual score per test sample");
  s += axes(p, "test sample", "score", y_ticks, x_ticks);
  s += polyline(p, actual, "black");
  s += polyline(p, ga, "#1f77b4");
  s += polyline(p, bp, "#d62728");
  for (const auto* pts : {&actual, &ga, &bp}) {
    const char* color = pts == &actual ? "black" : pts == &ga ? "#1f77b4" : "#d62728";
    for (const auto& [x, y] : *pts) {
      s += "<circle cx=\"" + fixed(p.px(x)) + "\" cy=\"" + fixed(p.py(y)) + "\" r=\"3\" fill=\"" +
           color + "\"/>\n";
    }
  }
  s += legend({{"actual", "black"}, {"GA-BP", "#1f77b4"}, {"BP", "#d62728"}});
  s += "</svg>\n";
  return s;
}

}  // namespace gabp::report
