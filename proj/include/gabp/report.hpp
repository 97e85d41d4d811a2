#ifndef GABP_REPORT_HPP
#define GABP_REPORT_HPP

#include <string>

#include "gabp/evolution.hpp"
#include "gabp/network.hpp"
#include "gabp/pipeline.hpp"

// Plain-text exports. CSV reals use the shortest round-trip representation.
namespace gabp::report {

std::string trace_csv(const evolution::EvolutionTrace& trace);
std::string curve_csv(const network::ErrorCurve& curve);

// key,value rows: variant, stop reason, iterations, metrics, seed.
std::string run_summary_csv(const pipeline::RunReport& run);

// One row per test sample with both variants' predictions and levels.
std::string comparison_errors_csv(const pipeline::ComparisonReport& cmp);
// iteration,gabp_sse,gabp_mse,bp_sse,bp_mse; a leg that stopped early leaves
// its columns blank.
std::string comparison_curves_csv(const pipeline::ComparisonReport& cmp);

std::string curves_svg(const pipeline::ComparisonReport& cmp);
std::string predictions_svg(const pipeline::ComparisonReport& cmp);

const char* variant_name(pipeline::Variant v) noexcept;
const char* stop_reason_name(network::StopReason r) noexcept;

}  // namespace gabp::report

#endif  // GABP_REPORT_HPP
