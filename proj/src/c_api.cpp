#include "gabp/gabp.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "gabp/dataset.hpp"
#include "gabp/error.hpp"
#include "gabp/evolution.hpp"
#include "gabp/genome.hpp"
#include "gabp/model.hpp"
#include "gabp/network.hpp"
#include "gabp/pipeline.hpp"
#include "gabp/report.hpp"

#ifndef GABP_VERSION_STRING
#define GABP_VERSION_STRING "0.0.0"
#endif

struct gabp_dataset {
  std::size_t n_features = 0;
  gabp::dataset::Samples samples;
};

struct gabp_norm {
  gabp::dataset::NormStats stats;
};

struct gabp_model {
  gabp::model::Model model;
};

struct gabp_report {
  gabp::pipeline::RunReport run;
};

struct gabp_comparison {
  gabp::pipeline::ComparisonReport cmp;
};

namespace {

thread_local std::string last_error;

gabp_status status_for(gabp::ErrorKind kind) {
  switch (kind) {
    case gabp::ErrorKind::InvalidArgument: return GABP_E_INVALID_ARGUMENT;
    case gabp::ErrorKind::Io: return GABP_E_IO;
    case gabp::ErrorKind::Parse: return GABP_E_PARSE;
    case gabp::ErrorKind::Dimension: return GABP_E_DIMENSION;
    case gabp::ErrorKind::Numeric: return GABP_E_NUMERIC;
    case gabp::ErrorKind::Mismatch: return GABP_E_MISMATCH;
  }
  return GABP_E_INTERNAL;
}

template <class F>
gabp_status guarded(F&& body) noexcept {
  try {
    body();
    last_error.clear();
    return GABP_OK;
  } catch (const gabp::Error& e) {
    last_error = e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GABP_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GABP_E_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return GABP_E_INTERNAL;
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw gabp::Error(gabp::ErrorKind::InvalidArgument, message);
}

std::size_t copy_text(const std::string& text, char* buf, std::size_t cap) noexcept {
  if (buf && cap > 0) {
    const std::size_t n = text.size() < cap - 1 ? text.size() : cap - 1;
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
  }
  return text.size();
}

template <class F>
std::size_t text_export(F&& produce, char* buf, std::size_t cap) noexcept {
  try {
    return copy_text(produce(), buf, cap);
  } catch (const std::exception& e) {
    last_error = e.what();
    if (buf && cap > 0) buf[0] = '\0';
    return 0;
  }
}

gabp::network::NetworkShape to_shape(gabp_shape s) { return {s.inputs, s.hidden, s.outputs}; }

gabp_shape from_shape(const gabp::network::NetworkShape& s) {
  return {s.inputs, s.hidden, s.outputs};
}

gabp::evolution::GAConfig to_ga(const gabp_ga_config& c) {
  gabp::evolution::GAConfig g;
  g.population_size = c.population_size;
  g.crossover_prob = c.crossover_prob;
  g.mutation_prob = c.mutation_prob;
  g.max_generations = c.max_generations;
  g.gene_min = c.gene_min;
  g.gene_max = c.gene_max;
  g.selection_k = c.selection_k;
  g.seed = c.seed;
  return g;
}

gabp::network::TrainConfig to_train(const gabp_train_config& c) {
  gabp::network::TrainConfig t;
  t.trainer = c.trainer == GABP_TRAINER_GD ? gabp::network::Trainer::GradientDescent
                                           : gabp::network::Trainer::LevenbergMarquardt;
  t.learning_rate = c.learning_rate;
  t.goal_mse = c.goal_mse;
  t.max_iterations = c.max_iterations;
  t.lm_damping_init = c.lm_damping_init;
  t.lm_damping_factor = c.lm_damping_factor;
  t.lm_max_retries = c.lm_max_retries;
  t.lm_damping_max = c.lm_damping_max;
  return t;
}

gabp_metrics to_metrics(const gabp::network::Evaluation& e, std::size_t n) {
  return {e.mse, e.level_accuracy, n};
}

const gabp::dataset::Samples& samples_or_empty(const gabp_dataset* ds) {
  static const gabp::dataset::Samples empty;
  return ds ? ds->samples : empty;
}

}  // namespace

extern "C" {

const char* gabp_last_error(void) { return last_error.c_str(); }

const char* gabp_status_name(gabp_status status) {
  switch (status) {
    case GABP_OK: return "ok";
    case GABP_E_INVALID_ARGUMENT: return "invalid argument";
    case GABP_E_IO: return "i/o error";
    case GABP_E_PARSE: return "parse error";
    case GABP_E_DIMENSION: return "dimension mismatch";
    case GABP_E_NUMERIC: return "numeric failure";
    case GABP_E_MISMATCH: return "split mismatch";
    case GABP_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* gabp_version(void) { return GABP_VERSION_STRING; }

gabp_shape gabp_shape_default(void) { return from_shape(gabp::network::NetworkShape{}); }

void gabp_ga_config_default(gabp_ga_config* cfg) {
  if (!cfg) return;
  const gabp::evolution::GAConfig d;
  *cfg = {d.population_size, d.crossover_prob, d.mutation_prob, d.max_generations,
          d.gene_min,        d.gene_max,       d.selection_k,   d.seed};
}

void gabp_train_config_default(gabp_train_config* cfg) {
  if (!cfg) return;
  const gabp::network::TrainConfig d;
  *cfg = {GABP_TRAINER_LM,   d.learning_rate,     d.goal_mse,       d.max_iterations,
          d.lm_damping_init, d.lm_damping_factor, d.lm_max_retries, d.lm_damping_max};
}

gabp_status gabp_hidden_layer_size(size_t inputs, size_t outputs, int adjust, size_t* out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = gabp::network::hidden_layer_size(inputs, outputs, adjust);
  });
}

size_t gabp_chromosome_length(gabp_shape shape) {
  return gabp::genome::chromosome_length(to_shape(shape));
}

size_t gabp_schema_size(void) { return gabp::dataset::IndicatorSchema{}.size(); }

namespace {
const gabp::dataset::IndicatorSchema& schema() {
  static const gabp::dataset::IndicatorSchema s;
  return s;
}
}  // namespace

const char* gabp_schema_code(size_t index) {
  return index < schema().size() ? schema()[index].code.c_str() : nullptr;
}

const char* gabp_schema_name(size_t index) {
  return index < schema().size() ? schema()[index].name.c_str() : nullptr;
}

gabp_warning_level gabp_classify_warning(double score) {
  return static_cast<gabp_warning_level>(gabp::dataset::classify_warning(score));
}

const char* gabp_warning_level_name(gabp_warning_level level) {
  return gabp::dataset::level_name(static_cast<gabp::dataset::WarningLevel>(level)).data();
}

gabp_status gabp_dataset_load(const char* path, size_t n_features, gabp_target_mode mode,
                              gabp_dataset** out) {
  return guarded([&] {
    require(path && out, "null argument");
    auto ds = std::make_unique<gabp_dataset>();
    ds->n_features = n_features;
    const auto m = mode == GABP_TARGET_NONE       ? gabp::dataset::TargetMode::None
                   : mode == GABP_TARGET_REQUIRED ? gabp::dataset::TargetMode::Required
                                                  : gabp::dataset::TargetMode::Auto;
    ds->samples = gabp::dataset::load_samples(path, n_features, m);
    *out = ds.release();
  });
}

gabp_status gabp_dataset_create(size_t n_features, gabp_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    require(n_features > 0, "feature count must be positive");
    auto ds = std::make_unique<gabp_dataset>();
    ds->n_features = n_features;
    *out = ds.release();
  });
}

gabp_status gabp_dataset_append(gabp_dataset* ds, const double* features, size_t n_features,
                                const double* targets, size_t n_targets) {
  return guarded([&] {
    require(ds && features, "null argument");
    if (n_features != ds->n_features) {
      throw gabp::Error(gabp::ErrorKind::Dimension, "row has " + std::to_string(n_features) +
                                                        " features, data set expects " +
                                                        std::to_string(ds->n_features));
    }
    require(targets == nullptr || n_targets > 0, "targets pointer given with zero count");
    gabp::dataset::Sample s;
    s.features.assign(features, features + n_features);
    if (targets) s.targets.assign(targets, targets + n_targets);
    ds->samples.push_back(std::move(s));
  });
}

size_t gabp_dataset_size(const gabp_dataset* ds) { return ds ? ds->samples.size() : 0; }

size_t gabp_dataset_feature_count(const gabp_dataset* ds) { return ds ? ds->n_features : 0; }

int gabp_dataset_has_targets(const gabp_dataset* ds) {
  if (!ds || ds->samples.empty()) return 0;
  for (const auto& s : ds->samples) {
    if (!s.has_target()) return 0;
  }
  return 1;
}

gabp_status gabp_dataset_features(const gabp_dataset* ds, size_t row, double* out, size_t cap) {
  return guarded([&] {
    require(ds && out, "null argument");
    require(row < ds->samples.size(), "row index out of range");
    require(cap >= ds->n_features, "output buffer too small");
    const auto& f = ds->samples[row].features;
    std::copy(f.begin(), f.end(), out);
  });
}

gabp_status gabp_dataset_target(const gabp_dataset* ds, size_t row, double* out) {
  return guarded([&] {
    require(ds && out, "null argument");
    require(row < ds->samples.size(), "row index out of range");
    require(ds->samples[row].has_target(), "row has no target");
    *out = ds->samples[row].targets.front();
  });
}

size_t gabp_dataset_to_csv(const gabp_dataset* ds, char* buf, size_t cap) {
  return text_export(
      [&] {
        require(ds != nullptr, "null data set");
        const auto codes = gabp::model::default_codes(ds->n_features);
        return gabp::dataset::format_samples(ds->samples, codes);
      },
      buf, cap);
}

void gabp_dataset_free(gabp_dataset* ds) { delete ds; }

gabp_status gabp_synth_dataset(size_t n_samples, size_t n_train, gabp_shape shape,
                               double noise_sd, double gene_min, double gene_max, uint64_t seed,
                               gabp_dataset** train, gabp_dataset** test) {
  return guarded([&] {
    require(train && test, "null output pointer");
    auto data = gabp::pipeline::synth_dataset(n_samples, to_shape(shape), noise_sd, seed, n_train,
                                              gene_min, gene_max);
    auto tr = std::make_unique<gabp_dataset>();
    auto te = std::make_unique<gabp_dataset>();
    tr->n_features = te->n_features = shape.inputs;
    tr->samples = std::move(data.train);
    te->samples = std::move(data.test);
    *train = tr.release();
    *test = te.release();
  });
}

gabp_status gabp_norm_fit(const gabp_dataset* raw, const int* cost_flags, gabp_norm** out) {
  return guarded([&] {
    require(raw && out, "null argument");
    std::vector<gabp::dataset::Orientation> orient(raw->n_features,
                                                   gabp::dataset::Orientation::Benefit);
    if (cost_flags) {
      for (std::size_t i = 0; i < orient.size(); ++i) {
        if (cost_flags[i]) orient[i] = gabp::dataset::Orientation::Cost;
      }
    }
    auto n = std::make_unique<gabp_norm>();
    n->stats = gabp::dataset::fit_normalization(raw->samples, orient);
    *out = n.release();
  });
}

gabp_status gabp_norm_apply(const gabp_norm* norm, const gabp_dataset* raw, gabp_dataset** out) {
  return guarded([&] {
    require(norm && raw && out, "null argument");
    auto ds = std::make_unique<gabp_dataset>();
    ds->n_features = raw->n_features;
    ds->samples = gabp::dataset::apply_normalization(norm->stats, raw->samples);
    *out = ds.release();
  });
}

gabp_status gabp_norm_column(const gabp_norm* norm, size_t column, double* min, double* max,
                             int* is_cost) {
  return guarded([&] {
    require(norm != nullptr, "null normalization");
    require(column < norm->stats.columns.size(), "column index out of range");
    const auto& c = norm->stats.columns[column];
    if (min) *min = c.min;
    if (max) *max = c.max;
    if (is_cost) *is_cost = c.orientation == gabp::dataset::Orientation::Cost;
  });
}

void gabp_norm_free(gabp_norm* norm) { delete norm; }

gabp_status gabp_model_from_genes(gabp_shape shape, const double* genes, size_t n_genes,
                                  gabp_model** out) {
  return guarded([&] {
    require(genes && out, "null argument");
    auto params = gabp::genome::decode({genes, n_genes}, to_shape(shape));
    gabp::network::validate(params);
    auto m = std::make_unique<gabp_model>();
    m->model = gabp::model::make_model(std::move(params));
    *out = m.release();
  });
}

gabp_shape gabp_model_shape(const gabp_model* model) {
  return model ? from_shape(model->model.params.shape) : gabp_shape{0, 0, 0};
}

gabp_status gabp_model_genes(const gabp_model* model, double* out, size_t cap) {
  return guarded([&] {
    require(model && out, "null argument");
    const auto genes = gabp::genome::encode(model->model.params);
    require(cap >= genes.size(), "output buffer too small");
    std::copy(genes.begin(), genes.end(), out);
  });
}

gabp_status gabp_model_set_normalization(gabp_model* model, const gabp_norm* norm) {
  return guarded([&] {
    require(model && norm, "null argument");
    auto params = model->model.params;
    model->model = gabp::model::make_model(std::move(params), norm->stats);
  });
}

int gabp_model_has_normalization(const gabp_model* model) {
  return model && model->model.norm ? 1 : 0;
}

gabp_status gabp_model_predict(const gabp_model* model, const double* raw_features,
                               size_t n_features, double* outputs, size_t n_outputs) {
  return guarded([&] {
    require(model && raw_features && outputs, "null argument");
    const auto y = gabp::model::predict(model->model, {raw_features, n_features});
    require(n_outputs >= y.size(), "output buffer too small");
    std::copy(y.begin(), y.end(), outputs);
  });
}

gabp_status gabp_model_evaluate(const gabp_model* model, const gabp_dataset* raw,
                                gabp_metrics* out) {
  return guarded([&] {
    require(model && raw && out, "null argument");
    const auto& m = model->model;
    const auto data = m.norm ? gabp::dataset::apply_normalization(*m.norm, raw->samples)
                             : raw->samples;
    *out = to_metrics(gabp::network::evaluate(m.params, data), data.size());
  });
}

gabp_status gabp_model_parse(const char* text, gabp_model** out) {
  return guarded([&] {
    require(text && out, "null argument");
    auto m = std::make_unique<gabp_model>();
    m->model = gabp::model::from_json(text);
    *out = m.release();
  });
}

gabp_status gabp_model_load(const char* path, gabp_model** out) {
  return guarded([&] {
    require(path && out, "null argument");
    auto m = std::make_unique<gabp_model>();
    m->model = gabp::model::load(path);
    *out = m.release();
  });
}

size_t gabp_model_to_text(const gabp_model* model, char* buf, size_t cap) {
  return text_export(
      [&] {
        require(model != nullptr, "null model");
        return gabp::model::to_json(model->model);
      },
      buf, cap);
}

void gabp_model_free(gabp_model* model) { delete model; }

gabp_status gabp_run_gabp(const gabp_dataset* train, const gabp_dataset* test, gabp_shape shape,
                          const gabp_ga_config* ga, const gabp_train_config* training,
                          gabp_report** out) {
  return guarded([&] {
    require(train && ga && training && out, "null argument");
    auto r = std::make_unique<gabp_report>();
    r->run = gabp::pipeline::run_gabp(train->samples, samples_or_empty(test), to_shape(shape),
                                      to_ga(*ga), to_train(*training));
    *out = r.release();
  });
}

gabp_status gabp_run_bp(const gabp_dataset* train, const gabp_dataset* test, gabp_shape shape,
                        const gabp_train_config* training, uint64_t seed, double gene_min,
                        double gene_max, gabp_report** out) {
  return guarded([&] {
    require(train && training && out, "null argument");
    auto r = std::make_unique<gabp_report>();
    r->run = gabp::pipeline::run_bp(train->samples, samples_or_empty(test), to_shape(shape),
                                    to_train(*training), seed, gene_min, gene_max);
    *out = r.release();
  });
}

gabp_status gabp_report_summary(const gabp_report* report, gabp_run_summary* out) {
  return guarded([&] {
    require(report && out, "null argument");
    const auto& run = report->run;
    gabp_run_summary s{};
    s.variant = run.variant == gabp::pipeline::Variant::GaBp ? GABP_VARIANT_GABP : GABP_VARIANT_BP;
    s.stop = static_cast<gabp_stop_reason>(run.stop);
    s.seed = run.seed;
    s.iterations = run.curve.empty() ? 0 : run.curve.back().iteration;
    s.generations = run.trace ? run.trace->size() : 0;
    s.initial_sse = run.curve.empty() ? 0.0 : run.curve.front().sse;
    s.final_sse = run.curve.empty() ? 0.0 : run.curve.back().sse;
    s.train = to_metrics(run.train_metrics, run.train_metrics.predictions.size());
    if (run.test_metrics) s.test = to_metrics(*run.test_metrics, run.test_targets.size());
    s.seconds = run.seconds;
    *out = s;
  });
}

gabp_status gabp_report_model(const gabp_report* report, gabp_model** out) {
  return guarded([&] {
    require(report && out, "null argument");
    auto m = std::make_unique<gabp_model>();
    m->model = gabp::model::make_model(report->run.params);
    *out = m.release();
  });
}

size_t gabp_report_curve_csv(const gabp_report* report, char* buf, size_t cap) {
  return text_export(
      [&] {
        require(report != nullptr, "null report");
        return gabp::report::curve_csv(report->run.curve);
      },
      buf, cap);
}

size_t gabp_report_trace_csv(const gabp_report* report, char* buf, size_t cap) {
  return text_export(
      [&] {
        require(report != nullptr, "null report");
        return gabp::report::trace_csv(report->run.trace.value_or(
            gabp::evolution::EvolutionTrace{}));
      },
      buf, cap);
}

size_t gabp_report_summary_csv(const gabp_report* report, char* buf, size_t cap) {
  return text_export(
      [&] {
        require(report != nullptr, "null report");
        return gabp::report::run_summary_csv(report->run);
      },
      buf, cap);
}

void gabp_report_free(gabp_report* report) { delete report; }

gabp_status gabp_compare(const gabp_report* gabp_run, const gabp_report* bp_run,
                         gabp_comparison** out) {
  return guarded([&] {
    require(gabp_run && bp_run && out, "null argument");
    require(gabp_run->run.variant == gabp::pipeline::Variant::GaBp &&
                bp_run->run.variant == gabp::pipeline::Variant::Bp,
            "compare needs one GA-BP report and one BP report");
    auto c = std::make_unique<gabp_comparison>();
    c->cmp = gabp::pipeline::compare(gabp_run->run, bp_run->run);
    *out = c.release();
  });
}

double gabp_comparison_reduction(const gabp_comparison* cmp) {
  return cmp ? cmp->cmp.relative_reduction : 0.0;
}

size_t gabp_comparison_rows(const gabp_comparison* cmp) { return cmp ? cmp->cmp.rows.size() : 0; }

size_t gabp_comparison_errors_csv(const gabp_comparison* cmp, char* buf, size_t cap) {
  return text_export([&] { require(cmp != nullptr, "null comparison"); return gabp::report::comparison_errors_csv(cmp->cmp); }, buf, cap);
}

size_t gabp_comparison_curves_csv(const gabp_comparison* cmp, char* buf, size_t cap) {
  return text_export([&] { require(cmp != nullptr, "null comparison"); return gabp::report::comparison_curves_csv(cmp->cmp); }, buf, cap);
}

size_t gabp_comparison_curves_svg(const gabp_comparison* cmp, char* buf, size_t cap) {
  return text_export([&] { require(cmp != nullptr, "null comparison"); return gabp::report::curves_svg(cmp->cmp); }, buf, cap);
}

size_t gabp_comparison_predictions_svg(const gabp_comparison* cmp, char* buf, size_t cap) {
  return text_export([&] { require(cmp != nullptr, "null comparison"); return gabp::report::predictions_svg(cmp->cmp); }, buf, cap);
}

void gabp_comparison_free(gabp_comparison* cmp) { delete cmp; }

}  // extern "C"
