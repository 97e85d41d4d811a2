#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_config.hpp"
#include "gabp/gabp.h"
#include "output_set.hpp"

namespace {

using gabp_cli::CliConfig;
using gabp_cli::OutputSet;

struct DatasetFree {
  void operator()(gabp_dataset* p) const { gabp_dataset_free(p); }
};
struct NormFree {
  void operator()(gabp_norm* p) const { gabp_norm_free(p); }
};
struct ModelFree {
  void operator()(gabp_model* p) const { gabp_model_free(p); }
};
struct ReportFree {
  void operator()(gabp_report* p) const { gabp_report_free(p); }
};
struct ComparisonFree {
  void operator()(gabp_comparison* p) const { gabp_comparison_free(p); }
};
using Dataset = std::unique_ptr<gabp_dataset, DatasetFree>;
using Norm = std::unique_ptr<gabp_norm, NormFree>;
using Model = std::unique_ptr<gabp_model, ModelFree>;
using Report = std::unique_ptr<gabp_report, ReportFree>;
using Comparison = std::unique_ptr<gabp_comparison, ComparisonFree>;

void check(gabp_status st, const std::string& stage) {
  if (st != GABP_OK) throw std::runtime_error(stage + ": " + gabp_last_error());
}

template <class T>
std::string text(size_t (*fn)(const T*, char*, size_t), const T* obj) {
  std::string s(fn(obj, nullptr, 0), '\0');
  fn(obj, s.data(), s.size() + 1);
  return s;
}

std::string real(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string level_name(double score) {
  return gabp_warning_level_name(gabp_classify_warning(score));
}

Dataset load_data(const std::string& path, size_t n_features, gabp_target_mode mode,
                  const std::string& stage) {
  gabp_dataset* raw = nullptr;
  check(gabp_dataset_load(path.c_str(), n_features, mode, &raw), stage + " (" + path + ")");
  return Dataset(raw);
}

// Training and test rows after optional normalization; `norm` is null when
// the rows are used as given.
struct Prepared {
  Dataset train;
  Dataset test;
  Norm norm;
};

Prepared prepare(const CliConfig& cfg, Dataset train, Dataset test) {
  Prepared p;
  if (!cfg.normalize) {
    p.train = std::move(train);
    p.test = std::move(test);
    return p;
  }
  const auto flags = cfg.cost_flags();
  if (gabp_dataset_feature_count(train.get()) != flags.size()) {
    throw std::runtime_error("normalize: cost indicators need the default indicator schema");
  }
  gabp_norm* norm = nullptr;
  check(gabp_norm_fit(train.get(), flags.data(), &norm), "normalize");
  p.norm.reset(norm);
  gabp_dataset* out = nullptr;
  check(gabp_norm_apply(norm, train.get(), &out), "normalize train");
  p.train.reset(out);
  if (test) {
    check(gabp_norm_apply(norm, test.get(), &out), "normalize test");
    p.test.reset(out);
  }
  return p;
}

Report run_variant(const CliConfig& cfg, gabp_variant variant, const Prepared& data,
                   std::uint64_t seed) {
  const auto shape = cfg.shape();
  gabp_report* out = nullptr;
  if (variant == GABP_VARIANT_GABP) {
    gabp_ga_config ga = cfg.ga;
    ga.seed = seed;
    check(gabp_run_gabp(data.train.get(), data.test.get(), shape, &ga, &cfg.training, &out),
          "train gabp");
  } else {
    check(gabp_run_bp(data.train.get(), data.test.get(), shape, &cfg.training, seed,
                      cfg.ga.gene_min, cfg.ga.gene_max, &out),
          "train bp");
  }
  Report r(out);
  gabp_run_summary s{};
  check(gabp_report_summary(r.get(), &s), "report");
  std::fprintf(stderr, "%s seed %llu: %.3f s, train mse %s\n",
               variant == GABP_VARIANT_GABP ? "gabp" : "bp",
               static_cast<unsigned long long>(seed), s.seconds, real(s.train.mse).c_str());
  return r;
}

gabp_run_summary summary_of(const Report& r) {
  gabp_run_summary s{};
  check(gabp_report_summary(r.get(), &s), "report");
  return s;
}

Model model_with_norm(const Report& r, const Norm& norm) {
  gabp_model* m = nullptr;
  check(gabp_report_model(r.get(), &m), "model");
  Model model(m);
  if (norm) check(gabp_model_set_normalization(model.get(), norm.get()), "model");
  return model;
}

Model load_model(const std::string& path) {
  if (path.empty()) throw std::runtime_error("model: --model is required");
  gabp_model* m = nullptr;
  check(gabp_model_load(path.c_str(), &m), "model (" + path + ")");
  Model model(m);
  if (gabp_model_shape(model.get()).outputs != 1) {
    throw std::runtime_error("model (" + path + "): expected a single output");
  }
  return model;
}

double predict_row(const gabp_model* model, const gabp_dataset* ds, size_t row) {
  std::vector<double> x(gabp_dataset_feature_count(ds));
  check(gabp_dataset_features(ds, row, x.data(), x.size()), "predict");
  double y = 0.0;
  check(gabp_model_predict(model, x.data(), x.size(), &y, 1), "predict row " + std::to_string(row + 1));
  return y;
}

// ---- commands -------------------------------------------------------------

int cmd_gen_data(const CliConfig& cfg) {
  gabp_dataset* train = nullptr;
  gabp_dataset* test = nullptr;
  check(gabp_synth_dataset(cfg.samples, cfg.train_rows, cfg.shape(), cfg.noise_sd, cfg.ga.gene_min,
                           cfg.ga.gene_max, cfg.seed, &train, &test),
        "gen-data");
  Dataset tr(train), te(test);
  const std::string head = gabp_cli::provenance(cfg, "gen-data");
  OutputSet out(cfg.out_dir);
  out.add("train.csv", head + text(gabp_dataset_to_csv, tr.get()));
  out.add("test.csv", head + text(gabp_dataset_to_csv, te.get()));
  out.commit();
  return 0;
}

int cmd_train(const CliConfig& cfg) {
  if (cfg.train_path.empty()) throw std::runtime_error("train data: --train is required");
  const size_t n = cfg.shape().inputs;
  Dataset train = load_data(cfg.train_path, n, GABP_TARGET_REQUIRED, "train data");
  Dataset test;
  if (!cfg.test_path.empty()) test = load_data(cfg.test_path, n, GABP_TARGET_REQUIRED, "test data");
  const Prepared data = prepare(cfg, std::move(train), std::move(test));

  const gabp_variant variant = cfg.variant == "bp" ? GABP_VARIANT_BP : GABP_VARIANT_GABP;
  const Report report = run_variant(cfg, variant, data, cfg.seed);
  const Model model = model_with_norm(report, data.norm);

  const std::string head = gabp_cli::provenance(cfg, "train");
  OutputSet out(cfg.out_dir);
  out.add("model.json", text(gabp_model_to_text, model.get()));
  out.add("run_summary.csv", head + text(gabp_report_summary_csv, report.get()));
  out.add("curve.csv", head + text(gabp_report_curve_csv, report.get()));
  if (variant == GABP_VARIANT_GABP) out.add("trace.csv", head + text(gabp_report_trace_csv, report.get()));
  out.commit();
  return 0;
}

int cmd_predict(const CliConfig& cfg) {
  const Model model = load_model(cfg.model_path);
  if (cfg.data_path.empty()) throw std::runtime_error("input data: --data is required");
  const Dataset ds =
      load_data(cfg.data_path, gabp_model_shape(model.get()).inputs, GABP_TARGET_AUTO, "input data");
  std::string csv = gabp_cli::provenance(cfg, "predict") + "row,score,level\n";
  for (size_t i = 0; i < gabp_dataset_size(ds.get()); ++i) {
    const double y = predict_row(model.get(), ds.get(), i);
    csv += std::to_string(i + 1) + "," + real(y) + "," + level_name(y) + "\n";
  }
  OutputSet out(cfg.out_dir);
  out.add("predictions.csv", std::move(csv));
  out.commit();
  return 0;
}

int cmd_evaluate(const CliConfig& cfg) {
  const Model model = load_model(cfg.model_path);
  if (cfg.data_path.empty()) throw std::runtime_error("input data: --data is required");
  const Dataset ds = load_data(cfg.data_path, gabp_model_shape(model.get()).inputs,
                               GABP_TARGET_REQUIRED, "input data");
  gabp_metrics metrics{};
  check(gabp_model_evaluate(model.get(), ds.get(), &metrics), "evaluate");

  const std::string head = gabp_cli::provenance(cfg, "evaluate");
  std::string rows = head + "row,target,score,abs_error,target_level,level\n";
  for (size_t i = 0; i < gabp_dataset_size(ds.get()); ++i) {
    double t = 0.0;
    check(gabp_dataset_target(ds.get(), i, &t), "evaluate");
    const double y = predict_row(model.get(), ds.get(), i);
    rows += std::to_string(i + 1) + "," + real(t) + "," + real(y) + "," + real(std::abs(y - t)) + "," +
            level_name(t) + "," + level_name(y) + "\n";
  }
  std::string summary = head + "key,value\n";
  summary += "samples," + std::to_string(metrics.samples) + "\n";
  summary += "mse," + real(metrics.mse) + "\n";
  summary += "level_accuracy," + real(metrics.level_accuracy) + "\n";

  OutputSet out(cfg.out_dir);
  out.add("evaluation.csv", std::move(rows));
  out.add("evaluation_summary.csv", std::move(summary));
  out.commit();
  return 0;
}

int cmd_compare(const CliConfig& cfg) {
  if (cfg.seeds == 0) throw std::runtime_error("compare: --seeds must be at least 1");
  const bool from_files = !cfg.train_path.empty();
  if (from_files && cfg.test_path.empty()) {
    throw std::runtime_error("test data: --test is required with --train");
  }
  const size_t n = cfg.shape().inputs;
  const std::string head = gabp_cli::provenance(cfg, "compare");
  OutputSet out(cfg.out_dir);

  std::string table = head +
                      "seed,gabp_train_mse,gabp_test_mse,bp_train_mse,bp_test_mse,relative_reduction,"
                      "gabp_initial_sse,bp_initial_sse,gabp_test_level_accuracy,bp_test_level_accuracy\n";
  std::vector<std::vector<double>> columns(9);

  for (size_t i = 0; i < cfg.seeds; ++i) {
    const std::uint64_t seed = cfg.seed + i;
    Dataset train, test;
    if (from_files) {
      train = load_data(cfg.train_path, n, GABP_TARGET_REQUIRED, "train data");
      test = load_data(cfg.test_path, n, GABP_TARGET_REQUIRED, "test data");
    } else {
      gabp_dataset* tr = nullptr;
      gabp_dataset* te = nullptr;
      check(gabp_synth_dataset(cfg.samples, cfg.train_rows, cfg.shape(), cfg.noise_sd,
                               cfg.ga.gene_min, cfg.ga.gene_max, seed, &tr, &te),
            "gen-data");
      train.reset(tr);
      test.reset(te);
    }
    const Prepared data = prepare(cfg, std::move(train), std::move(test));
    const Report g = run_variant(cfg, GABP_VARIANT_GABP, data, seed);
    const Report b = run_variant(cfg, GABP_VARIANT_BP, data, seed);
    gabp_comparison* raw = nullptr;
    check(gabp_compare(g.get(), b.get(), &raw), "compare");
    const Comparison cmp(raw);

    const auto gs = summary_of(g);
    const auto bs = summary_of(b);
    const std::vector<double> values = {gs.train.mse,       gs.test.mse,
                                        bs.train.mse,       bs.test.mse,
                                        gabp_comparison_reduction(cmp.get()),
                                        gs.initial_sse,     bs.initial_sse,
                                        gs.test.level_accuracy, bs.test.level_accuracy};
    table += std::to_string(seed);
    for (size_t c = 0; c < values.size(); ++c) {
      table += "," + real(values[c]);
      columns[c].push_back(values[c]);
    }
    table += "\n";

    const std::string tag = "_seed" + std::to_string(seed);
    out.add("errors" + tag + ".csv", head + text(gabp_comparison_errors_csv, cmp.get()));
    out.add("curves" + tag + ".csv", head + text(gabp_comparison_curves_csv, cmp.get()));
    out.add("trace" + tag + ".csv", head + text(gabp_report_trace_csv, g.get()));
    if (cfg.svg) {
      const std::string note = "<!--\n" + head + "-->\n";
      out.add("curves" + tag + ".svg", note + text(gabp_comparison_curves_svg, cmp.get()));
      out.add("predictions" + tag + ".svg", note + text(gabp_comparison_predictions_svg, cmp.get()));
    }
  }
  if (cfg.seeds > 1) {
    table += "median";
    for (const auto& col : columns) table += "," + real(median(col));
    table += "\n";
  }
  out.add("comparison.csv", std::move(table));
  out.commit();
  return 0;
}

// ---- argument handling ----------------------------------------------------

// Flags are parsed into side storage and copied over the resolved config only
// when given, so they win over config-file values.
class Overrides {
 public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& target, const std::string& desc) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *holder, desc);
    apply_.push_back([opt, holder, &target] {
      if (opt->count() > 0) target = *holder;
    });
    return opt;
  }
  CLI::Option* flag(CLI::App* app, const std::string& name, bool& target, const std::string& desc) {
    CLI::Option* opt = app->add_flag(name, desc);
    apply_.push_back([opt, &target] {
      if (opt->count() > 0) target = true;
    });
    return opt;
  }
  void apply() const {
    for (const auto& f : apply_) f();
  }

 private:
  std::vector<std::function<void()>> apply_;
};

struct Staged {
  CliConfig cfg;
  std::string config_path;
  std::string trainer;
  std::string cost;
  CLI::Option* variant = nullptr;
};

void add_common(CLI::App* app, Overrides& ov, Staged& st, bool training, bool with_variant) {
  app->add_option("--config", st.config_path, "INI configuration file")->check(CLI::ExistingFile);
  ov.add(app, "--seed", st.cfg.seed, "master seed");
  ov.add(app, "--out", st.cfg.out_dir, "output directory");
  if (!training) return;
  if (with_variant) {
    st.variant = ov.add(app, "--variant", st.cfg.variant, "gabp or bp")
                     ->check(CLI::IsMember({"gabp", "bp"}));
  } else {
    st.variant = app->add_option("--variant", "not accepted: compare runs both variants");
  }
  ov.add(app, "--trainer", st.trainer, "lm or gd")->check(CLI::IsMember({"lm", "gd"}));
  ov.add(app, "--hidden-adjust", st.cfg.hidden_adjust, "hidden layer adjustment constant (1-10)");
  ov.add(app, "--population", st.cfg.ga.population_size, "GA population size");
  ov.add(app, "--generations", st.cfg.ga.max_generations, "GA generations");
  ov.add(app, "--crossover", st.cfg.ga.crossover_prob, "crossover probability");
  ov.add(app, "--mutation", st.cfg.ga.mutation_prob, "per-gene mutation probability");
  ov.add(app, "--max-iter", st.cfg.training.max_iterations, "backpropagation iteration limit");
  ov.add(app, "--goal", st.cfg.training.goal_mse, "goal training MSE");
  ov.add(app, "--learning-rate", st.cfg.training.learning_rate, "gradient-descent learning rate");
  ov.flag(app, "--normalize", st.cfg.normalize, "fit min-max normalization on the training rows");
  ov.add(app, "--cost", st.cost, "comma-separated cost-type indicator codes (implies --normalize)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GA-initialized backpropagation networks for safety early-warning scoring"};
  app.set_version_flag("--version", std::string(gabp_version()));
  app.require_subcommand(1);

  Overrides ov;
  Staged st;

  auto* gen = app.add_subcommand("gen-data", "write synthetic train/test files");
  add_common(gen, ov, st, false, false);
  ov.add(gen, "--samples", st.cfg.samples, "total rows");
  ov.add(gen, "--train-rows", st.cfg.train_rows, "training rows (0 = 10:3 split)");
  ov.add(gen, "--noise-sd", st.cfg.noise_sd, "target noise standard deviation");
  ov.add(gen, "--hidden-adjust", st.cfg.hidden_adjust, "hidden layer adjustment constant (1-10)");

  auto* train = app.add_subcommand("train", "train a model");
  add_common(train, ov, st, true, true);
  ov.add(train, "--train", st.cfg.train_path, "training data file");
  ov.add(train, "--test", st.cfg.test_path, "test data file");

  auto* predict = app.add_subcommand("predict", "score rows with a saved model");
  add_common(predict, ov, st, false, false);
  ov.add(predict, "--model", st.cfg.model_path, "model file");
  ov.add(predict, "--data", st.cfg.data_path, "input rows");

  auto* evaluate = app.add_subcommand("evaluate", "score labelled rows and report accuracy");
  add_common(evaluate, ov, st, false, false);
  ov.add(evaluate, "--model", st.cfg.model_path, "model file");
  ov.add(evaluate, "--data", st.cfg.data_path, "labelled rows");

  auto* compare = app.add_subcommand("compare", "paired GA-BP versus BP runs");
  add_common(compare, ov, st, true, false);
  ov.add(compare, "--seeds", st.cfg.seeds, "number of paired seeds");
  ov.add(compare, "--samples", st.cfg.samples, "synthetic rows per seed");
  ov.add(compare, "--train-rows", st.cfg.train_rows, "training rows (0 = 10:3 split)");
  ov.add(compare, "--noise-sd", st.cfg.noise_sd, "target noise standard deviation");
  ov.add(compare, "--train", st.cfg.train_path, "training data file instead of synthetic data");
  ov.add(compare, "--test", st.cfg.test_path, "test data file");
  ov.flag(compare, "--svg", st.cfg.svg, "also write SVG charts");

  CLI11_PARSE(app, argc, argv);

  CLI::App* cmd = app.get_subcommands().front();
  try {
    if (cmd == compare && st.variant->count() > 0) {
      throw std::runtime_error("compare: --variant is not accepted; both variants always run");
    }
    CliConfig& cfg = st.cfg;
    if (!st.config_path.empty()) gabp_cli::apply_config_file(cfg, st.config_path);
    ov.apply();
    if (!st.trainer.empty()) cfg.training.trainer = gabp_cli::parse_trainer(st.trainer);
    if (!st.cost.empty()) {
      cfg.cost_indicators.clear();
      std::string item;
      for (char c : st.cost + ",") {
        if (c == ',') {
          if (!item.empty()) cfg.cost_indicators.push_back(item);
          item.clear();
        } else if (c != ' ') {
          item += c;
        }
      }
    }
    if (!cfg.cost_indicators.empty()) cfg.normalize = true;
    if (cfg.variant != "gabp" && cfg.variant != "bp") {
      throw std::runtime_error("config: variant must be gabp or bp");
    }
    cfg.ga.seed = cfg.seed;

    if (cmd == gen) return cmd_gen_data(cfg);
    if (cmd == train) return cmd_train(cfg);
    if (cmd == predict) return cmd_predict(cfg);
    if (cmd == evaluate) return cmd_evaluate(cfg);
    return cmd_compare(cfg);
  } catch (const std::exception& e) {
    std::cerr << "gabp " << cmd->get_name() << ": " << e.what() << "\n";
    return 1;
  }
}
