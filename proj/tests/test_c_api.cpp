// Exercises the shared-library surface only.
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "gabp/gabp.h"

namespace {

template <class F>
std::string text_of(F&& fn) {
  const std::size_t n = fn(nullptr, 0);
  std::string s(n + 1, '\0');
  fn(s.data(), s.size());
  s.resize(n);
  return s;
}

}  // namespace

TEST_CASE("c api: constants and defaults") {
  size_t q = 0;
  CHECK(gabp_hidden_layer_size(19, 1, 1, &q) == GABP_OK);
  CHECK(q == 11);
  CHECK(gabp_hidden_layer_size(19, 1, 0, &q) == GABP_E_INVALID_ARGUMENT);
  CHECK(std::strlen(gabp_last_error()) > 0);
  CHECK(gabp_chromosome_length(gabp_shape_default()) == 232);

  gabp_ga_config ga;
  gabp_ga_config_default(&ga);
  CHECK(ga.population_size == 60);
  CHECK(ga.crossover_prob == 0.7);
  CHECK(ga.mutation_prob == 0.05);
  gabp_train_config tc;
  gabp_train_config_default(&tc);
  CHECK(tc.trainer == GABP_TRAINER_LM);
  CHECK(tc.learning_rate == 0.001);
  CHECK(tc.goal_mse == 1e-5);

  CHECK(gabp_schema_size() == 19);
  CHECK(std::string(gabp_schema_code(0)) == "X11");
  CHECK(std::string(gabp_schema_code(18)) == "X45");
  CHECK(gabp_schema_code(19) == nullptr);
  CHECK(gabp_classify_warning(0.5) == GABP_LEVEL_MEDIUM);
  CHECK(std::string(gabp_warning_level_name(GABP_LEVEL_LOW)) == "low");
}

TEST_CASE("c api: data, normalization, runs and comparison") {
  gabp_dataset* train = nullptr;
  gabp_dataset* test = nullptr;
  REQUIRE(gabp_synth_dataset(13, 0, gabp_shape_default(), 0.02, -1, 1, 7, &train, &test) == GABP_OK);
  CHECK(gabp_dataset_size(train) == 10);
  CHECK(gabp_dataset_size(test) == 3);
  CHECK(gabp_dataset_has_targets(train));

  gabp_norm* norm = nullptr;
  REQUIRE(gabp_norm_fit(train, nullptr, &norm) == GABP_OK);
  gabp_dataset* ntrain = nullptr;
  gabp_dataset* ntest = nullptr;
  REQUIRE(gabp_norm_apply(norm, train, &ntrain) == GABP_OK);
  REQUIRE(gabp_norm_apply(norm, test, &ntest) == GABP_OK);

  gabp_ga_config ga;
  gabp_ga_config_default(&ga);
  ga.max_generations = 5;
  ga.seed = 7;
  gabp_train_config tc;
  gabp_train_config_default(&tc);

  gabp_report* rg = nullptr;
  gabp_report* rb = nullptr;
  REQUIRE(gabp_run_gabp(ntrain, ntest, gabp_shape_default(), &ga, &tc, &rg) == GABP_OK);
  REQUIRE(gabp_run_bp(ntrain, ntest, gabp_shape_default(), &tc, 7, -1, 1, &rb) == GABP_OK);

  gabp_run_summary s{};
  REQUIRE(gabp_report_summary(rg, &s) == GABP_OK);
  CHECK(s.variant == GABP_VARIANT_GABP);
  CHECK(s.generations == 5);
  CHECK(s.test.samples == 3);

  const auto trace = text_of([&](char* b, size_t c) { return gabp_report_trace_csv(rg, b, c); });
  CHECK(trace.rfind("generation,best_sse,mean_sse", 0) == 0);

  gabp_comparison* cmp = nullptr;
  REQUIRE(gabp_compare(rg, rb, &cmp) == GABP_OK);
  CHECK(gabp_comparison_rows(cmp) == 3);
  CHECK(gabp_compare(rb, rg, &cmp) == GABP_E_INVALID_ARGUMENT);

  gabp_model* model = nullptr;
  REQUIRE(gabp_report_model(rg, &model) == GABP_OK);
  REQUIRE(gabp_model_set_normalization(model, norm) == GABP_OK);
  gabp_metrics m{};
  REQUIRE(gabp_model_evaluate(model, test, &m) == GABP_OK);
  CHECK(m.samples == 3);
  CHECK(m.mse == doctest::Approx(s.test.mse).epsilon(1e-12));

  const auto text = text_of([&](char* b, size_t c) { return gabp_model_to_text(model, b, c); });
  gabp_model* parsed = nullptr;
  REQUIRE(gabp_model_parse(text.c_str(), &parsed) == GABP_OK);
  std::vector<double> a(232), b(232);
  REQUIRE(gabp_model_genes(model, a.data(), a.size()) == GABP_OK);
  REQUIRE(gabp_model_genes(parsed, b.data(), b.size()) == GABP_OK);
  CHECK(a == b);
  CHECK(gabp_model_has_normalization(parsed));

  std::vector<double> x(19);
  REQUIRE(gabp_dataset_features(test, 0, x.data(), x.size()) == GABP_OK);
  double y1 = 0, y2 = 0;
  CHECK(gabp_model_predict(model, x.data(), 19, &y1, 1) == GABP_OK);
  CHECK(gabp_model_predict(parsed, x.data(), 19, &y2, 1) == GABP_OK);
  CHECK(y1 == y2);
  CHECK(gabp_model_predict(model, x.data(), 18, &y1, 1) == GABP_E_DIMENSION);

  gabp_model_free(parsed);
  gabp_model_free(model);
  gabp_comparison_free(cmp);
  gabp_report_free(rb);
  gabp_report_free(rg);
  gabp_dataset_free(ntest);
  gabp_dataset_free(ntrain);
  gabp_norm_free(norm);
  gabp_dataset_free(test);
  gabp_dataset_free(train);
}

TEST_CASE("c api: error paths") {
  gabp_dataset* ds = nullptr;
  CHECK(gabp_dataset_load("/nonexistent/data.csv", 19, GABP_TARGET_AUTO, &ds) == GABP_E_IO);
  CHECK(std::string(gabp_last_error()).find("/nonexistent/data.csv") != std::string::npos);
  CHECK(gabp_dataset_create(2, nullptr) == GABP_E_INVALID_ARGUMENT);
  REQUIRE(gabp_dataset_create(2, &ds) == GABP_OK);
  const double row[] = {1.0, 2.0, 3.0};
  CHECK(gabp_dataset_append(ds, row, 3, nullptr, 0) == GABP_E_DIMENSION);
  CHECK(gabp_dataset_append(ds, row, 2, nullptr, 0) == GABP_OK);
  const auto csv = text_of([&](char* b, size_t c) { return gabp_dataset_to_csv(ds, b, c); });
  CHECK(csv == "x1,x2\n1,2\n");
  gabp_dataset_free(ds);

  gabp_model* m = nullptr;
  CHECK(gabp_model_parse("{}", &m) == GABP_E_PARSE);
  const double genes[] = {1, 2, 3};
  CHECK(gabp_model_from_genes(gabp_shape{1, 1, 1}, genes, 3, &m) == GABP_E_DIMENSION);
}
