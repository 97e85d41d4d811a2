#include "cli_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace gabp_cli {

namespace {

namespace pt = boost::property_tree;

std::string real(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

template <class T>
T convert(const std::string& key, const std::string& text) {
  T value{};
  std::istringstream in(text);
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) {
    throw std::runtime_error("config key " + key + ": cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

CliConfig::CliConfig() {
  gabp_ga_config_default(&ga);
  gabp_train_config_default(&training);
}

gabp_shape CliConfig::shape() const {
  gabp_shape s = gabp_shape_default();
  if (gabp_hidden_layer_size(s.inputs, s.outputs, hidden_adjust, &s.hidden) != GABP_OK) {
    throw std::runtime_error(std::string("network: ") + gabp_last_error());
  }
  return s;
}

std::vector<int> CliConfig::cost_flags() const {
  std::vector<int> flags(gabp_schema_size(), 0);
  for (const auto& code : cost_indicators) {
    bool found = false;
    for (std::size_t i = 0; i < flags.size(); ++i) {
      if (code == gabp_schema_code(i)) {
        flags[i] = 1;
        found = true;
      }
    }
    if (!found) throw std::runtime_error("unknown indicator code '" + code + "'");
  }
  return flags;
}

std::string trainer_name(gabp_trainer t) { return t == GABP_TRAINER_GD ? "gd" : "lm"; }

gabp_trainer parse_trainer(const std::string& s) {
  if (s == "lm") return GABP_TRAINER_LM;
  if (s == "gd") return GABP_TRAINER_GD;
  throw std::runtime_error("unknown trainer '" + s + "' (expected lm or gd)");
}

void apply_config_file(CliConfig& cfg, const std::string& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::runtime_error("config: " + std::string(e.what()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw std::runtime_error("config key '" + section + "' must live inside a section");
    }
    for (const auto& [key, node] : body) {
      const std::string name = section + "." + key;
      const std::string& v = node.data();
      if (name == "network.hidden_adjust") cfg.hidden_adjust = convert<int>(name, v);
      else if (name == "evolution.population_size") cfg.ga.population_size = convert<std::size_t>(name, v);
      else if (name == "evolution.crossover_prob") cfg.ga.crossover_prob = convert<double>(name, v);
      else if (name == "evolution.mutation_prob") cfg.ga.mutation_prob = convert<double>(name, v);
      else if (name == "evolution.max_generations") cfg.ga.max_generations = convert<std::size_t>(name, v);
      else if (name == "evolution.gene_min") cfg.ga.gene_min = convert<double>(name, v);
      else if (name == "evolution.gene_max") cfg.ga.gene_max = convert<double>(name, v);
      else if (name == "evolution.selection_k") cfg.ga.selection_k = convert<double>(name, v);
      else if (name == "training.trainer") cfg.training.trainer = parse_trainer(v);
      else if (name == "training.learning_rate") cfg.training.learning_rate = convert<double>(name, v);
      else if (name == "training.goal_mse") cfg.training.goal_mse = convert<double>(name, v);
      else if (name == "training.max_iterations") cfg.training.max_iterations = convert<std::size_t>(name, v);
      else if (name == "training.lm_damping_init") cfg.training.lm_damping_init = convert<double>(name, v);
      else if (name == "training.lm_damping_factor") cfg.training.lm_damping_factor = convert<double>(name, v);
      else if (name == "training.lm_max_retries") cfg.training.lm_max_retries = convert<std::size_t>(name, v);
      else if (name == "training.lm_damping_max") cfg.training.lm_damping_max = convert<double>(name, v);
      else if (name == "data.samples") cfg.samples = convert<std::size_t>(name, v);
      else if (name == "data.train_rows") cfg.train_rows = convert<std::size_t>(name, v);
      else if (name == "data.noise_sd") cfg.noise_sd = convert<double>(name, v);
      else if (name == "data.cost_indicators") cfg.cost_indicators = split_list(v);
      else if (name == "data.normalize") cfg.normalize = v == "true" || v == "1";
      else if (name == "data.train") cfg.train_path = v;
      else if (name == "data.test") cfg.test_path = v;
      else if (name == "run.seed") cfg.seed = convert<std::uint64_t>(name, v);
      else if (name == "run.seeds") cfg.seeds = convert<std::size_t>(name, v);
      else if (name == "run.variant") cfg.variant = v;
      else if (name == "run.out") cfg.out_dir = v;
      else if (name == "run.svg") cfg.svg = v == "true" || v == "1";
      else throw std::runtime_error("unknown config key '" + name + "'");
    }
  }
}

std::string provenance(const CliConfig& cfg, const std::string& command) {
  std::string s = "# gabp " + std::string(gabp_version()) + " " + command + "\n";
  auto line = [&s](const std::string& k, const std::string& v) { s += "# " + k + " = " + v + "\n"; };
  const auto shape = cfg.shape();
  line("network.shape", std::to_string(shape.inputs) + "-" + std::to_string(shape.hidden) + "-" +
                            std::to_string(shape.outputs));
  line("network.hidden_adjust", std::to_string(cfg.hidden_adjust));
  line("evolution.population_size", std::to_string(cfg.ga.population_size));
  line("evolution.crossover_prob", real(cfg.ga.crossover_prob));
  line("evolution.mutation_prob", real(cfg.ga.mutation_prob));
  line("evolution.max_generations", std::to_string(cfg.ga.max_generations));
  line("evolution.gene_min", real(cfg.ga.gene_min));
  line("evolution.gene_max", real(cfg.ga.gene_max));
  line("evolution.selection_k", real(cfg.ga.selection_k));
  line("evolution.coding", "real");
  line("evolution.selection", "roulette");
  line("training.trainer", trainer_name(cfg.training.trainer));
  line("training.learning_rate", real(cfg.training.learning_rate));
  line("training.goal_mse", real(cfg.training.goal_mse));
  line("training.max_iterations", std::to_string(cfg.training.max_iterations));
  line("training.lm_damping_init", real(cfg.training.lm_damping_init));
  line("training.lm_damping_factor", real(cfg.training.lm_damping_factor));
  line("training.lm_max_retries", std::to_string(cfg.training.lm_max_retries));
  line("training.lm_damping_max", real(cfg.training.lm_damping_max));
  line("data.samples", std::to_string(cfg.samples));
  line("data.train_rows", std::to_string(cfg.train_rows));
  line("data.noise_sd", real(cfg.noise_sd));
  std::string cost;
  for (const auto& c : cfg.cost_indicators) cost += (cost.empty() ? "" : ",") + c;
  line("data.cost_indicators", cost.empty() ? "none" : cost);
  line("data.normalize", cfg.normalize ? "true" : "false");
  if (!cfg.train_path.empty()) line("data.train", cfg.train_path);
  if (!cfg.test_path.empty()) line("data.test", cfg.test_path);
  if (!cfg.model_path.empty()) line("data.model", cfg.model_path);
  if (!cfg.data_path.empty()) line("data.input", cfg.data_path);
  line("run.seed", std::to_string(cfg.seed));
  line("run.seeds", std::to_string(cfg.seeds));
  line("run.variant", cfg.variant);
  return s;
}

}  // namespace gabp_cli
