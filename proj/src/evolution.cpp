#include "gabp/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gabp/error.hpp"

namespace gabp::evolution {

void validate(const GAConfig& cfg) {
  if (cfg.population_size < 2) {
    throw Error(ErrorKind::InvalidArgument, "population size must be at least 2");
  }
  if (cfg.max_generations < 1) {
    throw Error(ErrorKind::InvalidArgument, "generation cap must be at least 1");
  }
  auto is_prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!is_prob(cfg.crossover_prob) || !is_prob(cfg.mutation_prob)) {
    throw Error(ErrorKind::InvalidArgument, "crossover and mutation probabilities must lie in [0, 1]");
  }
  if (!std::isfinite(cfg.gene_min) || !std::isfinite(cfg.gene_max) ||
      !(cfg.gene_min < cfg.gene_max)) {
    throw Error(ErrorKind::InvalidArgument, "gene bounds need finite gene_min < gene_max");
  }
  if (!(cfg.selection_k > 0.0) || !std::isfinite(cfg.selection_k)) {
    throw Error(ErrorKind::InvalidArgument, "selection coefficient k must be positive");
  }
}

Fitness fitness(std::span<const double> genes, const dataset::Samples& data,
                const network::NetworkShape& shape) {
  const double e = network::sse_loss(genome::decode(genes, shape), data);
  return {e, 1.0 / (e + kEpsilon)};
}

std::vector<double> selection_probabilities(std::span<const double> errors, double k) {
  std::vector<double> p(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) p[i] = k / (errors[i] + kEpsilon);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return p;
}

std::size_t roulette_index(std::span<const double> probabilities, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    last_positive = i;
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  // Rounding left the cumulative sum just under u.
  return last_positive;
}

std::size_t roulette_select(std::span<const double> probabilities, Rng& rng) {
  return roulette_index(probabilities, uniform01(rng));
}

std::pair<genome::Chromosome, genome::Chromosome> crossover(std::span<const double> parent_a,
                                                            std::span<const double> parent_b,
                                                            std::size_t j, double b) {
  if (parent_a.size() != parent_b.size()) {
    throw Error(ErrorKind::Dimension, "crossover parents differ in length");
  }
  if (j >= parent_a.size()) {
    throw Error(ErrorKind::InvalidArgument, "crossover position " + std::to_string(j) +
                                                " out of range for length " +
                                                std::to_string(parent_a.size()));
  }
  genome::Chromosome a(parent_a.begin(), parent_a.end());
  genome::Chromosome n(parent_b.begin(), parent_b.end());
  a[j] = parent_a[j] * (1.0 - b) + b * parent_b[j];
  n[j] = parent_b[j] * (1.0 - b) + b * parent_a[j];
  return {std::move(a), std::move(n)};
}

double mutate_gene(double value, double r, double r2, std::size_t generation,
                   const GAConfig& cfg) {
  const double progress =
      std::min(1.0, static_cast<double>(generation) / static_cast<double>(cfg.max_generations));
  const double step = r2 * (1.0 - progress) * (1.0 - progress);
  const double raw = r >= 0.5 ? value + step * (value - cfg.gene_max)
                              : value + step * (cfg.gene_min - value);
  return std::clamp(raw, cfg.gene_min, cfg.gene_max);
}

genome::Chromosome mutate(genome::Chromosome genes, std::size_t generation, const GAConfig& cfg,
                          Rng& rng) {
  for (double& gene : genes) {
    if (uniform01(rng) < cfg.mutation_prob) {
      const double r = uniform01(rng);
      const double r2 = uniform01(rng);
      gene = mutate_gene(gene, r, r2, generation, cfg);
    }
  }
  return genes;
}

EvolutionResult evolve(const dataset::Samples& data, const network::NetworkShape& shape,
                       const GAConfig& cfg, const PopulationObserver& observer) {
  validate(cfg);
  network::validate(shape);
  const std::size_t length = genome::chromosome_length(shape);

  auto init_rng = make_substream(cfg.seed, stream::kPopulationInit);
  auto op_rng = make_substream(cfg.seed, stream::kOperators);
  std::uniform_real_distribution<double> init_dist(cfg.gene_min, cfg.gene_max);

  std::vector<genome::Chromosome> population(cfg.population_size);
  for (auto& c : population) {
    c.resize(length);
    for (double& g : c) g = init_dist(init_rng);
  }

  EvolutionResult result;
  std::vector<double> errors(cfg.population_size);
  for (std::size_t g = 0; g < cfg.max_generations; ++g) {
    if (observer) observer(g, population);

    for (std::size_t i = 0; i < population.size(); ++i) {
      errors[i] = fitness(population[i], data, shape).error;
      if (!std::isfinite(errors[i])) {
        throw Error(ErrorKind::Numeric, "non-finite error for individual " + std::to_string(i) +
                                            " in generation " + std::to_string(g));
      }
    }
    const auto best_it = std::min_element(errors.begin(), errors.end());
    const auto best = static_cast<std::size_t>(best_it - errors.begin());
    const double mean = std::accumulate(errors.begin(), errors.end(), 0.0) /
                        static_cast<double>(errors.size());
    result.trace.push_back({g, *best_it, mean, population[best]});
    if (g == 0 || *best_it < result.best_error) {
      result.best_error = *best_it;
      result.best = population[best];
    }
    if (g + 1 == cfg.max_generations) break;

    const auto probs = selection_probabilities(errors, cfg.selection_k);
    std::vector<genome::Chromosome> next;
    next.reserve(cfg.population_size);
    next.push_back(population[best]);
    std::uniform_int_distribution<std::size_t> position(0, length - 1);
    while (next.size() < cfg.population_size) {
      auto child_a = population[roulette_select(probs, op_rng)];
      auto child_b = population[roulette_select(probs, op_rng)];
      if (uniform01(op_rng) < cfg.crossover_prob) {
        const std::size_t j = position(op_rng);
        const double b = uniform01(op_rng);
        std::tie(child_a, child_b) = crossover(child_a, child_b, j, b);
      }
      next.push_back(mutate(std::move(child_a), g, cfg, op_rng));
      auto mutated_b = mutate(std::move(child_b), g, cfg, op_rng);
      if (next.size() < cfg.population_size) next.push_back(std::move(mutated_b));
    }
    population = std::move(next);
  }
  return result;
}

}  // namespace gabp::evolution
