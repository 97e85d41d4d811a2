#ifndef GABP_EVOLUTION_HPP
#define GABP_EVOLUTION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gabp/dataset.hpp"
#include "gabp/genome.hpp"
#include "gabp/network.hpp"
#include "gabp/rng.hpp"

namespace gabp::evolution {

// Guards 1/E when a chromosome fits the data exactly.
inline constexpr double kEpsilon = 1e-12;

struct GAConfig {
  std::size_t population_size = 60;
  double crossover_prob = 0.7;
  double mutation_prob = 0.05;
  std::size_t max_generations = 50;
  double gene_min = -1.0;
  double gene_max = 1.0;
  double selection_k = 1.0;
  std::uint64_t seed = 0;
};

void validate(const GAConfig& cfg);

struct Fitness {
  double error = 0.0;    // SSE of the decoded network
  double fitness = 0.0;  // 1 / (error + eps)
};

Fitness fitness(std::span<const double> genes, const dataset::Samples& data,
                const network::NetworkShape& shape);

// Roulette weights from raw errors: f_i = k / (E_i + eps), normalized to sum
// to one, so lower error means higher probability.
std::vector<double> selection_probabilities(std::span<const double> errors, double k);

// Cumulative-sum inversion of a single uniform draw u in [0, 1).
std::size_t roulette_index(std::span<const double> probabilities, double u);
std::size_t roulette_select(std::span<const double> probabilities, Rng& rng);

// Blends gene j of both parents, each child computed from the original parent
// values. Every other gene is copied.
std::pair<genome::Chromosome, genome::Chromosome> crossover(std::span<const double> parent_a,
                                                            std::span<const double> parent_b,
                                                            std::size_t j, double b);

// Bound-directed non-uniform step for a single gene with explicit draws r and
// r2; the step size r2 * (1 - g / G_max)^2 vanishes at the last generation.
double mutate_gene(double value, double r, double r2, std::size_t generation,
                   const GAConfig& cfg);

genome::Chromosome mutate(genome::Chromosome genes, std::size_t generation, const GAConfig& cfg,
                          Rng& rng);

struct GenerationRecord {
  std::size_t generation = 0;
  double best_error = 0.0;
  double mean_error = 0.0;
  genome::Chromosome best;

  bool operator==(const GenerationRecord&) const = default;
};

using EvolutionTrace = std::vector<GenerationRecord>;

struct EvolutionResult {
  genome::Chromosome best;
  double best_error = 0.0;
  EvolutionTrace trace;
};

// Optional per-generation hook, used by tests to inspect whole populations.
using PopulationObserver =
    std::function<void(std::size_t generation, const std::vector<genome::Chromosome>&)>;

EvolutionResult evolve(const dataset::Samples& data, const network::NetworkShape& shape,
                       const GAConfig& cfg, const PopulationObserver& observer = {});

}  // namespace gabp::evolution

#endif  // GABP_EVOLUTION_HPP
