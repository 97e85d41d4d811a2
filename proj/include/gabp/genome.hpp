#ifndef GABP_GENOME_HPP
#define GABP_GENOME_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gabp/network.hpp"

namespace gabp::genome {

using Chromosome = std::vector<double>;

// (n + 1) * q + (q + 1) * m
std::size_t chromosome_length(const network::NetworkShape& shape);

// Gene layout: W row by row (every weight into hidden neuron 1, then neuron
// 2, ...), the hidden thresholds, V row by row, then the output thresholds.
Chromosome encode(const network::NetworkParams& params);
network::NetworkParams decode(std::span<const double> genes, const network::NetworkShape& shape);

struct GeneLocation {
  enum class Block { W, Gamma, V, H } block;
  std::size_t row = 0;
  std::size_t col = 0;
};

GeneLocation locate(std::size_t gene, const network::NetworkShape& shape);
std::string describe(const GeneLocation& loc);

}  // namespace gabp::genome

#endif  // GABP_GENOME_HPP
