#include "gabp/genome.hpp"

#include <cmath>

#include "gabp/error.hpp"

namespace gabp::genome {

std::size_t chromosome_length(const network::NetworkShape& shape) {
  return (shape.inputs + 1) * shape.hidden + (shape.hidden + 1) * shape.outputs;
}

Chromosome encode(const network::NetworkParams& params) {
  network::validate(params);
  Chromosome genes;
  genes.reserve(chromosome_length(params.shape));
  genes.insert(genes.end(), params.w.begin(), params.w.end());
  genes.insert(genes.end(), params.gamma.begin(), params.gamma.end());
  genes.insert(genes.end(), params.v.begin(), params.v.end());
  genes.insert(genes.end(), params.h.begin(), params.h.end());
  return genes;
}

network::NetworkParams decode(std::span<const double> genes, const network::NetworkShape& shape) {
  network::validate(shape);
  const std::size_t expected = chromosome_length(shape);
  if (genes.size() != expected) {
    throw Error(ErrorKind::Dimension, "chromosome length mismatch: expected " +
                                          std::to_string(expected) + " genes, got " +
                                          std::to_string(genes.size()));
  }
  network::NetworkParams p(shape);
  auto it = genes.begin();
  for (auto* block : {&p.w, &p.gamma, &p.v, &p.h}) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(block->size()), block->begin());
    it += static_cast<std::ptrdiff_t>(block->size());
  }
  return p;
}

GeneLocation locate(std::size_t gene, const network::NetworkShape& s) {
  if (gene >= chromosome_length(s)) {
    throw Error(ErrorKind::InvalidArgument, "gene index " + std::to_string(gene) + " out of range");
  }
  using B = GeneLocation::Block;
  if (gene < s.hidden * s.inputs) return {B::W, gene / s.inputs, gene % s.inputs};
  gene -= s.hidden * s.inputs;
  if (gene < s.hidden) return {B::Gamma, gene, 0};
  gene -= s.hidden;
  if (gene < s.outputs * s.hidden) return {B::V, gene / s.hidden, gene % s.hidden};
  gene -= s.outputs * s.hidden;
  return {B::H, gene, 0};
}

std::string describe(const GeneLocation& loc) {
  const auto r = std::to_string(loc.row + 1);
  const auto c = std::to_string(loc.col + 1);
  switch (loc.block) {
    case GeneLocation::Block::W: return "W[" + r + "," + c + "]";
    case GeneLocation::Block::Gamma: return "gamma[" + r + "]";
    case GeneLocation::Block::V: return "V[" + r + "," + c + "]";
    case GeneLocation::Block::H: return "h[" + r + "]";
  }
  return "?";
}

}  // namespace gabp::genome
