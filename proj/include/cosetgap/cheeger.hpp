#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cosetgap/graph.hpp"
#include "cosetgap/rational.hpp"

namespace cosetgap {

struct CutWitness {
  std::vector<std::size_t> vertices;  // ascending
  std::size_t boundary = 0;
  Rational ratio;
};

struct CheegerOptions {
  // Largest vertex count searched by plain subset enumeration.
  std::size_t exhaustive_ceiling = 30;
  // Graphs wider than this (in the vertex order used by the frontier
  // search) are not searched by the frontier method.
  std::size_t frontier_width_cap = 14;
  // Below this size enumeration is used even when the frontier search
  // would apply.
  std::size_t small_graph = 20;
  bool allow_frontier = true;
  unsigned threads = 1;
  // Collect every set A with |A| <= |V|/2 attaining h. Enumeration only.
  bool all_minimizers = false;
};

struct CheegerResult {
  Rational h;
  // Smallest cardinality, then lexicographically smallest, among attaining
  // sets with |A| <= |V|/2.
  CutWitness witness;
  std::optional<std::vector<std::vector<std::size_t>>> minimizers;
  std::string method;  // "enumeration" or "frontier"
};

// Edges with exactly one endpoint in A, with multiplicity. Throws for empty
// or full A.
std::size_t boundary_count(const LabeledMultigraph& g,
                           const std::vector<std::size_t>& vertices);
CutWitness make_cut(const LabeledMultigraph& g, std::vector<std::size_t> vertices);

// Exact h(X). Throws TooLargeError when neither method applies, and Error
// for a single vertex graph (no proper subsets).
CheegerResult cheeger_exact(const LabeledMultigraph& g,
                            const CheegerOptions& options = {});

// Frontier width of the vertex order the frontier search would use.
std::size_t frontier_width(const LabeledMultigraph& g);

struct CheegerBounds {
  Rational lower;                   // 2 / |V|
  double upper = 0;                 // min(spectral, best cut ratio)
  double spectral_upper = 0;        // sqrt(4 |S| lambda1)
  std::optional<CutWitness> best_cut;  // best sweep cut, if any
};

// Bounds when h is not computed exactly. `ordering_values` (for instance an
// eigenvector of lambda1) seeds a sweep over its level sets.
CheegerBounds cheeger_bounds(const LabeledMultigraph& g, double lambda1,
                             const std::vector<double>* ordering_values);

}  // namespace cosetgap
