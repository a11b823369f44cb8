#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cosetgap/presentation.hpp"

namespace cosetgap {

struct SubgroupSpec {
  std::vector<Word> generators;
  std::string label;
};

SubgroupSpec parse_subgroup(std::string_view text, const FinitePresentation& p,
                            std::string label = {});

// Right action of the generators on the cosets of a finite index subgroup.
// Cosets are numbered 0..n-1 in breadth-first order from the subgroup itself
// (coset 0), scanning letters g1, g1^-1, g2, g2^-1, ... . Every table is
// complete and transitive; construction renumbers into this standard form.
class CosetTable {
 public:
  CosetTable() = default;

  // `action[c * 2k + letter_column(x)]` is c.x. The action must be a
  // permutation for every generator and transitive; `base` is renumbered
  // to 0.
  CosetTable(std::size_t num_generators, std::vector<std::int32_t> action,
             std::size_t base = 0);

  // images[s][c] is c.(s+1).
  static CosetTable from_permutations(
      const std::vector<std::vector<std::int32_t>>& images,
      std::size_t base = 0);

  // As the constructor; order[new] receives the old number of each coset.
  static CosetTable standardized(std::size_t num_generators,
                                 const std::vector<std::int32_t>& action,
                                 std::size_t base,
                                 std::vector<std::int32_t>& order);

  std::size_t size() const noexcept { return n_; }
  std::size_t num_generators() const noexcept { return k_; }
  static constexpr std::size_t base() noexcept { return 0; }

  std::int32_t act(std::size_t coset, Letter x) const noexcept {
    return action_[coset * 2 * k_ + letter_column(x)];
  }
  std::int32_t act(std::size_t coset, const Word& w) const noexcept;

  const std::vector<std::int32_t>& raw() const noexcept { return action_; }

  // Relator closure at every coset, subgroup generator closure at the base
  // coset, and transitivity. Throws InvariantViolation.
  void verify(const FinitePresentation& p,
              const SubgroupSpec* subgroup = nullptr) const;

  // Rows `coset,generator,image` for each generator (not inverses).
  std::string to_csv(const FinitePresentation& p) const;

  bool operator==(const CosetTable&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<std::int32_t> action_;
};

// The breadth-first spanning tree of the Schreier graph used everywhere a
// maximal tree is needed. Edge ids are coset * k + (generator - 1).
struct SpanningTree {
  std::vector<std::int32_t> parent;   // -1 for the base coset
  std::vector<Letter> parent_letter;  // parent . letter == coset
  std::vector<bool> is_tree_edge;     // indexed by edge id
  std::vector<Word> transversal;      // freely reduced word reaching coset
};

SpanningTree spanning_tree(const CosetTable& t);

// Edge ids outside the spanning tree, ascending. These index the Schreier
// generators of the subgroup.
std::vector<std::size_t> schreier_edges(const CosetTable& t,
                                        const SpanningTree& tree);

// transversal(c) s transversal(c.s)^-1 for each non-tree edge (c, s).
std::vector<Word> schreier_generators(const CosetTable& t);

inline constexpr std::size_t default_coset_limit = 1'000'000;

// Hasse-Lamb-Tucker style Todd-Coxeter with a lookahead pass once `limit`
// live cosets are reached. Throws EnumerationError if the index is not
// determined within the limit (this is not a proof of infinite index).
CosetTable enumerate_cosets(const FinitePresentation& p, const SubgroupSpec& h,
                            std::size_t limit = default_coset_limit);

struct NormalizerIndices {
  std::size_t index_of_normalizer = 0;  // [G : N(H)]
  std::size_t index_over_subgroup = 0;  // [N(H) : H]
};

// Counts cosets c with c.w = c for every generator word w of H.
NormalizerIndices normalizer_indices(const CosetTable& t,
                                     const SubgroupSpec& h);
// Same count, using the Schreier generators of t as the words.
NormalizerIndices normalizer_indices(const CosetTable& t);

// Cosets Hg with g in N(H), found as the cosets onto which the base coset
// can be moved by a label preserving automorphism of the Schreier graph.
std::vector<std::size_t> normalizing_cosets(const CosetTable& t);

// The table of N(H) acting on G/N(H), obtained as the quotient of G/H by the
// left action of N(H)/H.
CosetTable normalizer_table(const CosetTable& t);

// Table of H1 ∩ H2 from the diagonal action on reachable pairs.
CosetTable intersect_subgroups(const CosetTable& t1, const CosetTable& t2);

// Projection of the cosets of H onto the cosets of K >= H: image[c] is the
// K-coset containing H-coset c. Throws if H is not contained in K.
std::vector<std::int32_t> covering_map(const CosetTable& fine,
                                       const CosetTable& coarse);

struct TowerLevel {
  CosetTable table;                 // G_i^n acting on G / G_i^n
  std::vector<std::int32_t> psi;    // label in Z_n of each coset
  std::vector<std::int32_t> below;  // coset of G_i lying under each coset
  long max_phi = 0;                 // N = max |phi| over Schreier generators
  long modulus = 0;
};

// Kernel of G_i -> Z -> Z_n, where phi gives the integer image of each
// Schreier generator of G_i (in schreier_edges order). The table of the
// kernel is the fibre product of the G_i table with Z_n. Throws
// InvalidPhiError if phi does not vanish on every relator read through the
// tree or is not surjective onto Z, and Error for n < 2.
TowerLevel cyclic_tower(const FinitePresentation& p, const CosetTable& base,
                        const std::vector<long>& phi, long n);

// Spreads per-Schreier-generator values over all edge ids (0 on the tree).
std::vector<long> edge_values(const CosetTable& t, const SpanningTree& tree,
                              const std::vector<long>& per_generator);

// Sum of edge values along the path that reads w from `start`.
long evaluate_along(const CosetTable& t, const std::vector<long>& edge_value,
                    const Word& w, std::size_t start = 0);

}  // namespace cosetgap
