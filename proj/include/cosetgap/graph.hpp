#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cosetgap/coset.hpp"
#include "cosetgap/presentation.hpp"

namespace cosetgap {

struct Edge {
  std::size_t source;
  std::size_t target;
  std::size_t label;
};

// A Schreier coset graph: each vertex has exactly one outgoing edge per
// label, and every label acts as a permutation of the vertices, so the graph
// has n * L oriented edges and valence 2L (loops counted twice). Edge ids are
// vertex * L + label. Loops and parallel edges are kept.
class LabeledMultigraph {
 public:
  LabeledMultigraph() = default;

  // targets[v * L + l] is the head of the l-edge leaving v. Throws if some
  // label is not a permutation or the graph is disconnected.
  LabeledMultigraph(std::size_t num_vertices,
                    std::vector<std::string> label_names,
                    std::vector<std::int32_t> targets);

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_labels() const noexcept { return names_.size(); }
  std::size_t num_edges() const noexcept { return targets_.size(); }

  std::size_t source(std::size_t e) const noexcept { return e / names_.size(); }
  std::size_t target(std::size_t e) const noexcept {
    return static_cast<std::size_t>(targets_[e]);
  }
  std::size_t label(std::size_t e) const noexcept { return e % names_.size(); }
  std::size_t edge(std::size_t v, std::size_t label) const noexcept {
    return v * names_.size() + label;
  }
  Edge edge_at(std::size_t e) const noexcept {
    return {source(e), target(e), label(e)};
  }

  const std::vector<std::string>& label_names() const noexcept { return names_; }
  const std::vector<std::int32_t>& targets() const noexcept { return targets_; }

  // Optional integer vertex labels (the psi values of a cyclic tower).
  const std::optional<std::vector<std::int64_t>>& vertex_labels() const noexcept {
    return vertex_labels_;
  }
  void set_vertex_labels(std::vector<std::int64_t> labels);

  // Non-loop neighbours with multiplicity, both orientations.
  std::vector<std::size_t> neighbours(std::size_t v) const;

  bool operator==(const LabeledMultigraph&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::string> names_;
  std::vector<std::int32_t> targets_;
  std::optional<std::vector<std::int64_t>> vertex_labels_;
};

LabeledMultigraph schreier_graph(const CosetTable& t, const FinitePresentation& p);

// Schreier graph of the same coset space with respect to a different
// generating set, given as words in the presentation's generators.
LabeledMultigraph schreier_graph(const CosetTable& t,
                                 const std::vector<Word>& generators,
                                 std::vector<std::string> names);

// Hex SHA-256 of the vertex count, label count and target array.
std::string graph_digest(const LabeledMultigraph& g);

std::string to_dot(const LabeledMultigraph& g);
std::string to_edge_csv(const LabeledMultigraph& g);
// Reads `source,target,label` rows (header optional). Labels are taken in
// order of first appearance.
LabeledMultigraph from_edge_csv(std::string_view text);

// Vertices reachable from `start` in the undirected graph induced on
// `members` (a vertex subset given as a membership mask).
bool induced_connected(const LabeledMultigraph& g,
                       const std::vector<bool>& members);

// Vertex images of the graph automorphisms that commute with the labelled
// action (left translations when the graph is a Cayley graph). translations
// [u][v] is the image of v under the automorphism sending vertex 0 to u.
// Throws InvariantViolation if the graph is not vertex-transitive in this
// sense.
std::vector<std::vector<std::int32_t>> left_translations(
    const LabeledMultigraph& g);

// Schreier graph over S followed by the freely reduced words of length two in
// S and its inverses. The S labels are kept as they are; a length-two word is
// dropped when it acts trivially or when it or its inverse already acts like
// an earlier label, since a word and its inverse give the same edges.
LabeledMultigraph square_generators(const LabeledMultigraph& x);

struct CollapseResult {
  LabeledMultigraph graph;                  // X(K/H)
  std::vector<std::int32_t> component;      // vertex of X(G/H) -> vertex
  std::vector<std::int64_t> edge_image;     // edge -> edge of X(K/H), -1 on F
  std::vector<std::int32_t> projection;     // vertex of X(G/H) -> coset of K
  std::size_t component_size = 0;           // [G:K]

  // Edge path inside the forest joining two vertices of one component, as
  // (edge id, +1 forward / -1 backward) steps.
  std::vector<std::pair<std::size_t, int>> forest_path(
      const LabeledMultigraph& x_gh, std::size_t from, std::size_t to) const;

  std::vector<bool> in_forest;
};

// Lifts the breadth-first maximal tree of X(G/K) to a forest in X(G/H) and
// contracts each component. Labels of the result are the non-tree edges of
// X(G/K). Throws if X(G/H) does not cover X(G/K).
CollapseResult collapse_forest(const LabeledMultigraph& x_gh,
                               const CosetTable& t_gk);

}  // namespace cosetgap
