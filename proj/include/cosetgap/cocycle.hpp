#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cosetgap/cheeger.hpp"
#include "cosetgap/coset.hpp"
#include "cosetgap/graph.hpp"
#include "cosetgap/presentation.hpp"
#include "cosetgap/rational.hpp"

namespace cosetgap {

// (edge id, +1 along the edge orientation / -1 against it)
using EdgePath = std::vector<std::pair<std::size_t, int>>;

// Integer values on the oriented edges of one graph.
struct Cochain {
  std::vector<std::int64_t> values;

  static Cochain zero(const LabeledMultigraph& g) {
    return Cochain{std::vector<std::int64_t>(g.num_edges(), 0)};
  }
  // df(e) = f(target) - f(source)
  static Cochain coboundary(const LabeledMultigraph& g, const std::vector<std::int64_t>& f);
  bool operator==(const Cochain&) const = default;
};

// Vertex at which each step starts; throws when consecutive steps do not
// meet. Returns the start and end vertices.
std::pair<std::size_t, std::size_t> path_ends(const LabeledMultigraph& g, const EdgePath& path);

std::int64_t evaluate_on_path(const LabeledMultigraph& g, const Cochain& c, const EdgePath& path);

// Every closed walk of length one, two or three evaluates to zero.
bool is_meta_cocycle(const LabeledMultigraph& g, const Cochain& c);

struct CoboundaryTest {
  bool coboundary = true;
  EdgePath witness_loop;  // fundamental cycle of an inconsistent edge
};

CoboundaryTest is_coboundary(const LabeledMultigraph& g, const Cochain& c);

// h < sqrt(2 / (3 |V|)), decided exactly.
bool below_cocycle_threshold(const Rational& h, std::size_t num_vertices);

struct CocycleCertificate {
  Cochain cochain;
  EdgePath witness_loop;
  std::int64_t witness_value = 0;

  // Construction data on the Cayley graph where the lemma was applied.
  Rational h;
  std::size_t cayley_vertices = 0;
  std::vector<std::size_t> minimizing_set;
  std::size_t translate = 0;  // vertex g with g(dA) disjoint from dA
  std::size_t e1 = 0;
  std::size_t e2 = 0;
  std::size_t index_of_normalizer = 1;
  std::size_t index_over_subgroup = 0;
};

// Meta-cocycle on a Cayley graph of a finite group that is not a
// coboundary. Throws InapplicableError when h >= sqrt(2/(3|V|)) or h cannot
// be computed exactly, and InvariantViolation if a step the construction
// guarantees fails.
CocycleCertificate build_meta_cocycle(const LabeledMultigraph& x, const CheegerOptions& options = {});

// Pulls a certificate on the collapsed graph back to X(G/H): forest edges
// carry 0, all other edges the value of their image, and the witness loop is
// lifted through forest paths.
CocycleCertificate pullback_certificate(const CocycleCertificate& cert,
                                        const LabeledMultigraph& x_gh,
                                        const CollapseResult& collapse);

struct Certification {
  CocycleCertificate certificate;  // on X(G/H)
  std::size_t betti = 0;           // of the subgroup, from its presentation
  std::string digest;              // of X(G/H)
};

// Normalizer, collapse, meta-cocycle, pullback, then independent checks:
// relator loops vanish at every coset and the Reidemeister-Schreier
// presentation of H has positive first Betti number.
Certification certify_infinite_abelianization(const FinitePresentation& p, const CosetTable& t,
                                              const CheegerOptions& options = {});

// Certificate JSON. The graph is identified by its digest and size.
std::string certificate_to_json(const Certification& c, const LabeledMultigraph& x_gh);

struct VerifyReport {
  std::size_t vertices = 0;
  std::int64_t witness_value = 0;
  std::size_t relator_loops = 0;
};

// Re-checks a serialized certificate against the graph of (p, t) without
// trusting anything else in it. Throws RejectedError on any mismatch.
VerifyReport verify_certificate(const std::string& json, const FinitePresentation& p,
                                const CosetTable& t);

}  // namespace cosetgap
