#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cosetgap/cheeger.hpp"
#include "cosetgap/coset.hpp"
#include "cosetgap/graph.hpp"
#include "cosetgap/presentation.hpp"
#include "cosetgap/rational.hpp"
#include "cosetgap/spectrum.hpp"

namespace cosetgap {

inline constexpr int report_schema_version = 1;

struct EvaluationOptions {
  CheegerOptions cheeger;
  double tol = default_tolerance;
  std::size_t coset_limit = default_coset_limit;
  bool compute_betti = true;
};

struct TauRecord {
  std::string label;
  std::size_t index = 0;                // [G:G_i] = |V|
  std::size_t index_of_normalizer = 0;  // [G:N(G_i)]
  std::size_t index_over_subgroup = 0;  // [N(G_i):G_i]
  std::size_t num_generators = 0;       // |S|

  // h: exact when computable, otherwise 2/|V| <= h <= h_upper.
  bool h_exact = false;
  std::optional<Rational> h;
  Rational h_lower;
  double h_upper = 0;
  std::optional<CutWitness> h_witness;
  std::string h_method;

  std::optional<double> lambda1;
  std::optional<double> lambda1_residual;

  // Products from the characterization; absent on a single vertex graph.
  // q5 and q6 are exact-h values when h is exact, otherwise taken at the
  // upper end of the h bracket (q5_lower / q6_lower hold the lower end).
  std::optional<double> q3, q4, q5, q6;
  std::optional<double> q5_lower, q6_lower;
  std::optional<Rational> q5_exact;

  std::optional<std::size_t> betti;
  ElementaryBounds bounds;
};

TauRecord evaluate_table(const FinitePresentation& p, const CosetTable& t, std::string label,
                         const EvaluationOptions& options = {});
TauRecord evaluate_subgroup(const FinitePresentation& p, const SubgroupSpec& h,
                            const EvaluationOptions& options = {});

struct HalfInterval {
  std::size_t size = 0;       // |A|
  std::size_t boundary = 0;   // |dA|
  Rational ratio;             // |dA| / |A|
  std::size_t boundary_bound = 0;  // 2 * sum |phi| over Schreier generators
};

struct TowerLevelReport {
  long n = 0;
  TauRecord record;
  // Test function sin(2 pi psi / n) on X(G_i / G_i^n).
  double lambda_quotient = 0;   // lambda1(X(G_i / G_i^n))
  double dirichlet = 0;         // ||df||^2
  double dirichlet_bound = 0;   // [G:G_i] / n * 4 pi^2 N^2 |S|
  double norm2 = 0;             // ||f||^2, at least n / 8
  double rayleigh = 0;
  double rayleigh_bound = 0;    // [G:G_i] / n^2 * 32 pi^2 N^2 |S|
  double collapsed_bound = 0;   // 32 pi^2 N^2 |S| / n^2
  CollapseReport collapse;
  HalfInterval half_interval;
};

struct TauReport {
  std::string family;
  std::string presentation;
  std::vector<long> phi;
  long max_phi = 0;
  std::size_t base_index = 0;
  std::vector<TauRecord> records;        // sorted by index
  std::vector<TowerLevelReport> levels;  // towers only, sorted by n
  bool boundary_growth = false;          // half-interval |dA| grew
};

// Tower G_i^n for each n (strictly increasing, n > 2). Levels are evaluated
// on up to `threads` threads; the report does not depend on the count.
TauReport evaluate_cyclic_tower(const FinitePresentation& p, const SubgroupSpec& base,
                                const std::vector<long>& phi, const std::vector<long>& n_list,
                                const EvaluationOptions& options = {});

// phi on the Schreier generators of the base subgroup read off its
// abelianization.
std::vector<long> automatic_phi(const FinitePresentation& p, const CosetTable& base);

struct SubsequenceSummary {
  std::vector<std::size_t> index;
  std::vector<std::optional<double>> min_q3, min_q4, min_q5, min_q6;
  // Least squares slope of log q against log index over the range.
  std::optional<double> slope_q3, slope_q4, slope_q5, slope_q6;
  std::string note;
};

// Running minima and log-log slopes. Finite-range evidence only. Throws for
// an empty report.
SubsequenceSummary bounded_subsequence_summary(const TauReport& report);

std::string record_to_json(const TauRecord& r);
std::string report_to_json(const TauReport& r);
std::string report_to_csv(const TauReport& r);

}  // namespace cosetgap
