#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cosetgap/cheeger.hpp"
#include "cosetgap/graph.hpp"
#include "cosetgap/rational.hpp"

namespace cosetgap {

inline constexpr double default_tolerance = 1e-9;
// Relative tolerance for inequalities that involve lambda1, sqrt or pi.
inline constexpr double check_tolerance = 1e-6;

struct SpectralGap {
  double value = 0;
  double residual = 0;          // ||L v - value v|| / ||v||
  std::vector<double> vector;   // unit eigenvector, sums to zero
  std::string method;           // "dense" or "inverse-iteration"
};

// Laplacian L = D - A with multiplicities; loops contribute nothing.
// Dense symmetric solver up to 2000 vertices, inverse iteration with
// conjugate gradients on the sum-zero subspace beyond. nullopt for a single
// vertex. Throws InvariantViolation if the residual exceeds 10 tol ||L||.
std::optional<SpectralGap> lambda1(const LabeledMultigraph& g,
                                   double tol = default_tolerance);

// ||df||^2 / ||f||^2. Throws for f identically zero or not summing to zero.
double rayleigh_quotient(const LabeledMultigraph& g, const std::vector<double>& f);
double dirichlet_energy(const LabeledMultigraph& g, const std::vector<double>& f);

struct ElementaryBounds {
  bool applicable = false;       // false for a single vertex
  double lambda_lower_slack = 0;  // lambda1 - 1/|V|^2
  Rational h_lower_slack;         // h - 2/|V|
  double h_upper_slack = 0;       // sqrt(4|S| lambda1) - h
};

// lambda1 >= 1/|V|^2, h >= 2/|V| and h <= sqrt(4 |S| lambda1). Throws
// InvariantViolation when one fails. `h` may be any lower value when only
// a bound is known for the first two checks and an upper value for the
// last, hence the separate arguments.
ElementaryBounds spectral_bound_check(std::size_t num_vertices, std::size_t s_size,
                                      double lambda, const Rational& h_low,
                                      double h_high);
ElementaryBounds spectral_bound_check(const LabeledMultigraph& g, double lambda,
                                      const Rational& h);

struct CollapseReport {
  double lambda_gh = 0;
  std::optional<double> lambda_kh;
  bool lambda_checked = false;
  double lambda_slack = 0;  // lambda_kh / [G:K] - lambda_gh
  std::optional<Rational> h_gh;
  std::optional<Rational> h_kh;
  bool proviso = false;     // h_gh <= 1 / (2 [G:K])
  bool h_checked = false;
  std::optional<Rational> h_slack;  // 4 h_gh [G:K]^2 |S| - h_kh
};

// lambda1(X(G/H)) <= lambda1(X(K/H)) / [G:K], and h(X(K/H)) <= 4 h(X(G/H))
// [G:K]^2 |S| when h(X(G/H)) <= 1/(2 [G:K]). Throws InvariantViolation on
// failure. h checks need exact h on both graphs and are skipped otherwise.
CollapseReport lemma25_check(const LabeledMultigraph& x_gh,
                             const LabeledMultigraph& x_kh, std::size_t index_gk,
                             const CheegerOptions& options = {},
                             double tol = default_tolerance);

struct GeneratorChangeReport {
  Rational h;
  Rational h_squared_set;
  Rational factor;  // 4|S| - 1
};

// h(X) <= h(X') <= (4|S| - 1) h(X) for X' over words of length <= 2.
GeneratorChangeReport generator_change_check(const LabeledMultigraph& x,
                                             const CheegerOptions& options = {});

}  // namespace cosetgap
