#include "cosetgap/spectrum.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cosetgap/error.hpp"

namespace cosetgap {
namespace {

constexpr std::size_t dense_limit = 2000;

std::vector<double> laplacian_apply(const LabeledMultigraph& g, const std::vector<double>& x) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    std::size_t a = g.source(e);
    std::size_t b = g.target(e);
    if (a == b) continue;
    double d = x[a] - x[b];
    y[a] += d;
    y[b] -= d;
  }
  return y;
}

double residual_of(const LabeledMultigraph& g, const std::vector<double>& v, double lambda) {
  auto lv = laplacian_apply(g, v);
  double num = 0;
  double den = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    num += (lv[i] - lambda * v[i]) * (lv[i] - lambda * v[i]);
    den += v[i] * v[i];
  }
  return std::sqrt(num / den);
}

void normalize_sign(std::vector<double>& v) {
  for (double x : v) {
    if (std::abs(x) > 1e-12) {
      if (x < 0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

SpectralGap dense_gap(const LabeledMultigraph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto a = static_cast<Eigen::Index>(g.source(e));
    auto b = static_cast<Eigen::Index>(g.target(e));
    if (a == b) continue;
    lap(a, a) += 1;
    lap(b, b) += 1;
    lap(a, b) -= 1;
    lap(b, a) -= 1;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success) throw Error("eigensolver did not converge");
  SpectralGap out;
  out.method = "dense";
  out.value = solver.eigenvalues()(1);
  Eigen::VectorXd v = solver.eigenvectors().col(1);
  // project off the constant vector explicitly
  v.array() -= v.mean();
  v.normalize();
  out.vector.assign(v.data(), v.data() + n);
  normalize_sign(out.vector);
  return out;
}

SpectralGap iterative_gap(const LabeledMultigraph& g, double tol) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto a = static_cast<Eigen::Index>(g.source(e));
    auto b = static_cast<Eigen::Index>(g.target(e));
    if (a == b) continue;
    trip.emplace_back(a, a, 1.0);
    trip.emplace_back(b, b, 1.0);
    trip.emplace_back(a, b, -1.0);
    trip.emplace_back(b, a, -1.0);
  }
  Eigen::SparseMatrix<double> lap(n, n);
  lap.setFromTriplets(trip.begin(), trip.end());
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(tol * 1e-2);
  cg.setMaxIterations(static_cast<Eigen::Index>(20 * n));
  cg.compute(lap);
  // deterministic start: a smooth sum-zero vector plus a small ramp
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n)) +
           1e-3 * static_cast<double>(i % 7);
  }
  x.array() -= x.mean();
  x.normalize();
  double lambda = x.dot(lap * x);
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd y = cg.solve(x);
    y.array() -= y.mean();
    y.normalize();
    double next = y.dot(lap * y);
    x = y;
    double res = (lap * x - next * x).norm();
    bool settled = std::abs(next - lambda) <= tol * std::max(1.0, next);
    lambda = next;
    if (settled && res <= tol * std::max(1.0, lambda)) break;
  }
  SpectralGap out;
  out.method = "inverse-iteration";
  out.value = lambda;
  out.vector.assign(x.data(), x.data() + n);
  normalize_sign(out.vector);
  return out;
}

}  // namespace

std::optional<SpectralGap> lambda1(const LabeledMultigraph& g, double tol) {
  if (!(tol > 0)) throw Error("tolerance must be positive");
  if (g.num_vertices() < 2) return std::nullopt;
  SpectralGap gap = g.num_vertices() <= dense_limit ? dense_gap(g) : iterative_gap(g, tol);
  gap.residual = residual_of(g, gap.vector, gap.value);
  double scale = 4.0 * static_cast<double>(g.num_labels());
  COSETGAP_ASSERT(gap.residual <= 10 * tol * scale,
                  "eigenpair residual " + std::to_string(gap.residual) + " above tolerance");
  return gap;
}

double dirichlet_energy(const LabeledMultigraph& g, const std::vector<double>& f) {
  if (f.size() != g.num_vertices()) throw Error("function has the wrong length");
  double s = 0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    double d = f[g.target(e)] - f[g.source(e)];
    s += d * d;
  }
  return s;
}

double rayleigh_quotient(const LabeledMultigraph& g, const std::vector<double>& f) {
  double norm2 = 0;
  double sum = 0;
  double abs_sum = 0;
  for (double x : f) {
    norm2 += x * x;
    sum += x;
    abs_sum += std::abs(x);
  }
  if (norm2 == 0) throw Error("rayleigh quotient of the zero function");
  if (std::abs(sum) > 1e-9 * std::max(1.0, abs_sum)) {
    throw Error("rayleigh quotient needs a function summing to zero");
  }
  return dirichlet_energy(g, f) / norm2;
}

ElementaryBounds spectral_bound_check(std::size_t n, std::size_t s_size, double lambda,
                                      const Rational& h_low, double h_high) {
  ElementaryBounds out;
  if (n < 2) return out;
  out.applicable = true;
  const double nd = static_cast<double>(n);
  out.lambda_lower_slack = lambda - 1.0 / (nd * nd);
  COSETGAP_ASSERT(lambda >= (1.0 / (nd * nd)) * (1 - check_tolerance),
                  "lambda1 below 1/|V|^2");
  out.h_lower_slack = h_low - Rational(2, static_cast<std::int64_t>(n));
  COSETGAP_ASSERT(out.h_lower_slack >= Rational(0), "h below 2/|V|");
  double cap = std::sqrt(4.0 * static_cast<double>(s_size) * lambda);
  out.h_upper_slack = cap - h_high;
  COSETGAP_ASSERT(h_high * h_high <= 4.0 * static_cast<double>(s_size) * lambda * (1 + check_tolerance),
                  "h above sqrt(4|S| lambda1)");
  return out;
}

ElementaryBounds spectral_bound_check(const LabeledMultigraph& g, double lambda,
                                      const Rational& h) {
  return spectral_bound_check(g.num_vertices(), g.num_labels(), lambda, h, h.to_double());
}

CollapseReport lemma25_check(const LabeledMultigraph& x_gh, const LabeledMultigraph& x_kh,
                             std::size_t index_gk, const CheegerOptions& options,
                             double tol) {
  if (index_gk == 0) throw Error("index must be positive");
  CollapseReport out;
  auto gap_gh = lambda1(x_gh, tol);
  auto gap_kh = lambda1(x_kh, tol);
  const double idx = static_cast<double>(index_gk);
  if (gap_gh) out.lambda_gh = gap_gh->value;
  if (gap_gh && gap_kh) {
    out.lambda_kh = gap_kh->value;
    out.lambda_checked = true;
    out.lambda_slack = gap_kh->value / idx - gap_gh->value;
    COSETGAP_ASSERT(gap_gh->value <= gap_kh->value / idx * (1 + check_tolerance) + 1e-12,
                    "collapse lambda1 inequality fails");
  }
  if (x_gh.num_vertices() < 2 || x_kh.num_vertices() < 2) return out;
  try {
    out.h_gh = cheeger_exact(x_gh, options).h;
    out.h_kh = cheeger_exact(x_kh, options).h;
  } catch (const TooLargeError&) {
    return out;
  }
  const auto ig = static_cast<std::int64_t>(index_gk);
  out.proviso = *out.h_gh <= Rational(1, 2 * ig);
  if (out.proviso) {
    out.h_checked = true;
    Rational cap = Rational(4 * ig * ig * static_cast<std::int64_t>(x_gh.num_labels())) * *out.h_gh;
    out.h_slack = cap - *out.h_kh;
    COSETGAP_ASSERT(*out.h_kh <= cap, "collapse Cheeger inequality fails");
  }
  return out;
}

GeneratorChangeReport generator_change_check(const LabeledMultigraph& x,
                                             const CheegerOptions& options) {
  GeneratorChangeReport out;
  if (x.num_vertices() < 2) throw Error("h is undefined on a single vertex graph");
  auto sq = square_generators(x);
  out.h = cheeger_exact(x, options).h;
  out.h_squared_set = cheeger_exact(sq, options).h;
  out.factor = Rational(4 * static_cast<std::int64_t>(x.num_labels()) - 1);
  COSETGAP_ASSERT(out.h <= out.h_squared_set, "h decreased after adding generators");
  COSETGAP_ASSERT(out.h_squared_set <= out.factor * out.h,
                  "h grew by more than 4|S| - 1 after squaring the generators");
  return out;
}

}  // namespace cosetgap
