#pragma once

// Reference implementations used only by tests. Each one is deliberately
// naive and shares no code with the library routine it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "cosetgap/graph.hpp"
#include "cosetgap/homology.hpp"
#include "cosetgap/rational.hpp"

namespace oracle {

using cosetgap::Integer;
using cosetgap::LabeledMultigraph;
using cosetgap::Rational;

// Undirected edge list (source, target) with multiplicity, loops included.
inline std::vector<std::pair<std::size_t, std::size_t>> edges(const LabeledMultigraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    for (std::size_t l = 0; l < g.num_labels(); ++l) {
      out.emplace_back(v, static_cast<std::size_t>(g.targets()[v * g.num_labels() + l]));
    }
  }
  return out;
}

struct NaiveCheeger {
  Rational h;
  // every attaining set with |A| <= |V|/2, as a bitmask
  std::vector<std::uint64_t> minimizers;
};

// All 2^n - 2 proper subsets, boundary counted edge by edge.
inline NaiveCheeger naive_cheeger(const LabeledMultigraph& g) {
  std::size_t n = g.num_vertices();
  auto e = edges(g);
  NaiveCheeger best{Rational(1'000'000), {}};
  std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    std::size_t a = static_cast<std::size_t>(__builtin_popcountll(mask));
    std::size_t boundary = 0;
    for (auto [s, t] : e) {
      bool in_s = (mask >> s) & 1, in_t = (mask >> t) & 1;
      if (in_s != in_t) ++boundary;
    }
    Rational r(static_cast<std::int64_t>(boundary),
               static_cast<std::int64_t>(std::min(a, n - a)));
    if (r < best.h) {
      best.h = r;
      best.minimizers.clear();
    }
    if (r == best.h && 2 * a <= n) best.minimizers.push_back(mask);
  }
  return best;
}

inline std::vector<std::vector<double>> laplacian(const LabeledMultigraph& g) {
  std::size_t n = g.num_vertices();
  std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
  for (auto [s, t] : edges(g)) {
    if (s == t) continue;
    l[s][s] += 1;
    l[t][t] += 1;
    l[s][t] -= 1;
    l[t][s] -= 1;
  }
  return l;
}

// Cyclic Jacobi rotations; returns eigenvalues ascending.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Second smallest Laplacian eigenvalue of a connected graph.
inline double naive_lambda1(const LabeledMultigraph& g) {
  return jacobi_eigenvalues(laplacian(g))[1];
}

// lambda1 of the circulant on Z_n with the given jumps (each jump one
// generator, contributing 2 - 2 cos(2 pi j k / n) to mode k).
inline double circulant_lambda1(std::size_t n, const std::vector<long>& jumps) {
  double best = INFINITY;
  for (std::size_t k = 1; k < n; ++k) {
    double v = 0;
    for (long j : jumps) v += 2 - 2 * std::cos(2 * M_PI * static_cast<double>(j) * k / n);
    if (v > 1e-12) best = std::min(best, v);
  }
  return best;
}

// Determinant by cofactor expansion over the first row.
inline Integer cofactor_det(const std::vector<std::vector<Integer>>& m) {
  std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Integer total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    std::vector<std::vector<Integer>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    Integer term = m[0][c] * cofactor_det(minor);
    total += (c % 2 == 0) ? term : Integer(-term);
  }
  return total;
}

inline void combinations(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out,
                         std::vector<std::size_t>& cur, std::size_t start = 0) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, out, cur, i + 1);
    cur.pop_back();
  }
}

// Invariant factors d_k = D_k / D_{k-1}, D_k the gcd of all k x k minors.
inline std::vector<Integer> determinantal_divisors(const cosetgap::IntegerMatrix& m) {
  std::size_t r = m.rows(), c = m.cols();
  std::vector<Integer> factors;
  Integer prev = 1;
  for (std::size_t k = 1; k <= std::min(r, c); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    combinations(r, k, rs, cur);
    combinations(c, k, cs, cur);
    Integer g = 0;
    for (const auto& ri : rs) {
      for (const auto& ci : cs) {
        std::vector<std::vector<Integer>> sub(k, std::vector<Integer>(k));
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) sub[a][b] = m.at(ri[a], ci[b]);
        Integer d = cofactor_det(sub);
        if (d < 0) d = -d;
        g = boost::multiprecision::gcd(g, d);
      }
    }
    if (g == 0) {
      factors.push_back(0);
      prev = 0;
      continue;
    }
    factors.push_back(prev == 0 ? Integer(0) : Integer(g / prev));
    prev = g;
  }
  return factors;
}

using Perm = std::vector<int>;

inline Perm compose(const Perm& first, const Perm& then) {
  Perm out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = then[static_cast<std::size_t>(first[i])];
  return out;
}

inline Perm invert(const Perm& p) {
  Perm out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return out;
}

// Closure of a set of permutations under composition.
inline std::set<Perm> closure(const std::vector<Perm>& gens, std::size_t degree) {
  Perm id(degree);
  std::iota(id.begin(), id.end(), 0);
  std::set<Perm> seen{id};
  std::vector<Perm> frontier{id};
  while (!frontier.empty()) {
    Perm x = frontier.back();
    frontier.pop_back();
    for (const auto& s : gens) {
      Perm y = compose(x, s);
      if (seen.insert(y).second) frontier.push_back(y);
    }
  }
  return seen;
}

// Image of a word (letters +-i for generator i) as a permutation.
inline Perm evaluate(const cosetgap::Word& w, const std::vector<Perm>& gens, std::size_t degree) {
  Perm out(degree);
  std::iota(out.begin(), out.end(), 0);
  for (int x : w) {
    const Perm& g = gens[static_cast<std::size_t>(std::abs(x) - 1)];
    out = compose(out, x > 0 ? g : invert(g));
  }
  return out;
}

}  // namespace oracle
