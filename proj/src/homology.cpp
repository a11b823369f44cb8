#include "cosetgap/homology.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "cosetgap/error.hpp"

namespace cosetgap {

using boost::multiprecision::abs;

IntegerMatrix::IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error("ragged matrix literal");
    for (long x : r) data_.emplace_back(x);
  }
}

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
  IntegerMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error("matrix shapes do not match");
  IntegerMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer& a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out.at(i, j) += a * rhs.at(k, j);
    }
  }
  return out;
}

Integer IntegerMatrix::determinant() const {
  if (rows_ != cols_) throw Error("determinant of a non-square matrix");
  const std::size_t n = rows_;
  if (n == 0) return 1;
  std::vector<Integer> a = data_;
  auto el = [&](std::size_t r, std::size_t c) -> Integer& { return a[r * n + c]; };
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (el(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && el(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(el(k, c), el(swap, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        el(i, j) = (el(i, j) * el(k, k) - el(i, k) * el(k, j)) / prev;
      }
    }
    prev = el(k, k);
  }
  return sign * el(n - 1, n - 1);
}

std::string to_string(const Integer& x) { return x.str(); }

namespace {

using SparseLine = std::map<std::size_t, Integer>;

// Working matrix with row and column incidence, plus optional row transform
// U (stored by rows) and column transform V (stored by columns).
class SparseSnf {
 public:
  SparseSnf(const IntegerMatrix& m, bool track_u, bool track_v)
      : rows_(m.rows()), cols_(m.cols()), track_u_(track_u), track_v_(track_v) {
    row_.assign(rows_, {});
    col_rows_.assign(cols_, {});
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        if (m.at(r, c) != 0) {
          row_[r][c] = m.at(r, c);
          col_rows_[c].insert(r);
        }
      }
    }
    if (track_u_) {
      u_.assign(rows_, {});
      for (std::size_t r = 0; r < rows_; ++r) u_[r][r] = 1;
    }
    if (track_v_) {
      v_.assign(cols_, {});
      for (std::size_t c = 0; c < cols_; ++c) v_[c][c] = 1;
    }
    row_live_.assign(rows_, true);
    col_live_.assign(cols_, true);
  }

  void run() {
    while (true) {
      auto pivot = choose_pivot();
      if (!pivot) break;
      auto [r, c] = *pivot;
      bool clean = true;
      // clear column c below/above the pivot
      std::vector<std::size_t> others(col_rows_[c].begin(), col_rows_[c].end());
      for (std::size_t i : others) {
        if (i == r) continue;
        Integer q = row_[i].at(c) / row_[r].at(c);
        if (q != 0) add_row(i, r, -q);
        if (row_[i].count(c) != 0) clean = false;
      }
      std::vector<std::size_t> cols;
      for (const auto& [j, val] : row_[r]) {
        if (j != c) cols.push_back(j);
      }
      for (std::size_t j : cols) {
        Integer q = row_[r].at(j) / row_[r].at(c);
        if (q != 0) add_col(j, c, -q);
        if (row_[r].count(j) != 0) clean = false;
      }
      if (!clean) continue;
      if (row_[r].at(c) < 0) negate_row(r);
      pivots_.push_back({r, c, row_[r].at(c)});
      row_live_[r] = false;
      col_live_[c] = false;
    }
    normalize_chain();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  struct Pivot {
    std::size_t row, col;
    Integer value;
  };
  const std::vector<Pivot>& pivots() const { return pivots_; }

  std::vector<std::size_t> free_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (col_live_[c]) out.push_back(c);
    }
    return out;
  }

  const SparseLine& v_column(std::size_t c) const { return v_[c]; }

  SnfTransforms dense_transforms() const {
    std::vector<std::size_t> row_order;
    std::vector<std::size_t> col_order;
    for (const auto& p : pivots_) {
      row_order.push_back(p.row);
      col_order.push_back(p.col);
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      if (row_live_[r]) row_order.push_back(r);
    }
    for (std::size_t c = 0; c < cols_; ++c) {
      if (col_live_[c]) col_order.push_back(c);
    }
    SnfTransforms t{IntegerMatrix(rows_, rows_), IntegerMatrix(cols_, cols_),
                    IntegerMatrix(rows_, cols_)};
    for (std::size_t i = 0; i < rows_; ++i) {
      for (const auto& [j, val] : u_[row_order[i]]) t.u.at(i, j) = val;
    }
    for (std::size_t k = 0; k < cols_; ++k) {
      for (const auto& [i, val] : v_[col_order[k]]) t.v.at(i, k) = val;
    }
    for (std::size_t k = 0; k < pivots_.size(); ++k) t.d.at(k, k) = pivots_[k].value;
    return t;
  }

 private:
  std::optional<std::pair<std::size_t, std::size_t>> choose_pivot() const {
    std::optional<std::tuple<Integer, std::size_t, std::size_t, std::size_t>> best;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!row_live_[r]) continue;
      for (const auto& [c, val] : row_[r]) {
        Integer a = abs(val);
        std::size_t cost = (row_[r].size() - 1) * (col_rows_[c].size() - 1);
        if (!best || std::tie(a, cost, r, c) < std::tie(std::get<0>(*best), std::get<1>(*best),
                                                        std::get<2>(*best), std::get<3>(*best))) {
          best.emplace(a, cost, r, c);
        }
      }
    }
    if (!best) return std::nullopt;
    return std::make_pair(std::get<2>(*best), std::get<3>(*best));
  }

  static void axpy(SparseLine& target, const SparseLine& source, const Integer& q) {
    for (const auto& [k, val] : source) {
      auto [it, inserted] = target.try_emplace(k, 0);
      it->second += q * val;
      if (it->second == 0) target.erase(it);
    }
  }

  // row i += q row r
  void add_row(std::size_t i, std::size_t r, const Integer& q) {
    for (const auto& [c, val] : row_[r]) {
      auto [it, inserted] = row_[i].try_emplace(c, 0);
      it->second += q * val;
      if (it->second == 0) {
        row_[i].erase(it);
        col_rows_[c].erase(i);
      } else {
        col_rows_[c].insert(i);
      }
    }
    if (track_u_) axpy(u_[i], u_[r], q);
  }

  // column j += q column c
  void add_col(std::size_t j, std::size_t c, const Integer& q) {
    std::vector<std::size_t> rows(col_rows_[c].begin(), col_rows_[c].end());
    for (std::size_t i : rows) {
      auto [it, inserted] = row_[i].try_emplace(j, 0);
      it->second += q * row_[i].at(c);
      if (it->second == 0) {
        row_[i].erase(it);
        col_rows_[j].erase(i);
      } else {
        col_rows_[j].insert(i);
      }
    }
    if (track_v_) axpy(v_[j], v_[c], q);
  }

  void negate_row(std::size_t r) {
    for (auto& [c, val] : row_[r]) val = -val;
    if (track_u_) {
      for (auto& [c, val] : u_[r]) val = -val;
    }
  }

  // Replaces diag(a, b) at pivots i, j by diag(gcd, lcm):
  //   U = [[s, t], [-b/g, a/g]], V = [[1, -t b/g], [1, s a/g]], s a + t b = g.
  void normalize_pair(std::size_t i, std::size_t j) {
    Integer a = pivots_[i].value;
    Integer b = pivots_[j].value;
    Integer s, t;
    Integer g = extended_gcd(a, b, s, t);
    const std::size_t ri = pivots_[i].row, rj = pivots_[j].row;
    const std::size_t ci = pivots_[i].col, cj = pivots_[j].col;
    if (track_u_) {
      SparseLine new_i, new_j;
      axpy(new_i, u_[ri], s);
      axpy(new_i, u_[rj], t);
      axpy(new_j, u_[ri], -b / g);
      axpy(new_j, u_[rj], a / g);
      u_[ri] = std::move(new_i);
      u_[rj] = std::move(new_j);
    }
    if (track_v_) {
      SparseLine new_i, new_j;
      axpy(new_i, v_[ci], 1);
      axpy(new_i, v_[cj], 1);
      axpy(new_j, v_[ci], -t * b / g);
      axpy(new_j, v_[cj], s * a / g);
      v_[ci] = std::move(new_i);
      v_[cj] = std::move(new_j);
    }
    pivots_[i].value = g;
    pivots_[j].value = a / g * b;
  }

  static Integer extended_gcd(const Integer& a, const Integer& b, Integer& s, Integer& t) {
    Integer old_r = a, r = b, old_s = 1, s1 = 0, old_t = 0, t1 = 1;
    while (r != 0) {
      Integer q = old_r / r;
      Integer tmp = old_r - q * r;
      old_r = r;
      r = tmp;
      tmp = old_s - q * s1;
      old_s = s1;
      s1 = tmp;
      tmp = old_t - q * t1;
      old_t = t1;
      t1 = tmp;
    }
    s = old_s;
    t = old_t;
    return old_r;  // positive since a, b > 0
  }

  void normalize_chain() {
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      for (std::size_t j = i + 1; j < pivots_.size(); ++j) {
        if (pivots_[j].value % pivots_[i].value != 0) normalize_pair(i, j);
      }
    }
  }

  std::size_t rows_, cols_;
  bool track_u_, track_v_;
  std::vector<SparseLine> row_;
  std::vector<std::set<std::size_t>> col_rows_;
  std::vector<SparseLine> u_;
  std::vector<SparseLine> v_;
  std::vector<bool> row_live_;
  std::vector<bool> col_live_;
  std::vector<Pivot> pivots_;
};

}  // namespace

SnfResult smith_normal_form(const IntegerMatrix& m, SnfTransforms* transforms) {
  SparseSnf snf(m, transforms != nullptr, transforms != nullptr);
  snf.run();
  SnfResult out;
  for (const auto& p : snf.pivots()) out.diagonal.push_back(p.value);
  out.rank = out.diagonal.size();
  out.diagonal.resize(std::min(m.rows(), m.cols()), Integer(0));
  out.betti = m.cols() - out.rank;
  for (const auto& d : out.diagonal) {
    if (d > 1) out.torsion.push_back(d);
  }
  for (std::size_t i = 0; i + 1 < out.rank; ++i) {
    COSETGAP_ASSERT(out.diagonal[i + 1] % out.diagonal[i] == 0,
                    "Smith form diagonal is not a divisibility chain");
  }
  if (transforms != nullptr) {
    *transforms = snf.dense_transforms();
    if (m.rows() <= 50 && m.cols() <= 50) {
      COSETGAP_ASSERT(transforms->u * m * transforms->v == transforms->d,
                      "Smith form transforms do not reproduce the diagonal");
      Integer du = transforms->u.determinant();
      Integer dv = transforms->v.determinant();
      COSETGAP_ASSERT(abs(du) == 1 && abs(dv) == 1, "Smith form transform is not unimodular");
    }
  }
  return out;
}

IntegerMatrix abelianization_matrix(const FinitePresentation& p) {
  IntegerMatrix m(p.relators().size(), p.num_generators());
  for (std::size_t r = 0; r < p.relators().size(); ++r) {
    for (std::size_t g = 0; g < p.num_generators(); ++g) {
      m.at(r, g) = exponent_sum(p.relators()[r], static_cast<int>(g + 1));
    }
  }
  return m;
}

std::size_t first_betti(const FinitePresentation& p) {
  return smith_normal_form(abelianization_matrix(p)).betti;
}

FinitePresentation reidemeister_schreier(const FinitePresentation& p, const CosetTable& t) {
  if (t.num_generators() != p.num_generators()) {
    throw Error("coset table and presentation disagree on generator count");
  }
  const std::size_t k = p.num_generators();
  auto tree = spanning_tree(t);
  auto edges = schreier_edges(t, tree);
  COSETGAP_ASSERT(edges.size() == t.size() * k - (t.size() - 1),
                  "Schreier generator count differs from |E| - |V| + 1");
  std::vector<Letter> gen_of_edge(t.size() * k, 0);
  std::vector<std::string> names;
  for (std::size_t j = 0; j < edges.size(); ++j) {
    gen_of_edge[edges[j]] = static_cast<Letter>(j + 1);
    names.push_back("y" + std::to_string(j + 1));
  }
  std::vector<Word> relators;
  for (std::size_t c = 0; c < t.size(); ++c) {
    for (const Word& r : p.relators()) {
      Word w;
      std::size_t at = c;
      for (Letter x : r) {
        if (x > 0) {
          Letter y = gen_of_edge[at * k + static_cast<std::size_t>(x - 1)];
          if (y != 0) w.push_back(y);
          at = static_cast<std::size_t>(t.act(at, x));
        } else {
          auto from = static_cast<std::size_t>(t.act(at, x));
          Letter y = gen_of_edge[from * k + static_cast<std::size_t>(-x - 1)];
          if (y != 0) w.push_back(-y);
          at = from;
        }
      }
      COSETGAP_ASSERT(at == c, "relator does not close in the coset table");
      Word reduced = free_reduce(w);
      if (!reduced.empty()) relators.push_back(std::move(reduced));
    }
  }
  return FinitePresentation(std::move(names), std::move(relators));
}

PhiMap phi_from_abelianization(const FinitePresentation& p) {
  IntegerMatrix m = abelianization_matrix(p);
  SparseSnf snf(m, false, true);
  snf.run();
  auto free = snf.free_columns();
  if (free.empty()) throw InvalidPhiError("abelianization is finite: no surjection onto Z");
  const auto& col = snf.v_column(free.front());
  PhiMap out;
  out.values.assign(p.num_generators(), 0);
  Integer first = 0;
  for (const auto& [i, val] : col) {
    if (first == 0 && val != 0) first = val;
  }
  for (const auto& [i, val] : col) {
    Integer x = first < 0 ? Integer(-val) : val;
    if (abs(x) > Integer(std::numeric_limits<long>::max() / 4)) {
      throw Error("homomorphism value too large");
    }
    out.values[i] = x.convert_to<long>();
    out.max_abs = std::max(out.max_abs, std::abs(out.values[i]));
  }
  for (const Word& r : p.relators()) {
    long s = 0;
    for (Letter x : r) s += x > 0 ? out.values[static_cast<std::size_t>(x - 1)]
                                  : -out.values[static_cast<std::size_t>(-x - 1)];
    COSETGAP_ASSERT(s == 0, "homomorphism does not vanish on a relator");
  }
  return out;
}

}  // namespace cosetgap
