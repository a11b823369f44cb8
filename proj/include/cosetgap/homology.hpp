#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <vector>

#include "cosetgap/coset.hpp"
#include "cosetgap/presentation.hpp"

namespace cosetgap {

using Integer = boost::multiprecision::cpp_int;

class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntegerMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Integer& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntegerMatrix operator*(const IntegerMatrix& rhs) const;
  bool operator==(const IntegerMatrix&) const = default;

  // Determinant by fraction-free elimination; square matrices only.
  Integer determinant() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

struct SnfResult {
  std::vector<Integer> diagonal;  // min(rows, cols) entries, d_i | d_{i+1}
  std::size_t rank = 0;
  std::size_t betti = 0;          // cols - rank
  std::vector<Integer> torsion;   // the d_i > 1
};

// U m V = D with U, V unimodular and D holding the diagonal.
struct SnfTransforms {
  IntegerMatrix u;
  IntegerMatrix v;
  IntegerMatrix d;
};

// Sparse elimination with a smallest-magnitude pivot (fewest fill-in on
// ties), then gcd/lcm normalization of the diagonal. Transforms, when
// requested, are returned dense.
SnfResult smith_normal_form(const IntegerMatrix& m, SnfTransforms* transforms = nullptr);

// Rows are relators, columns generators, entries exponent sums.
IntegerMatrix abelianization_matrix(const FinitePresentation& p);

std::size_t first_betti(const FinitePresentation& p);

// One generator per non-tree edge of the breadth-first tree (in edge id
// order), one relator per (coset, relator) pair, rewritten and freely
// reduced; trivial relators are dropped.
FinitePresentation reidemeister_schreier(const FinitePresentation& p, const CosetTable& t);

struct PhiMap {
  std::vector<long> values;  // image of each generator
  long max_abs = 0;          // N
};

// A surjection onto Z from the first free column of the Smith form column
// transform, with its first nonzero value made positive. Throws
// InvalidPhiError when the abelianization is finite.
PhiMap phi_from_abelianization(const FinitePresentation& p);

std::string to_string(const Integer& x);

}  // namespace cosetgap
