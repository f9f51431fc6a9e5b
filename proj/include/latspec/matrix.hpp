#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latspec/rational.hpp"

namespace latspec {

// Dense row-major matrix of exact rationals. Lattice bases are stored with
// one generator per row.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) throw std::invalid_argument("RationalMatrix: entry count mismatch");
    canonicalize_all();
  }

  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("RationalMatrix: ragged rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
    canonicalize_all();
  }

  static RationalMatrix from_rows(const std::vector<RationalVector>& rows) {
    const std::size_t c = rows.empty() ? 0 : rows.front().size();
    RationalMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw std::invalid_argument("RationalMatrix: ragged rows");
      std::copy(rows[i].begin(), rows[i].end(), m.row_begin(i));
    }
    m.canonicalize_all();
    return m;
  }

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Rational> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Rational> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  RationalVector row_vector(std::size_t i) const { return {row(i).begin(), row(i).end()}; }

  const std::vector<Rational>& entries() const noexcept { return data_; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(row_begin(a), row_begin(a) + cols_, row_begin(b));
  }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  RationalMatrix operator*(const RationalMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("RationalMatrix: product dimension mismatch");
    RationalMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Rational& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
      }
    return p;
  }

  RationalMatrix scaled(const Rational& s) const {
    RationalMatrix m = *this;
    for (auto& x : m.data_) x *= s;
    return m;
  }

  // Row vector times matrix.
  RationalVector left_multiply(std::span<const Rational> v) const {
    if (v.size() != rows_) throw std::invalid_argument("RationalMatrix: vector dimension mismatch");
    RationalVector out(cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (v[i] == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) out[j] += v[i] * (*this)(i, j);
    }
    return out;
  }

  bool all_integer() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return is_integer(q); });
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  // "[[a, b], [c, d]]" with exact fractions.
  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? ", [" : "[";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) s += ", ";
        s += latspec::to_string((*this)(i, j));
      }
      s += "]";
    }
    return s + "]";
  }

 private:
  // mpq_class(p, q) does not reduce; equality needs canonical entries.
  void canonicalize_all() {
    for (auto& x : data_) x.canonicalize();
  }

  std::vector<Rational>::iterator row_begin(std::size_t i) {
    return data_.begin() + static_cast<std::ptrdiff_t>(i * cols_);
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

namespace detail {

using IntegerRows = std::vector<IntegerVector>;

// Fraction-free determinant of an integer matrix (Bareiss). Row swaps are
// tracked for the sign.
inline Integer bareiss_det(IntegerRows a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = std::move(t);
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// Row-style Hermite normal form of an integer matrix with full column rank.
// Output is square (cols x cols), upper triangular, positive diagonal, and
// every entry above a pivot lies in [0, pivot).
inline IntegerRows integer_hnf(IntegerRows a, std::size_t cols) {
  const std::size_t m = a.size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols; ++col) {
    while (true) {
      std::size_t pivot = m;
      for (std::size_t r = row; r < m; ++r)
        if (a[r][col] != 0 && (pivot == m || abs(a[r][col]) < abs(a[pivot][col]))) pivot = r;
      if (pivot == m) throw std::invalid_argument("hnf: rank-deficient input");
      std::swap(a[row], a[pivot]);
      bool clean = true;
      for (std::size_t r = row + 1; r < m; ++r) {
        if (a[r][col] == 0) continue;
        const Integer q = floor_div(a[r][col], a[row][col]);
        for (std::size_t j = col; j < cols; ++j) a[r][j] -= q * a[row][j];
        if (a[r][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (a[row][col] < 0)
      for (std::size_t j = col; j < cols; ++j) a[row][j] = -a[row][j];
    for (std::size_t r = 0; r < row; ++r) {
      const Integer q = floor_div(a[r][col], a[row][col]);
      if (q == 0) continue;
      for (std::size_t j = col; j < cols; ++j) a[r][j] -= q * a[row][j];
    }
    ++row;
  }
  a.resize(cols);
  return a;
}

// Integer rows of s * m; throws if some entry is not integral.
inline IntegerRows scaled_integer_rows(const RationalMatrix& m, const Integer& s) {
  IntegerRows out(m.rows(), IntegerVector(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Rational v = m(i, j) * s;
      if (!is_integer(v)) throw std::invalid_argument("hnf: scale * m is not integral");
      out[i][j] = v.get_num();
    }
  return out;
}

}  // namespace detail

inline Rational det(const RationalMatrix& m) {
  if (!m.square()) throw std::invalid_argument("det: matrix is not square");
  // Clear denominators row by row, then run the integer elimination.
  Integer scale = 1;
  detail::IntegerRows a(m.rows(), IntegerVector(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const Integer d = common_denominator(m.row(i));
    scale *= d;
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = Rational(m(i, j) * d).get_num();
  }
  return make_rational(detail::bareiss_det(std::move(a)), scale);
}

inline RationalMatrix inverse(const RationalMatrix& m) {
  if (!m.square()) throw std::invalid_argument("inverse: matrix is not square");
  const std::size_t n = m.rows();
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw std::domain_error("inverse: singular matrix");
    a.swap_rows(k, p);
    inv.swap_rows(k, p);
    const Rational piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      const Rational f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

// (1/scale) * HNF(scale * m). Rows of m may outnumber its columns; the
// result is the square canonical basis of the lattice they generate.
inline RationalMatrix hnf(const RationalMatrix& m, const Integer& scale) {
  if (scale <= 0) throw std::invalid_argument("hnf: scale must be positive");
  if (m.rows() < m.cols()) throw std::invalid_argument("hnf: rank-deficient input");
  auto h = detail::integer_hnf(detail::scaled_integer_rows(m, scale), m.cols());
  RationalMatrix out(m.cols(), m.cols());
  for (std::size_t i = 0; i < m.cols(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = make_rational(h[i][j], scale);
  return out;
}

inline RationalMatrix hnf(const RationalMatrix& m) { return hnf(m, common_denominator(m.entries())); }

struct GramSchmidt {
  RationalMatrix orthogonal;  // rows b*_1..b*_n
  RationalMatrix mu;          // strictly lower triangular part used; unit diagonal
  RationalVector norms_sq;    // |b*_i|^2
};

inline GramSchmidt gram_schmidt(const RationalMatrix& basis) {
  const std::size_t n = basis.rows();
  const std::size_t c = basis.cols();
  GramSchmidt g{basis, RationalMatrix(n, n), RationalVector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    g.mu(i, i) = 1;
    for (std::size_t j = 0; j < i; ++j) {
      const Rational mu = dot<Rational, Rational>(basis.row(i), g.orthogonal.row(j)) / g.norms_sq[j];
      g.mu(i, j) = mu;
      if (mu == 0) continue;
      for (std::size_t k = 0; k < c; ++k) g.orthogonal(i, k) -= mu * g.orthogonal(j, k);
    }
    g.norms_sq[i] = norm_sq(g.orthogonal.row(i));
    if (g.norms_sq[i] == 0) throw std::invalid_argument("gram_schmidt: linearly dependent rows");
  }
  return g;
}

}  // namespace latspec
