#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latspec/errors.hpp"
#include "latspec/matrix.hpp"
#include "latspec/rational.hpp"

namespace latspec {

// Desk-scale limits shared by enumeration, SVP and generator search.
struct Limits {
  std::uint64_t enumeration_cap = 1'000'000;
  std::size_t svp_dimension_cap = 12;
  std::uint64_t search_cap = 1'000'000;
};

// Points of L ∩ [0,1)^d. All coordinates share one denominator, so a point is
// stored as d integer numerators in [0, denominator).
class PointSet {
 public:
  PointSet(std::size_t dim, std::int64_t denominator, std::vector<std::int64_t> numerators)
      : dim_(dim), denominator_(denominator), numerators_(std::move(numerators)) {
    if (dim_ == 0 || denominator_ <= 0 || numerators_.size() % dim_ != 0)
      throw std::invalid_argument("PointSet: inconsistent layout");
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return numerators_.size() / dim_; }
  std::int64_t denominator() const noexcept { return denominator_; }

  std::span<const std::int64_t> numerators(std::size_t i) const {
    return {numerators_.data() + i * dim_, dim_};
  }

  RationalVector point(std::size_t i) const {
    RationalVector p(dim_);
    const auto num = numerators(i);
    for (std::size_t k = 0; k < dim_; ++k)
      p[k] = make_rational(Integer(static_cast<long>(num[k])), Integer(static_cast<long>(denominator_)));
    return p;
  }

  std::vector<RationalVector> points() const {
    std::vector<RationalVector> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
    return out;
  }

 private:
  std::size_t dim_;
  std::int64_t denominator_;
  std::vector<std::int64_t> numerators_;
};

class IntegrationLattice;

class DualLattice {
 public:
  std::size_t dim() const noexcept { return basis_.rows(); }
  const RationalMatrix& basis() const noexcept { return basis_; }
  bool integral() const { return basis_.all_integer(); }

  // Back to the primal lattice: (B^-1)^T of the dual basis.
  IntegrationLattice primal() const;

 private:
  friend class IntegrationLattice;
  DualLattice(RationalMatrix basis, bool relaxed) : basis_(std::move(basis)), relaxed_(relaxed) {}

  RationalMatrix basis_;
  bool relaxed_;
};

class IntegrationLattice {
 public:
  struct Rank1 {
    Integer n;
    IntegerVector generator;
  };

  // Lattice generated by g/n together with Z^d.
  static IntegrationLattice from_rank1(const Integer& n, const IntegerVector& g) {
    if (n <= 0) throw std::invalid_argument("from_rank1: n must be positive");
    if (g.empty()) throw std::invalid_argument("from_rank1: empty generator");
    const std::size_t d = g.size();
    RationalMatrix rows(d + 1, d);
    for (std::size_t j = 0; j < d; ++j) {
      rows(0, j) = make_rational(g[j], n);
      rows(j + 1, j) = 1;
    }
    auto l = from_canonical(hnf(rows, n), false);
    l.rank1_ = Rank1{n, g};
    return l;
  }

  // Z^d plus the given rational generators.
  static IntegrationLattice from_generators(std::size_t d, const std::vector<RationalVector>& gens) {
    if (d == 0) throw std::invalid_argument("from_generators: dimension must be positive");
    RationalMatrix rows(gens.size() + d, d);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (gens[i].size() != d) throw std::invalid_argument("from_generators: dimension mismatch");
      for (std::size_t j = 0; j < d; ++j) rows(i, j) = gens[i][j];
    }
    for (std::size_t j = 0; j < d; ++j) rows(gens.size() + j, j) = 1;
    return from_canonical(hnf(rows), false);
  }

  static IntegrationLattice from_basis(const RationalMatrix& basis) {
    check_basis_shape(basis);
    return from_canonical(hnf(basis), false);
  }

  // Any full-rank lattice; Z^d need not be contained. Point count is found by
  // enumeration, so the limits apply at construction.
  static IntegrationLattice from_basis_relaxed(const RationalMatrix& basis, const Limits& limits = {}) {
    check_basis_shape(basis);
    auto l = from_canonical(hnf(basis), true);
    l.n_points_ = static_cast<long>(l.enumerate_points(limits).size());
    return l;
  }

  std::size_t dim() const noexcept { return basis_.rows(); }
  const RationalMatrix& basis() const noexcept { return basis_; }
  const Integer& n_points() const noexcept { return n_points_; }
  bool is_integration() const noexcept { return !relaxed_; }
  const std::optional<Rank1>& rank1() const noexcept { return rank1_; }

  DualLattice dual() const {
    auto b = inverse_.transpose();
    auto h = hnf(b);
    if (!relaxed_) {
      if (!h.all_integer()) throw InvariantViolation("dual of an integration lattice is not integral");
      if (abs(det(h)) != Rational(n_points_)) throw InvariantViolation("dual determinant differs from N");
    }
    return DualLattice(std::move(h), relaxed_);
  }

  // x ∈ L iff x · B^-1 is an integer vector.
  bool contains(std::span<const Rational> x) const {
    if (x.size() != dim()) throw std::invalid_argument("contains: dimension mismatch");
    for (const auto& c : inverse_.left_multiply(x))
      if (!is_integer(c)) return false;
    return true;
  }

  PointSet enumerate_points(const Limits& limits = {}) const {
    if (relaxed_) return enumerate_box(limits);
    if (n_points_ > Integer(static_cast<unsigned long>(limits.enumeration_cap)))
      throw CapExceeded("enumeration: N = " + n_points_.get_str() + " exceeds cap " +
                        std::to_string(limits.enumeration_cap));
    return enumerate_cosets();
  }

  friend bool operator==(const IntegrationLattice& a, const IntegrationLattice& b) {
    return a.basis_ == b.basis_;
  }

 private:
  IntegrationLattice(RationalMatrix basis, RationalMatrix inv, Integer n, bool relaxed)
      : basis_(std::move(basis)), inverse_(std::move(inv)), n_points_(std::move(n)), relaxed_(relaxed) {}

  static void check_basis_shape(const RationalMatrix& basis) {
    if (!basis.square() || basis.rows() == 0) throw std::invalid_argument("basis must be square and non-empty");
    if (det(basis) == 0) throw std::invalid_argument("basis rows are linearly dependent");
  }

  static IntegrationLattice from_canonical(RationalMatrix h, bool relaxed) {
    auto inv = inverse(h);
    Integer n = 0;
    if (!relaxed) {
      // Row i of B^-1 holds the coefficients expressing e_i in the basis.
      for (std::size_t i = 0; i < inv.rows(); ++i)
        for (std::size_t j = 0; j < inv.cols(); ++j)
          if (!is_integer(inv(i, j)))
            throw NotIntegrationLattice(i, "lattice does not contain unit vector e_" + std::to_string(i + 1));
      const Rational d = abs(det(h));
      if (d.get_num() != 1) throw InvariantViolation("integration lattice determinant is not 1/N");
      n = d.get_den();
    }
    return IntegrationLattice(std::move(h), std::move(inv), std::move(n), relaxed);
  }

  // L / Z^d is generated by the HNF rows with orders q_i = 1/b_ii; the
  // vectors sum c_i b_i with 0 <= c_i < q_i are distinct mod Z^d.
  PointSet enumerate_cosets() const {
    const std::size_t d = dim();
    const std::int64_t n = n_points_.get_si();
    std::vector<std::vector<std::int64_t>> step(d, std::vector<std::int64_t>(d));
    std::vector<std::int64_t> order(d);
    for (std::size_t i = 0; i < d; ++i) {
      order[i] = basis_(i, i).get_den().get_si();
      if (basis_(i, i).get_num() != 1) throw InvariantViolation("HNF diagonal is not 1/q");
      for (std::size_t j = 0; j < d; ++j) {
        const Rational v = basis_(i, j) * n_points_;
        if (!is_integer(v)) throw InvariantViolation("N * L is not integral");
        Integer r = v.get_num() % n_points_;
        if (r < 0) r += n_points_;
        step[i][j] = r.get_si();
      }
    }
    // Subtracting (order - 1) steps rewinds a level; stored as an addition mod n.
    std::vector<std::vector<std::int64_t>> rewind(d, std::vector<std::int64_t>(d));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const std::int64_t back = static_cast<std::int64_t>(
            (static_cast<__int128>((order[i] - 1) % n) * step[i][j]) % n);
        rewind[i][j] = back == 0 ? 0 : n - back;
      }
    auto advance = [n](std::int64_t& x, std::int64_t by) {
      x += by;
      if (x >= n) x -= n;
    };
    std::vector<std::int64_t> flat;
    flat.reserve(static_cast<std::size_t>(n) * d);
    std::vector<std::int64_t> counter(d, 0);
    std::vector<std::int64_t> cur(d, 0);
    bool done = false;
    while (!done) {
      flat.insert(flat.end(), cur.begin(), cur.end());
      // Odometer: the last coordinate varies fastest.
      done = true;
      std::size_t level = d;
      while (level-- > 0) {
        if (++counter[level] < order[level]) {
          for (std::size_t j = 0; j < d; ++j) advance(cur[j], step[level][j]);
          done = false;
          break;
        }
        counter[level] = 0;
        for (std::size_t j = 0; j < d; ++j) advance(cur[j], rewind[level][j]);
      }
    }
    if (flat.size() != static_cast<std::size_t>(n) * d) throw InvariantViolation("coset enumeration count");
    return PointSet(d, n, std::move(flat));
  }

  // Generic L ∩ [0,1)^d by scanning the coefficient box spanned by the cube.
  PointSet enumerate_box(const Limits& limits) const {
    const std::size_t d = dim();
    std::vector<Integer> lo(d), hi(d);
    Integer volume = 1;
    for (std::size_t j = 0; j < d; ++j) {
      Rational a = 0, b = 0;
      for (std::size_t i = 0; i < d; ++i) {
        if (inverse_(i, j) < 0) a += inverse_(i, j);
        else b += inverse_(i, j);
      }
      lo[j] = ceil(a);
      hi[j] = floor(b);
      volume *= hi[j] - lo[j] + 1;
    }
    if (volume > Integer(static_cast<unsigned long>(limits.enumeration_cap)) * 64)
      throw CapExceeded("enumeration: coefficient box too large for relaxed lattice");
    const Integer den = common_denominator(basis_.entries());
    if (den > Integer(static_cast<unsigned long>(limits.enumeration_cap)) * 1024)
      throw CapExceeded("enumeration: coordinate denominator too large");
    std::vector<std::int64_t> flat;
    IntegerVector c = lo;
    for (std::size_t j = 0; j < d; ++j)
      if (lo[j] > hi[j]) return PointSet(d, den.get_si(), {});
    while (true) {
      RationalVector x = basis_.left_multiply(to_rational(c));
      bool inside = true;
      for (const auto& v : x)
        if (v < 0 || v >= 1) inside = false;
      if (inside) {
        for (const auto& v : x) flat.push_back(Rational(v * den).get_num().get_si());
        if (flat.size() / d > limits.enumeration_cap) throw CapExceeded("enumeration: point count exceeds cap");
      }
      bool carried = true;
      for (std::size_t k = d; k-- > 0;) {
        if (c[k] < hi[k]) {
          ++c[k];
          carried = false;
          break;
        }
        c[k] = lo[k];
      }
      if (carried) break;
    }
    return PointSet(d, den.get_si(), std::move(flat));
  }

  RationalMatrix basis_;
  RationalMatrix inverse_;
  Integer n_points_;
  bool relaxed_ = false;
  std::optional<Rank1> rank1_;
};

inline IntegrationLattice DualLattice::primal() const {
  auto b = inverse(basis_).transpose();
  return relaxed_ ? IntegrationLattice::from_basis_relaxed(b) : IntegrationLattice::from_basis(b);
}

}  // namespace latspec
