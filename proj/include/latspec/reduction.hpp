#pragma once

#include <algorithm>
#include <optional>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latspec/bigfloat.hpp"
#include "latspec/errors.hpp"
#include "latspec/lattice.hpp"
#include "latspec/matrix.hpp"
#include "latspec/rational.hpp"

namespace latspec {

// LLL-reduced basis with its exact Gram-Schmidt data.
struct ReducedBasis {
  RationalMatrix basis;  // rows b_1..b_d
  RationalMatrix gso;    // rows b*_1..b*_d
  RationalMatrix mu;     // mu(i, j) for j < i
  RationalVector gso_norms_sq;
  Rational delta;

  std::size_t size() const { return basis.rows(); }

  bool size_reduced() const {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (abs(mu(i, j)) > Rational(1, 2)) return false;
    return true;
  }

  bool lovasz() const {
    for (std::size_t k = 1; k < size(); ++k) {
      const Rational& m = mu(k, k - 1);
      if (gso_norms_sq[k] < (delta - m * m) * gso_norms_sq[k - 1]) return false;
    }
    return true;
  }

  // |b*_j|^2 <= 2^(i-j) |b*_i|^2 for all j <= i.
  bool property_a() const {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const Integer scale = Integer(1) << static_cast<mp_bitcnt_t>(i - j);
        if (gso_norms_sq[j] > Rational(scale) * gso_norms_sq[i]) return false;
      }
    return true;
  }

  // |b_i|^2 <= 2^(d-1) |b*_i|^2.
  bool property_b() const {
    const Integer scale = Integer(1) << static_cast<mp_bitcnt_t>(size() - 1);
    for (std::size_t i = 0; i < size(); ++i)
      if (norm_sq(basis.row(i)) > Rational(scale) * gso_norms_sq[i]) return false;
    return true;
  }

  // |b*_d| >= 2^(-(d-1)/2) max |b*_i| >= 2^(-d+1) max |b_i|, in squared form.
  bool norm_chain() const {
    const std::size_t d = size();
    const Rational& last = gso_norms_sq[d - 1];
    Rational max_gso = 0, max_b = 0;
    for (std::size_t i = 0; i < d; ++i) {
      max_gso = std::max(max_gso, gso_norms_sq[i]);
      max_b = std::max(max_b, norm_sq(basis.row(i)));
    }
    const Rational half_power = Rational(Integer(1) << static_cast<mp_bitcnt_t>(d - 1));
    // 2^(d-1) |b*_d|^2 >= max |b*_i|^2 and 2^(d-1) max |b*_i|^2 >= max |b_i|^2.
    return half_power * last >= max_gso && half_power * max_gso >= max_b;
  }
};

// Exact LLL. Rational input is scaled to an integer basis and reduced with
// integral Gram-Schmidt data d_i = prod_{j<=i} |b*_j|^2 and
// lambda_ij = d_j mu_ij, so every step is exact integer arithmetic. The swap
// and size-reduction decisions are those of the rational algorithm.
inline ReducedBasis lll_reduce(const RationalMatrix& input, const Rational& delta = Rational(3, 4)) {
  if (delta <= Rational(1, 4) || delta >= 1) throw std::invalid_argument("lll_reduce: delta must lie in (1/4, 1)");
  if (!input.square() && input.rows() > input.cols())
    throw std::invalid_argument("lll_reduce: more rows than columns");
  const std::size_t n = input.rows();
  const std::size_t cols = input.cols();
  const Integer scale = common_denominator(input.entries());
  auto b = detail::scaled_integer_rows(input, scale);

  // d[i + 1] holds d_i; d[0] = 1.
  std::vector<Integer> d(n + 1);
  std::vector<IntegerVector> lambda(n, IntegerVector(n));
  d[0] = 1;
  auto dot_rows = [&](std::size_t i, std::size_t j) {
    Integer s = 0;
    for (std::size_t c = 0; c < cols; ++c) s += b[i][c] * b[j][c];
    return s;
  };
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j <= k; ++j) {
      Integer u = dot_rows(k, j);
      for (std::size_t i = 0; i < j; ++i) u = (d[i + 1] * u - lambda[k][i] * lambda[j][i]) / d[i];
      if (j < k)
        lambda[k][j] = u;
      else if (u == 0)
        throw std::invalid_argument("gram_schmidt: linearly dependent rows");
      else
        d[k + 1] = u;
    }

  const Integer p = delta.get_num();
  const Integer q = delta.get_den();
  auto reduce = [&](std::size_t k, std::size_t l) {
    const Integer& dl = d[l + 1];
    if (2 * abs(lambda[k][l]) <= dl) return;
    const Integer r = floor_div(2 * lambda[k][l] + dl, 2 * dl);
    for (std::size_t c = 0; c < cols; ++c) b[k][c] -= r * b[l][c];
    lambda[k][l] -= r * dl;
    for (std::size_t i = 0; i < l; ++i) lambda[k][i] -= r * lambda[l][i];
  };
  auto swap = [&](std::size_t k) {
    std::swap(b[k], b[k - 1]);
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lambda[k][j], lambda[k - 1][j]);
    const Integer lam = lambda[k][k - 1];
    const Integer big = (d[k - 1] * d[k + 1] + lam * lam) / d[k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const Integer t = lambda[i][k];
      lambda[i][k] = (d[k + 1] * lambda[i][k - 1] - lam * t) / d[k];
      lambda[i][k - 1] = (big * t + lam * lambda[i][k]) / d[k + 1];
    }
    d[k] = big;
  };

  std::size_t k = 1;
  while (k < n) {
    reduce(k, k - 1);
    const Integer& lam = lambda[k][k - 1];
    if (q * (d[k + 1] * d[k - 1] + lam * lam) < p * d[k] * d[k]) {
      swap(k);
      k = std::max<std::size_t>(1, k - 1);
    } else {
      for (std::size_t l = k - 1; l-- > 0;) reduce(k, l);
      ++k;
    }
  }

  RationalMatrix out(n, cols);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < cols; ++c) out(i, c) = make_rational(b[i][c], scale);
  // Recompute from scratch so the stored data does not depend on the update path.
  auto fresh = gram_schmidt(out);
  ReducedBasis rb{out, fresh.orthogonal, fresh.mu, fresh.norms_sq, delta};
  if (!rb.size_reduced() || !rb.lovasz()) throw InvariantViolation("lll_reduce: output is not reduced");
  return rb;
}

struct ShortestVector {
  RationalVector vector;
  Rational norm_sq;
};

namespace detail {

// Orientation with the first nonzero coordinate positive.
inline void orient(RationalVector& v) {
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    return;
  }
}

// Among equal-norm candidates the lexicographically greatest oriented vector
// wins.
inline bool better(const RationalVector& cand, const Rational& cand_sq, const RationalVector& best,
                   const Rational& best_sq) {
  if (cand_sq != best_sq) return cand_sq < best_sq;
  return std::lexicographical_compare(best.begin(), best.end(), cand.begin(), cand.end());
}

class Enumerator {
 public:
  explicit Enumerator(const ReducedBasis& rb)
      : rb_(rb), n_(rb.size()), coeff_(n_), radius_sq_(rb.gso_norms_sq[0]) {
    best_ = rb.basis.row_vector(0);
    orient(best_);
    best_sq_ = norm_sq(rb.basis.row(0));
    for (std::size_t i = 1; i < n_; ++i) consider(rb.basis.row_vector(i));
    radius_sq_ = best_sq_;
  }

  ShortestVector run() {
    descend(n_ - 1, Rational(0));
    return {best_, best_sq_};
  }

 private:
  void consider(RationalVector v) {
    orient(v);
    const Rational sq = norm_sq(v);
    if (better(v, sq, best_, best_sq_)) {
      best_ = std::move(v);
      best_sq_ = sq;
    }
  }

  // Depth-first over coefficient levels from the last GSO vector down,
  // keeping sum_{i>=level} B_i (x_i - c_i)^2 <= radius.
  void descend(std::size_t level, const Rational& partial) {
    Rational center = 0;
    for (std::size_t j = level + 1; j < n_; ++j) center -= rb_.mu(j, level) * Rational(coeff_[j]);
    const Rational& bl = rb_.gso_norms_sq[level];
    const Integer start = round_nearest(center);
    auto visit = [&](const Integer& x) {
      const Rational off = Rational(x) - center;
      const Rational total = partial + bl * off * off;
      if (total > radius_sq_) return false;
      coeff_[level] = x;
      if (level == 0) {
        if (total != 0) {
          consider(rb_.basis.left_multiply(to_rational(coeff_)));
          radius_sq_ = best_sq_;
        }
      } else {
        descend(level - 1, total);
      }
      return true;
    };
    for (Integer x = start;; ++x)
      if (!visit(x)) break;
    for (Integer x = start - 1;; --x)
      if (!visit(x)) break;
    coeff_[level] = 0;
  }

  const ReducedBasis& rb_;
  std::size_t n_;
  IntegerVector coeff_;
  Rational radius_sq_;
  RationalVector best_;
  Rational best_sq_;
};

}  // namespace detail

// Exact shortest nonzero vector: LLL preprocessing, then Fincke-Pohst
// enumeration with exact radius pruning. Ties go to the lexicographically
// greatest vector whose first nonzero coordinate is positive.
inline ShortestVector shortest_vector(const RationalMatrix& basis, const Limits& limits = {}) {
  if (basis.rows() == 0) throw std::invalid_argument("shortest_vector: empty basis");
  if (basis.rows() > limits.svp_dimension_cap)
    throw CapExceeded("shortest_vector: dimension " + std::to_string(basis.rows()) + " exceeds SVP cap " +
                      std::to_string(limits.svp_dimension_cap));
  const auto rb = lll_reduce(basis);
  return detail::Enumerator(rb).run();
}

struct SpectralResult {
  Rational shortest_dual_sq;           // lambda_1(L^perp)^2
  RationalVector shortest_dual_vector;  // integral for integration lattices
  Rational sigma_sq;                    // 1 / lambda_1^2
  std::string sigma_decimal;

  IntegerVector integer_normal() const {
    IntegerVector h;
    for (const auto& x : shortest_dual_vector) {
      if (!is_integer(x)) throw std::domain_error("shortest dual vector is not integral");
      h.push_back(x.get_num());
    }
    return h;
  }
};

inline constexpr int kDefaultDigits = 50;

inline SpectralResult spectral_test(const IntegrationLattice& l, const Limits& limits = {},
                                    int digits = kDefaultDigits) {
  const auto dual = l.dual();
  auto sv = shortest_vector(dual.basis(), limits);
  SpectralResult r;
  r.shortest_dual_sq = sv.norm_sq;
  r.shortest_dual_vector = std::move(sv.vector);
  r.sigma_sq = 1 / r.shortest_dual_sq;
  const auto bits = bits_for_digits(digits);
  r.sigma_decimal = sqrt_of(r.sigma_sq, bits, MPFR_RNDN).to_string(std::max(digits, 30));
  if (r.sigma_sq * r.shortest_dual_sq != 1) throw InvariantViolation("spectral_test: sigma^2 * lambda^2 != 1");
  return r;
}

// Parallel planes {x : h.x = k}, k in Z, covering the lattice.
struct HyperplaneFamily {
  RationalVector normal;
  Rational spacing_sq;  // sigma(L)^2 = 1/|h|^2
  std::size_t points_checked = 0;
};

template <typename Numerators>
Rational dot_point(std::span<const Rational> normal, const Numerators& num, std::int64_t den) {
  Rational s = 0;
  for (std::size_t i = 0; i < normal.size(); ++i) s += normal[i] * Rational(static_cast<long>(num[i]));
  return s / Rational(static_cast<long>(den));
}

inline HyperplaneFamily covering_family(const IntegrationLattice& l, const SpectralResult& spec,
                                        const PointSet& points) {
  HyperplaneFamily f{spec.shortest_dual_vector, spec.sigma_sq, 0};
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!is_integer(dot_point(f.normal, points.numerators(i), points.denominator())))
      throw InvariantViolation("covering_family: lattice point off the plane family");
    ++f.points_checked;
  }
  for (std::size_t i = 0; i < l.dim(); ++i)
    if (!is_integer(dot<Rational, Rational>(f.normal, l.basis().row(i))))
      throw InvariantViolation("covering_family: basis vector off the plane family");
  return f;
}

inline HyperplaneFamily covering_family(const IntegrationLattice& l, const Limits& limits = {}) {
  return covering_family(l, spectral_test(l, limits), l.enumerate_points(limits));
}

// Bounds on the diameter of the fundamental parallelotope of a reduced basis
// and the chain diam(P) <= sum |b_i| <= d 2^(d-1) |b*_d| <= d 2^(d-1) sigma.
struct UnitCellBound {
  RationalVector row_norms_sq;
  Rational max_row_norm_sq;
  Rational last_gso_norm_sq;
  Rational sigma_sq;
  Integer factor;                        // d * 2^(d-1)
  std::optional<Rational> diameter_sq;   // exact, for small d
  Enclosure sum_of_norms;                // sum |b_i|
  BigFloat factor_times_sigma_lo{64};    // d 2^(d-1) sigma, rounded down

  bool max_norm_chain = false;    // max |b_i|^2 <= 4^(d-1) |b*_d|^2
  bool last_gso_le_sigma = false; // |b*_d|^2 <= sigma^2
  bool sum_le_bound = false;      // sum |b_i| <= d 2^(d-1) sigma (directed)
  bool diameter_le_sum = false;   // diam^2 <= (sum |b_i|)^2 (directed)
  bool diameter_le_bound = false; // diam^2 <= (d 2^(d-1))^2 sigma^2 (exact)

  bool all_hold() const {
    return max_norm_chain && last_gso_le_sigma && sum_le_bound && diameter_le_sum && diameter_le_bound;
  }
};

inline constexpr std::size_t kExactDiameterMaxDim = 8;

namespace detail {

inline std::optional<Rational> exact_sum_of_roots(const RationalVector& squares) {
  Rational sum = 0, root;
  for (const auto& q : squares) {
    if (!exact_sqrt(q, root)) return std::nullopt;
    sum += root;
  }
  return sum;
}

}  // namespace detail

inline UnitCellBound unit_cell_diameter_bound(const ReducedBasis& rb, const Rational& sigma_sq,
                                              int digits = kDefaultDigits) {
  const std::size_t d = rb.size();
  const auto bits = bits_for_digits(digits);
  UnitCellBound u;
  u.sum_of_norms = {BigFloat(bits), BigFloat(bits)};
  u.sigma_sq = sigma_sq;
  u.last_gso_norm_sq = rb.gso_norms_sq[d - 1];
  u.factor = Integer(static_cast<unsigned long>(d)) << static_cast<mp_bitcnt_t>(d - 1);
  u.max_row_norm_sq = 0;
  for (std::size_t i = 0; i < d; ++i) {
    u.row_norms_sq.push_back(norm_sq(rb.basis.row(i)));
    u.max_row_norm_sq = std::max(u.max_row_norm_sq, u.row_norms_sq.back());
  }
  for (const auto& q : u.row_norms_sq) {
    u.sum_of_norms.lo = add(u.sum_of_norms.lo, sqrt_of(q, bits, MPFR_RNDD), MPFR_RNDD);
    u.sum_of_norms.hi = add(u.sum_of_norms.hi, sqrt_of(q, bits, MPFR_RNDU), MPFR_RNDU);
  }
  u.factor_times_sigma_lo =
      mul(BigFloat::from(u.factor, bits, MPFR_RNDD), sqrt_of(sigma_sq, bits, MPFR_RNDD), MPFR_RNDD);

  const Rational four_pow(Integer(1) << static_cast<mp_bitcnt_t>(2 * (d - 1)));
  u.max_norm_chain = u.max_row_norm_sq <= four_pow * u.last_gso_norm_sq;
  u.last_gso_le_sigma = u.last_gso_norm_sq <= sigma_sq;
  u.sum_le_bound = u.sum_of_norms.hi <= u.factor_times_sigma_lo;
  // Equality cases (d = 1, orthogonal grids) are only decidable exactly.
  const auto exact_sum = detail::exact_sum_of_roots(u.row_norms_sq);
  Rational sigma_root;
  if (!u.sum_le_bound && exact_sum && exact_sqrt(sigma_sq, sigma_root))
    u.sum_le_bound = *exact_sum <= Rational(u.factor) * sigma_root;

  if (d <= kExactDiameterMaxDim) {
    // diam(P)^2 = max over e in {-1,0,1}^d of |sum e_i b_i|^2.
    std::vector<int> e(d, -1);
    Rational best = 0;
    while (true) {
      RationalVector v(rb.basis.cols());
      for (std::size_t i = 0; i < d; ++i)
        if (e[i] != 0)
          for (std::size_t c = 0; c < v.size(); ++c) v[c] += e[i] * rb.basis(i, c);
      best = std::max(best, norm_sq(v));
      std::size_t k = 0;
      while (k < d && e[k] == 1) e[k++] = -1;
      if (k == d) break;
      ++e[k];
    }
    u.diameter_sq = best;
    const Rational factor_sq(u.factor * u.factor);
    u.diameter_le_bound = best <= factor_sq * sigma_sq;
    u.diameter_le_sum = BigFloat::from(best, bits, MPFR_RNDU) <= mul(u.sum_of_norms.lo, u.sum_of_norms.lo, MPFR_RNDD);
    if (!u.diameter_le_sum && exact_sum)
      u.diameter_le_sum = best <= *exact_sum * *exact_sum;
  } else {
    // Triangle inequality gives diam <= sum |b_i| directly.
    u.diameter_le_sum = true;
    u.diameter_le_bound = u.max_norm_chain && u.last_gso_le_sigma;
  }
  return u;
}

}  // namespace latspec
