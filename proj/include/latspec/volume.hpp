#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "latspec/lattice.hpp"
#include "latspec/rational.hpp"

namespace latspec {

// Volume of {x in [0,1]^d : a.x <= t} as a function of t for a fixed normal a.
//
// Coordinates with a_i = 0 integrate out; a negative a_i is turned positive by
// x_i -> 1 - x_i, which shifts the offset. For a strictly positive normal in
// dimension m the volume is
//
//   (1 / (m! prod a_i)) * sum_{v in {0,1}^m} (-1)^|v| max(0, t - a.v)^m.
class HalfspaceVolume {
 public:
  explicit HalfspaceVolume(std::span<const Rational> normal) {
    for (const auto& a : normal) {
      if (a == 0) continue;
      if (a < 0) shift_ += a;
      coeff_.push_back(abs(a));
    }
    if (coeff_.empty()) throw std::invalid_argument("halfspace volume: zero normal");
    const std::size_t m = coeff_.size();
    Rational denom = 1;
    for (std::size_t i = 1; i <= m; ++i) denom *= static_cast<unsigned long>(i);
    for (const auto& a : coeff_) {
      denom *= a;
      total_ += a;
    }
    scale_ = 1 / denom;
    vertices_.reserve(std::size_t{1} << m);
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      Rational w = 0;
      int parity = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (mask >> i & 1) {
          w += coeff_[i];
          parity ^= 1;
        }
      vertices_.push_back({std::move(w), parity ? -1 : 1});
    }
    std::sort(vertices_.begin(), vertices_.end(), [](const Vertex& a, const Vertex& b) { return a.weight < b.weight; });
  }

  Rational operator()(const Rational& offset) const {
    const Rational t = offset - shift_;
    if (t <= 0) return 0;
    if (t >= total_) return 1;
    const auto m = static_cast<unsigned long>(coeff_.size());
    Rational sum = 0;
    for (const auto& v : vertices_) {
      if (v.weight >= t) break;
      const Rational r = t - v.weight;
      Integer num, den;
      mpz_pow_ui(num.get_mpz_t(), r.get_num_mpz_t(), m);
      mpz_pow_ui(den.get_mpz_t(), r.get_den_mpz_t(), m);
      const Rational p = make_rational(num, den);
      if (v.sign > 0) sum += p;
      else sum -= p;
    }
    return sum * scale_;
  }

  // Range of a.x over the cube.
  Rational min_value() const { return shift_; }
  Rational max_value() const { return shift_ + total_; }

 private:
  struct Vertex {
    Rational weight;
    int sign;
  };

  RationalVector coeff_;
  Rational shift_ = 0;
  Rational total_ = 0;
  Rational scale_;
  std::vector<Vertex> vertices_;
};

inline Rational halfspace_cube_volume(std::span<const Rational> normal, const Rational& offset) {
  return HalfspaceVolume(normal)(offset);
}

inline Rational halfspace_cube_volume(const RationalVector& normal, const Rational& offset) {
  return halfspace_cube_volume(std::span<const Rational>(normal), offset);
}

// Convex bodies over which local discrepancy is evaluated. Volumes always
// refer to the intersection with the unit cube.
struct Halfspace {
  RationalVector normal;
  Rational offset;
  bool closed = true;  // a.x <= offset, else a.x < offset
};

struct Slab {
  RationalVector normal;
  Rational lo;
  Rational hi;
  bool open = true;  // lo < a.x < hi, else lo <= a.x <= hi
};

struct AxisBox {
  RationalVector lo;
  RationalVector hi;
  bool open = false;  // lo < x < hi componentwise, else closed
};

using ConvexBody = std::variant<Halfspace, Slab, AxisBox>;

inline std::size_t body_dim(const ConvexBody& c) {
  return std::visit(
      [](const auto& b) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(b)>, AxisBox>) return b.lo.size();
        else return b.normal.size();
      },
      c);
}

inline void validate(const ConvexBody& c) {
  auto nonzero = [](const RationalVector& v) {
    return std::any_of(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
  };
  if (const auto* h = std::get_if<Halfspace>(&c)) {
    if (!nonzero(h->normal)) throw std::invalid_argument("halfspace: zero normal");
  } else if (const auto* s = std::get_if<Slab>(&c)) {
    if (!nonzero(s->normal)) throw std::invalid_argument("slab: zero normal");
    // A closed slab with lo == hi is a hyperplane section (zero volume).
    if (s->open ? !(s->lo < s->hi) : s->lo > s->hi) throw std::invalid_argument("slab: lo must be below hi");
  } else {
    const auto& b = std::get<AxisBox>(c);
    if (b.lo.size() != b.hi.size() || b.lo.empty()) throw std::invalid_argument("box: dimension mismatch");
    for (std::size_t i = 0; i < b.lo.size(); ++i)
      if (b.lo[i] > b.hi[i] || b.lo[i] < 0 || b.hi[i] > 1)
        throw std::invalid_argument("box: corners must satisfy 0 <= lo <= hi <= 1");
  }
}

inline Rational body_volume(const ConvexBody& c) {
  validate(c);
  if (const auto* h = std::get_if<Halfspace>(&c)) return halfspace_cube_volume(h->normal, h->offset);
  if (const auto* s = std::get_if<Slab>(&c)) {
    HalfspaceVolume v(s->normal);
    return v(s->hi) - v(s->lo);
  }
  const auto& b = std::get<AxisBox>(c);
  Rational vol = 1;
  for (std::size_t i = 0; i < b.lo.size(); ++i) vol *= b.hi[i] - b.lo[i];
  return vol;
}

namespace detail {

using Wide = __int128;

inline Integer to_integer(Wide v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<unsigned long>(u >> 64));
  Integer lo(static_cast<unsigned long>(u & ~std::uint64_t{0}));
  Integer r = (hi << 64) + lo;
  return neg ? Integer(-r) : r;
}

inline std::optional<Wide> to_wide(const Integer& z) {
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > 120) return std::nullopt;
  const bool neg = z < 0;
  Integer a = abs(z);
  const Integer lo_part = a & Integer(~0ul);
  const Integer hi_part = a >> 64;
  Wide v = (static_cast<Wide>(hi_part.get_ui()) << 64) | static_cast<Wide>(lo_part.get_ui());
  return neg ? -v : v;
}

// Projection x -> a.x for points stored as numerators over a common
// denominator, reduced to integer comparisons: a.x = (A . num) / scale with A
// integral.
class Projector {
 public:
  Projector(std::span<const Rational> normal, std::int64_t point_den) {
    const Integer s = common_denominator(normal);
    Integer bound = 0;
    for (const auto& a : normal) {
      Integer ai = Rational(a * s).get_num();
      bound += abs(ai);
      big_.push_back(ai);
    }
    scale_ = s * Integer(static_cast<long>(point_den));
    bound *= Integer(static_cast<long>(point_den));
    fast_ = mpz_sizeinbase(bound.get_mpz_t(), 2) < 100;
    for (const auto& a : big_)
      if (!a.fits_slong_p()) fast_ = false;
    if (fast_)
      for (const auto& a : big_) small_.push_back(a.get_si());
    bound_ = bound + 1;
  }

  bool fast() const { return fast_; }
  const Integer& scale() const { return scale_; }

  Wide project_fast(std::span<const std::int64_t> num) const {
    Wide s = 0;
    for (std::size_t i = 0; i < small_.size(); ++i) s += static_cast<Wide>(small_[i]) * num[i];
    return s;
  }

  Integer project(std::span<const std::int64_t> num) const {
    if (fast_) return to_integer(project_fast(num));
    Integer s = 0;
    for (std::size_t i = 0; i < big_.size(); ++i) s += big_[i] * Integer(static_cast<long>(num[i]));
    return s;
  }

  // Integer thresholds: a.x <= t iff proj <= floor(t * scale);
  // a.x < t iff proj <= ceil(t * scale) - 1. Clamped to the attainable range.
  Integer le_threshold(const Rational& t) const { return clamp(floor(t * Rational(scale_))); }
  Integer lt_threshold(const Rational& t) const { return clamp(ceil(t * Rational(scale_)) - 1); }
  // a.x >= t iff proj >= ceil(t * scale); a.x > t iff proj >= floor(t * scale) + 1.
  Integer ge_threshold(const Rational& t) const { return clamp(ceil(t * Rational(scale_))); }
  Integer gt_threshold(const Rational& t) const { return clamp(floor(t * Rational(scale_)) + 1); }
  Integer lowest() const { return -bound_; }

 private:
  Integer clamp(const Integer& v) const {
    if (v > bound_) return bound_;
    if (v < -bound_) return -bound_;
    return v;
  }

  IntegerVector big_;
  std::vector<std::int64_t> small_;
  Integer scale_;
  Integer bound_;
  bool fast_ = false;
};

// Counts points with lo_thr <= proj <= hi_thr.
inline std::uint64_t count_between(const PointSet& p, const Projector& proj, const Integer& lo_thr,
                                   const Integer& hi_thr) {
  std::uint64_t count = 0;
  if (proj.fast()) {
    const Wide lo = *to_wide(lo_thr), hi = *to_wide(hi_thr);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Wide v = proj.project_fast(p.numerators(i));
      if (v >= lo && v <= hi) ++count;
    }
  } else {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Integer v = proj.project(p.numerators(i));
      if (v >= lo_thr && v <= hi_thr) ++count;
    }
  }
  return count;
}

}  // namespace detail

// Number of points of p inside the body, exact.
inline std::uint64_t count_inside(const PointSet& p, const ConvexBody& c) {
  validate(c);
  if (body_dim(c) != p.dim()) throw std::invalid_argument("count_inside: dimension mismatch");
  if (const auto* h = std::get_if<Halfspace>(&c)) {
    detail::Projector proj(h->normal, p.denominator());
    const Integer hi = h->closed ? proj.le_threshold(h->offset) : proj.lt_threshold(h->offset);
    return detail::count_between(p, proj, proj.lowest(), hi);
  }
  if (const auto* s = std::get_if<Slab>(&c)) {
    detail::Projector proj(s->normal, p.denominator());
    const Integer lo = s->open ? proj.gt_threshold(s->lo) : proj.ge_threshold(s->lo);
    const Integer hi = s->open ? proj.lt_threshold(s->hi) : proj.le_threshold(s->hi);
    return detail::count_between(p, proj, lo, hi);
  }
  const auto& b = std::get<AxisBox>(c);
  const Rational den(static_cast<long>(p.denominator()));
  std::vector<std::int64_t> lo(p.dim()), hi(p.dim());
  for (std::size_t k = 0; k < p.dim(); ++k) {
    const Rational l = b.lo[k] * den, h = b.hi[k] * den;
    lo[k] = (b.open ? floor(l) + 1 : ceil(l)).get_si();
    hi[k] = (b.open ? ceil(h) - 1 : floor(h)).get_si();
  }
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto num = p.numerators(i);
    bool in = true;
    for (std::size_t k = 0; k < p.dim() && in; ++k) in = num[k] >= lo[k] && num[k] <= hi[k];
    if (in) ++count;
  }
  return count;
}

// Delta_P(C) = #{n : x_n in C} / N - volume(C).
inline Rational local_discrepancy(const PointSet& p, const ConvexBody& c) {
  if (p.size() == 0) throw std::invalid_argument("local_discrepancy: empty point set");
  const auto inside = count_inside(p, c);
  return make_rational(Integer(static_cast<unsigned long>(inside)), Integer(static_cast<unsigned long>(p.size()))) -
         body_volume(c);
}

}  // namespace latspec
