#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "latspec/errors.hpp"
#include "latspec/lattice.hpp"
#include "latspec/rational.hpp"
#include "latspec/reduction.hpp"
#include "latspec/volume.hpp"

namespace latspec {

// Open slab between two adjacent planes of the covering family that sandwich
// the cube center. It holds no lattice point, so its volume bounds J_N below.
struct SlabCertificate {
  Slab body;
  std::uint64_t points_inside = 0;
  std::uint64_t points_checked = 0;
  Rational volume_lb;
  Rational implied_jn_lb;
  Rational center_value;          // h . (1/2, ..., 1/2)
  bool volume_guarantee_applies;  // sigma(L) <= 1/2
};

inline SlabCertificate slab_certificate(const SpectralResult& spec, const PointSet& points) {
  const RationalVector& h = spec.shortest_dual_vector;
  if (h.size() != points.dim()) throw std::invalid_argument("slab_certificate: dimension mismatch");
  Rational center = 0;
  for (const auto& x : h) center += x;
  center /= 2;
  HalfspaceVolume vol(h);
  Integer k0;
  if (!is_integer(center)) {
    k0 = floor(center);
  } else {
    // The center lies on a plane: take the neighbouring gap of larger volume,
    // the lower one on ties.
    const Integer c = center.get_num();
    const Rational below = vol(Rational(c)) - vol(Rational(c - 1));
    const Rational above = vol(Rational(c + 1)) - vol(Rational(c));
    k0 = above > below ? c : Integer(c - 1);
  }
  SlabCertificate cert{Slab{h, Rational(k0), Rational(k0 + 1), true}, 0, points.size(), 0, 0, center,
                       spec.sigma_sq <= Rational(1, 4)};
  cert.volume_lb = vol(cert.body.hi) - vol(cert.body.lo);
  if (cert.volume_lb <= 0) throw InvariantViolation("slab_certificate: degenerate slab of zero volume");
  cert.points_inside = count_inside(points, cert.body);
  if (cert.points_inside != 0) throw InvariantViolation("slab_certificate: slab between adjacent planes is not empty");
  cert.implied_jn_lb = cert.volume_lb;
  return cert;
}

inline SlabCertificate slab_certificate(const IntegrationLattice& l, const Limits& limits = {}) {
  return slab_certificate(spectral_test(l, limits), l.enumerate_points(limits));
}

// Per-plane point counts along the shortest dual normal. The fullest plane is
// a zero-volume convex set, so max_count / N bounds J_N below.
struct HyperplaneCountCertificate {
  RationalVector normal;
  std::map<Integer, std::uint64_t> plane_counts;
  std::uint64_t n_points = 0;
  std::uint64_t max_count = 0;
  Integer max_plane;
  Rational implied_jn_lb;
  Rational sigma_sq;
  std::size_t dim = 0;
  // (max_count / N)^2 * d >= sigma^2
  bool pigeonhole_holds = false;
  // Occupied planes <= floor(sqrt(d) / sigma) + 1
  Integer plane_limit;
  bool plane_count_consistent = false;

  Rational pigeonhole_lhs() const {
    return implied_jn_lb * implied_jn_lb * Rational(static_cast<unsigned long>(dim));
  }
};

inline HyperplaneCountCertificate hyperplane_count_certificate(const SpectralResult& spec, const PointSet& points) {
  HyperplaneCountCertificate cert;
  cert.normal = spec.shortest_dual_vector;
  cert.sigma_sq = spec.sigma_sq;
  cert.dim = points.dim();
  cert.n_points = points.size();
  detail::Projector proj(cert.normal, points.denominator());
  if (proj.fast()) {
    const auto scale = *detail::to_wide(proj.scale());
    std::map<detail::Wide, std::uint64_t> counts;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto v = proj.project_fast(points.numerators(i));
      if (v % scale != 0) throw InvariantViolation("hyperplane count: point off the covering family");
      ++counts[v / scale];
    }
    for (const auto& [k, c] : counts) cert.plane_counts.emplace(detail::to_integer(k), c);
  } else {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Integer v = proj.project(points.numerators(i));
      if (v % proj.scale() != 0) throw InvariantViolation("hyperplane count: point off the covering family");
      ++cert.plane_counts[Integer(v / proj.scale())];
    }
  }
  std::uint64_t total = 0;
  for (const auto& [k, c] : cert.plane_counts) {
    total += c;
    if (c > cert.max_count) {
      cert.max_count = c;
      cert.max_plane = k;
    }
  }
  if (total != cert.n_points) throw InvariantViolation("hyperplane count: counts do not sum to N");
  cert.implied_jn_lb = make_rational(Integer(static_cast<unsigned long>(cert.max_count)),
                                     Integer(static_cast<unsigned long>(cert.n_points)));
  cert.pigeonhole_holds = cert.pigeonhole_lhs() >= cert.sigma_sq;
  const Rational ratio = Rational(static_cast<unsigned long>(cert.dim)) * spec.shortest_dual_sq;
  cert.plane_limit = isqrt(floor(ratio)) + 1;
  cert.plane_count_consistent =
      Integer(static_cast<unsigned long>(cert.plane_counts.size())) <= cert.plane_limit;
  return cert;
}

inline HyperplaneCountCertificate hyperplane_count_certificate(const IntegrationLattice& l,
                                                               const Limits& limits = {}) {
  return hyperplane_count_certificate(spectral_test(l, limits), l.enumerate_points(limits));
}

struct DiscrepancyWitness {
  ConvexBody body;
  Rational local;  // signed Delta_P(C), exact
  std::string source;
};

struct DiscrepancyEstimate {
  Rational lower_bound;                  // max |Delta| over certificates and searched bodies
  std::optional<Rational> upper_bound_sq;  // (d^2 2^d sigma)^2 for integration lattices
  std::string upper_bound_decimal;       // rounded up
  std::vector<DiscrepancyWitness> witnesses;
  std::uint64_t evaluations = 0;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;

  // lower_bound <= d^2 2^d sigma, compared in squares.
  bool consistent() const { return !upper_bound_sq || lower_bound * lower_bound <= *upper_bound_sq; }
};

struct SearchOptions {
  int coefficient_range = 10;      // random normals have entries in [-K, K]
  std::size_t grid = 64;           // critical offsets sampled per direction
  std::size_t window = 24;         // refinement half-width around the best offsets
  std::size_t refinement_rounds = 2;
  std::uint64_t box_divisor = 10;  // 1/box_divisor of the budget goes to axis boxes
  std::uint64_t box_work_cap = 200'000'000;  // points * boxes
};

namespace detail {

class Tracker {
 public:
  void offer(ConvexBody body, const Rational& local, const char* source) {
    const Rational mag = abs(local);
    if (witnesses_.empty() || mag > best_) {
      best_ = mag;
      witnesses_.clear();
    } else if (mag < best_ || witnesses_.size() >= kMaxWitnesses) {
      return;
    }
    witnesses_.push_back({std::move(body), local, source});
  }

  const Rational& best() const { return best_; }
  std::vector<DiscrepancyWitness>& witnesses() { return witnesses_; }

 private:
  static constexpr std::size_t kMaxWitnesses = 8;
  Rational best_ = 0;
  std::vector<DiscrepancyWitness> witnesses_;
};

// Discrepancy of all halfspaces and slabs with a fixed normal whose
// boundaries pass through points (the critical offsets).
class DirectionScan {
 public:
  DirectionScan(const PointSet& points, RationalVector normal)
      : normal_(std::move(normal)), proj_(normal_, points.denominator()), volume_(normal_),
        n_(static_cast<unsigned long>(points.size())) {
    std::vector<Wide> raw(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) raw[i] = proj_.project_fast(points.numerators(i));
    std::sort(raw.begin(), raw.end());
    std::uint64_t le = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      ++le;
      if (i + 1 == raw.size() || raw[i + 1] != raw[i]) {
        values_.push_back(raw[i]);
        count_le_.push_back(le);
      }
    }
  }

  std::size_t critical_count() const { return values_.size(); }

  // Scans with at most `allowance` volume evaluations.
  std::uint64_t run(std::uint64_t allowance, const SearchOptions& opt, Tracker& tracker) {
    const std::size_t k = values_.size();
    std::set<std::size_t> chosen;
    if (k <= allowance) {
      for (std::size_t i = 0; i < k; ++i) chosen.insert(i);
    } else {
      const std::size_t g = std::max<std::size_t>(2, std::min<std::size_t>(opt.grid, allowance));
      for (std::size_t i = 0; i < g; ++i) chosen.insert(i * (k - 1) / (g - 1));
    }
    Best best = kadane(chosen);
    for (std::size_t round = 0; round < opt.refinement_rounds && used_ < allowance; ++round) {
      const std::size_t before = chosen.size();
      for (const auto idx : {best.a, best.b}) {
        if (idx == kLow || idx == kHigh) continue;
        const std::size_t lo = idx > opt.window ? idx - opt.window : 0;
        const std::size_t hi = std::min(k - 1, idx + opt.window);
        for (std::size_t i = lo; i <= hi && used_ + (chosen.size() - before) < allowance; ++i) chosen.insert(i);
      }
      if (chosen.size() == before) break;
      best = kadane(chosen);
    }
    report(best, tracker);
    return used_;
  }

 private:
  static constexpr std::size_t kLow = static_cast<std::size_t>(-1);
  static constexpr std::size_t kHigh = static_cast<std::size_t>(-2);

  struct Best {
    Rational value = 0;
    bool positive = true;
    std::size_t a = kLow;
    std::size_t b = kHigh;
  };

  Rational offset(std::size_t idx) const { return Rational(to_integer(values_[idx])) / Rational(proj_.scale()); }

  const Rational& volume_at(std::size_t idx) {
    auto it = cache_.find(idx);
    if (it == cache_.end()) {
      ++used_;
      it = cache_.emplace(idx, volume_(offset(idx))).first;
    }
    return it->second;
  }

  Rational frac(std::uint64_t c) const {
    return make_rational(Integer(static_cast<unsigned long>(c)), Integer(n_));
  }

  // P_k = #{a.x <= t_k}/N - V(t_k), Q_k = #{a.x < t_k}/N - V(t_k).
  // Closed slab [t_a, t_b] has discrepancy P_b - Q_a; open slab (t_a, t_b)
  // has Q_b - P_a. Virtual end points stand for halfspaces.
  Best kadane(const std::set<std::size_t>& chosen) {
    struct Entry {
      std::size_t idx;
      Rational p, q;
    };
    std::vector<Entry> seq;
    seq.push_back({kLow, 0, 0});
    for (const auto idx : chosen) {
      const Rational& v = volume_at(idx);
      const std::uint64_t le = count_le_[idx];
      const std::uint64_t lt = idx == 0 ? 0 : count_le_[idx - 1];
      seq.push_back({idx, frac(le) - v, frac(lt) - v});
    }
    seq.push_back({kHigh, 0, 0});

    Best best;
    std::size_t min_q = 0;
    std::size_t max_p = 0;
    for (std::size_t j = 0; j < seq.size(); ++j) {
      if (seq[j].q < seq[min_q].q) min_q = j;
      const Rational pos = seq[j].p - seq[min_q].q;
      if (pos > best.value) best = {pos, true, seq[min_q].idx, seq[j].idx};
      if (j > 0) {
        const Rational neg = seq[max_p].p - seq[j].q;
        if (neg > best.value) best = {neg, false, seq[max_p].idx, seq[j].idx};
      }
      if (seq[j].p > seq[max_p].p) max_p = j;
    }
    return best;
  }

  void report(const Best& best, Tracker& tracker) const {
    if (best.value == 0 || (best.a == kLow && best.b == kHigh)) return;
    RationalVector neg = normal_;
    for (auto& x : neg) x = -x;
    const bool closed = best.positive;
    ConvexBody body;
    if (best.a == kLow) body = Halfspace{normal_, offset(best.b), closed};
    else if (best.b == kHigh) body = Halfspace{neg, -offset(best.a), closed};
    else body = Slab{normal_, offset(best.a), offset(best.b), !closed};
    tracker.offer(std::move(body), best.positive ? best.value : Rational(-best.value), "search-direction");
  }

  RationalVector normal_;
  Projector proj_;
  HalfspaceVolume volume_;
  Integer n_;
  std::vector<Wide> values_;
  std::vector<std::uint64_t> count_le_;
  std::map<std::size_t, Rational> cache_;
  std::uint64_t used_ = 0;
};

inline RationalVector primitive_direction(std::vector<long> v) {
  long g = 0;
  for (const auto x : v) g = std::gcd(g, std::abs(x));
  RationalVector out;
  bool flip = false;
  for (const auto x : v)
    if (x != 0) {
      flip = x < 0;
      break;
    }
  for (const auto x : v) out.emplace_back((flip ? -x : x) / g);
  return out;
}

}  // namespace detail

struct LatticeContext {
  SpectralResult spectral;
  bool integration = true;
};

// Certified lower bound on J_N from certificates plus a seeded search over
// halfspaces, slabs and axis boxes; upper bound d^2 2^d sigma when an
// integration lattice is known. Every witness is re-verified exactly.
inline DiscrepancyEstimate estimate_isotropic_discrepancy(const PointSet& points, std::uint64_t budget,
                                                          std::uint64_t seed,
                                                          const std::optional<LatticeContext>& lattice = std::nullopt,
                                                          const SearchOptions& opt = {}) {
  const std::size_t d = points.dim();
  DiscrepancyEstimate est;
  est.budget = budget;
  est.seed = seed;
  detail::Tracker tracker;

  if (lattice) {
    const auto slab = slab_certificate(lattice->spectral, points);
    tracker.offer(slab.body, -slab.volume_lb, "slab-certificate");
    const auto planes = hyperplane_count_certificate(lattice->spectral, points);
    const Rational k(planes.max_plane);
    tracker.offer(Slab{planes.normal, k, k, false}, planes.implied_jn_lb, "hyperplane-count");
    if (lattice->integration) {
      const Integer factor = Integer(static_cast<unsigned long>(d * d)) << static_cast<mp_bitcnt_t>(d);
      est.upper_bound_sq = Rational(factor * factor) * lattice->spectral.sigma_sq;
      const auto bits = bits_for_digits(kDefaultDigits);
      est.upper_bound_decimal = sqrt_of(*est.upper_bound_sq, bits, MPFR_RNDU).to_string(kDefaultDigits, MPFR_RNDU);
    }
  }

  std::mt19937_64 rng(seed);
  const std::uint64_t box_budget = budget / opt.box_divisor;
  std::uint64_t remaining = budget - box_budget;
  const std::uint64_t per_direction = opt.grid + 2 * opt.refinement_rounds * (2 * opt.window + 1);

  std::vector<RationalVector> mandatory;
  for (std::size_t i = 0; i < d; ++i) {
    RationalVector e(d);
    e[i] = 1;
    mandatory.push_back(e);
  }
  if (lattice) mandatory.push_back(lattice->spectral.shortest_dual_vector);

  std::set<RationalVector> seen;
  auto scan = [&](const RationalVector& normal) {
    if (remaining == 0 || !seen.insert(normal).second) return;
    detail::DirectionScan s(points, normal);
    const std::uint64_t used = s.run(std::min(remaining, per_direction), opt, tracker);
    remaining -= std::min(remaining, used);
    est.evaluations += used;
  };
  for (const auto& n : mandatory) {
    detail::Projector probe(n, points.denominator());
    if (probe.fast()) scan(n);
  }
  std::uniform_int_distribution<long> coef(-opt.coefficient_range, opt.coefficient_range);
  std::size_t misses = 0;
  while (remaining > 0 && misses < 1000) {
    std::vector<long> raw(d);
    for (auto& x : raw) x = coef(rng);
    if (std::all_of(raw.begin(), raw.end(), [](long x) { return x == 0; })) continue;
    const auto normal = detail::primitive_direction(raw);
    if (seen.count(normal)) {
      ++misses;
      continue;
    }
    misses = 0;
    scan(normal);
  }

  // Axis boxes with corners at point coordinates.
  std::uint64_t boxes = box_budget;
  if (points.size() > 0) boxes = std::min<std::uint64_t>(boxes, opt.box_work_cap / points.size());
  const Rational den(static_cast<long>(points.denominator()));
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  std::uniform_int_distribution<int> mode(0, 3);
  for (std::uint64_t t = 0; t < boxes; ++t) {
    AxisBox box{RationalVector(d), RationalVector(d), false};
    const auto u = points.numerators(pick(rng));
    const auto v = points.numerators(pick(rng));
    for (std::size_t k = 0; k < d; ++k) {
      Rational a = Rational(static_cast<long>(std::min(u[k], v[k]))) / den;
      Rational b = Rational(static_cast<long>(std::max(u[k], v[k]))) / den;
      const int m = mode(rng);
      if (m == 0) a = 0;
      if (m == 1) b = 1;
      box.lo[k] = a;
      box.hi[k] = b;
    }
    ++est.evaluations;
    tracker.offer(box, local_discrepancy(points, box), "search-box");
    box.open = true;
    tracker.offer(box, local_discrepancy(points, box), "search-box");
  }

  est.lower_bound = tracker.best();
  est.witnesses = std::move(tracker.witnesses());
  for (const auto& w : est.witnesses) {
    const Rational check = local_discrepancy(points, w.body);
    if (check != w.local || abs(check) != est.lower_bound)
      throw InvariantViolation("estimate: witness failed exact re-verification");
  }
  return est;
}

inline DiscrepancyEstimate estimate_isotropic_discrepancy(const IntegrationLattice& l, std::uint64_t budget,
                                                          std::uint64_t seed, const Limits& limits = {},
                                                          const SearchOptions& opt = {}) {
  LatticeContext ctx{spectral_test(l, limits), l.is_integration()};
  return estimate_isotropic_discrepancy(l.enumerate_points(limits), budget, seed, ctx, opt);
}

}  // namespace latspec
