#include <gtest/gtest.h>

#include <random>

#include "latspec/constructions.hpp"
#include "latspec/discrepancy.hpp"
#include "oracles.hpp"

using namespace latspec;

namespace {

IntegrationLattice rank1_5_13() { return IntegrationLattice::from_rank1(Integer(5), {Integer(1), Integer(3)}); }

}  // namespace

TEST(SlabCertificate, ScaledGrid) {
  for (unsigned long m = 2; m <= 7; ++m)
    for (std::size_t d = 1; d <= 3; ++d) {
      const auto c = slab_certificate(scaled_integer_lattice(m, d));
      EXPECT_EQ(c.volume_lb, make_rational(1, m));
      EXPECT_EQ(c.points_inside, 0u);
      EXPECT_TRUE(c.volume_guarantee_applies);
    }
}

TEST(SlabCertificate, Rank1Example) {
  const auto c = slab_certificate(rank1_5_13());
  EXPECT_EQ(c.body.normal, (RationalVector{2, 1}));
  EXPECT_EQ(c.body.lo, 1);
  EXPECT_EQ(c.body.hi, 2);
  EXPECT_EQ(c.points_inside, 0u);
  EXPECT_EQ(c.points_checked, 5u);
  const RationalVector h{2, 1};
  EXPECT_EQ(c.volume_lb, halfspace_cube_volume(h, Rational(2)) - halfspace_cube_volume(h, Rational(1)));
  EXPECT_EQ(c.volume_lb, make_rational(1, 2));
}

TEST(SlabCertificate, SinglePoint) {
  for (std::size_t d = 1; d <= 3; ++d) {
    const auto c = slab_certificate(scaled_integer_lattice(1, d));
    EXPECT_LE(c.volume_lb, 1);
    EXPECT_EQ(c.volume_lb, 1);
    EXPECT_FALSE(c.volume_guarantee_applies);
  }
}

TEST(SlabCertificate, BadLattice) {
  for (unsigned long m = 1; m <= 5; ++m)
    for (std::size_t d = 2; d <= 4; ++d) {
      const auto c = slab_certificate(bad_lattice(m, d));
      EXPECT_GE(c.volume_lb, make_rational(1, 2));
      EXPECT_EQ(c.points_inside, 0u);
    }
}

TEST(HyperplaneCount, Examples) {
  for (std::size_t d = 2; d <= 4; ++d) {
    const auto bad = hyperplane_count_certificate(bad_lattice(3, d));
    ASSERT_EQ(bad.plane_counts.size(), 2u);
    for (const auto& [k, c] : bad.plane_counts) EXPECT_EQ(c * 2, bad.n_points);
    EXPECT_EQ(bad.implied_jn_lb, make_rational(1, 2));
  }
  for (unsigned long m = 2; m <= 5; ++m) {
    const auto g = hyperplane_count_certificate(scaled_integer_lattice(m, 3));
    EXPECT_EQ(g.plane_counts.size(), m);
    for (const auto& [k, c] : g.plane_counts) EXPECT_EQ(c, m * m);
    EXPECT_EQ(g.implied_jn_lb, make_rational(1, m));
  }
  const auto r = hyperplane_count_certificate(rank1_5_13());
  std::uint64_t total = 0;
  for (const auto& [k, c] : r.plane_counts) {
    EXPECT_TRUE(k >= 0 && k <= 2);
    total += c;
  }
  EXPECT_EQ(total, 5u);
  EXPECT_GE(r.max_count, 2u);
  EXPECT_TRUE(r.pigeonhole_holds);
}

TEST(HyperplaneCount, PigeonholeOnRandomLattices) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 200; ++t) {
    const auto l = oracle::random_integration_lattice(rng, 1 + t % 4);
    const auto c = hyperplane_count_certificate(l);
    EXPECT_TRUE(c.pigeonhole_holds);
    EXPECT_TRUE(c.plane_count_consistent);
  }
}

TEST(Estimate, BadLattice) {
  for (std::size_t d = 2; d <= 4; ++d) {
    const auto e = estimate_isotropic_discrepancy(bad_lattice(3, d), 3000, 0);
    EXPECT_GE(e.lower_bound, make_rational(1, 2));
    ASSERT_TRUE(e.upper_bound_sq.has_value());
    const Integer f = Integer(static_cast<unsigned long>(d * d)) << static_cast<mp_bitcnt_t>(d);
    EXPECT_EQ(*e.upper_bound_sq, Rational(f * f) / 4);
    EXPECT_TRUE(e.consistent());
  }
}

TEST(Estimate, HalfGrid) {
  const auto l = scaled_integer_lattice(2, 2);
  const auto e = estimate_isotropic_discrepancy(l, 2000, 0);
  // lower_bound >= sigma / sqrt(2), compared in squares.
  EXPECT_GE(e.lower_bound * e.lower_bound * 2, spectral_test(l).sigma_sq);
}

TEST(Estimate, SinglePoint) {
  for (std::size_t d = 1; d <= 3; ++d) {
    const PointSet p(d, 1, std::vector<std::int64_t>(d, 0));
    const auto e = estimate_isotropic_discrepancy(p, 1000, 0);
    EXPECT_GE(e.lower_bound, make_rational(99, 100));
    EXPECT_LE(e.lower_bound, 1);
    EXPECT_FALSE(e.upper_bound_sq.has_value());
  }
}

TEST(Estimate, DeterministicForSeed) {
  const auto l = fibonacci_lattice(12);
  const auto a = estimate_isotropic_discrepancy(l, 4000, 9);
  const auto b = estimate_isotropic_discrepancy(l, 4000, 9);
  EXPECT_EQ(a.lower_bound, b.lower_bound);
  EXPECT_EQ(a.evaluations, b.evaluations);
  ASSERT_EQ(a.witnesses.size(), b.witnesses.size());
  for (std::size_t i = 0; i < a.witnesses.size(); ++i) EXPECT_EQ(a.witnesses[i].local, b.witnesses[i].local);
}

TEST(Estimate, WitnessesVerifyAndBudgetRespected) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 40; ++t) {
    const auto l = oracle::random_integration_lattice(rng, 1 + t % 4);
    const std::uint64_t budget = 500 + 100 * static_cast<std::uint64_t>(t);
    const auto e = estimate_isotropic_discrepancy(l, budget, static_cast<std::uint64_t>(t));
    EXPECT_LE(e.evaluations, budget);
    EXPECT_TRUE(e.consistent());
    const auto pts = l.enumerate_points();
    for (const auto& w : e.witnesses) EXPECT_EQ(abs(local_discrepancy(pts, w.body)), e.lower_bound);
    // Certificates are always included.
    EXPECT_GE(e.lower_bound, slab_certificate(l).volume_lb);
    EXPECT_GE(e.lower_bound, hyperplane_count_certificate(l).implied_jn_lb);
  }
}

TEST(Estimate, MoreBudgetNeverHurts) {
  const auto l = fibonacci_lattice(14);
  EXPECT_GE(estimate_isotropic_discrepancy(l, 20000, 1).lower_bound,
            slab_certificate(l).volume_lb);
}

TEST(Estimate, RelaxedLatticeHasNoUpperBound) {
  const auto l = IntegrationLattice::from_basis_relaxed(RationalMatrix{{2, 0}, {make_rational(1, 3), make_rational(1, 7)}});
  const auto e = estimate_isotropic_discrepancy(l.enumerate_points(), 2000, 0);
  EXPECT_FALSE(e.upper_bound_sq.has_value());
  EXPECT_GT(e.lower_bound, 0);
}

TEST(Estimate, ZeroBudgetKeepsCertificates) {
  const auto l = rank1_5_13();
  const auto e = estimate_isotropic_discrepancy(l, 0, 0);
  EXPECT_EQ(e.evaluations, 0u);
  EXPECT_EQ(e.lower_bound, std::max(slab_certificate(l).volume_lb, hyperplane_count_certificate(l).implied_jn_lb));
}
