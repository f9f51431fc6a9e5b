#include <gtest/gtest.h>

#include <random>

#include "latspec/constructions.hpp"
#include "latspec/reduction.hpp"
#include "oracles.hpp"

using namespace latspec;

namespace {

IntegrationLattice rank1_5_13() { return IntegrationLattice::from_rank1(Integer(5), {Integer(1), Integer(3)}); }

}  // namespace

TEST(Lll, IdentityUnchanged) {
  const auto rb = lll_reduce(RationalMatrix::identity(3));
  EXPECT_EQ(rb.basis, RationalMatrix::identity(3));
  EXPECT_TRUE(rb.size_reduced());
  EXPECT_TRUE(rb.lovasz());
}

TEST(Lll, NearlyParallelRows) {
  const RationalMatrix b{{1, 0}, {make_rational(99, 100), make_rational(1, 100)}};
  const auto rb = lll_reduce(b);
  const auto brute = oracle::shortest_in_box(b, 200);
  EXPECT_EQ(brute.norm_sq, make_rational(2, 10000));
  EXPECT_EQ(norm_sq(rb.basis.row(0)), brute.norm_sq);
  EXPECT_EQ(hnf(rb.basis), hnf(b));
}

TEST(Lll, DualOfRank1HasNormFive) {
  const auto rb = lll_reduce(rank1_5_13().dual().basis());
  bool found = false;
  for (std::size_t i = 0; i < rb.size(); ++i) found = found || norm_sq(rb.basis.row(i)) == 5;
  EXPECT_TRUE(found);
}

TEST(Lll, RejectsBadDelta) {
  EXPECT_THROW(lll_reduce(RationalMatrix::identity(2), make_rational(1, 4)), std::invalid_argument);
  EXPECT_THROW(lll_reduce(RationalMatrix::identity(2), Rational(1)), std::invalid_argument);
  EXPECT_THROW(lll_reduce(RationalMatrix{{1, 2}, {2, 4}}), std::invalid_argument);
}

TEST(Lll, OtherDeltaStillReduces) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 50; ++t) {
    const auto b = oracle::random_basis(rng, 2 + t % 4, 20);
    const auto rb = lll_reduce(b, make_rational(99, 100));
    EXPECT_TRUE(rb.size_reduced());
    EXPECT_TRUE(rb.lovasz());
    EXPECT_TRUE(rb.property_a());
    EXPECT_TRUE(rb.property_b());
    EXPECT_EQ(hnf(rb.basis), hnf(b));
  }
}

TEST(Lll, PropertiesOnRandomLattices) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 1 + t % 6;
    const auto l = oracle::random_integration_lattice(rng, d);
    const auto b = oracle::random_unimodular(rng, d) * l.basis();
    const auto rb = lll_reduce(b);
    ASSERT_TRUE(rb.size_reduced());
    ASSERT_TRUE(rb.lovasz());
    ASSERT_TRUE(rb.property_a());
    ASSERT_TRUE(rb.property_b());
    ASSERT_TRUE(rb.norm_chain());
    ASSERT_EQ(hnf(rb.basis), l.basis());
  }
}

TEST(Svp, Examples) {
  EXPECT_EQ(shortest_vector(RationalMatrix::identity(4)).norm_sq, 1);
  const auto sv = shortest_vector(rank1_5_13().dual().basis());
  EXPECT_EQ(sv.norm_sq, 5);
  EXPECT_EQ(sv.vector, (RationalVector{2, 1}));
  EXPECT_EQ(shortest_vector(RationalMatrix::identity(3).scaled(Rational(7))).norm_sq, 49);
}

TEST(Svp, CapEnforced) {
  EXPECT_THROW(shortest_vector(RationalMatrix::identity(4), Limits{.svp_dimension_cap = 3}), CapExceeded);
}

TEST(Svp, MatchesBoxOracle) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 1 + t % 4;
    const auto l = oracle::random_integration_lattice(rng, d, 9);
    const auto dual = l.dual().basis();
    if (l.n_points() > 10000) continue;
    // Box half-width ceil(|b_1| / min |b*_i|) over the LLL basis.
    const auto rb = lll_reduce(dual);
    Rational min_gso = rb.gso_norms_sq[0];
    for (const auto& x : rb.gso_norms_sq) min_gso = std::min(min_gso, x);
    const Rational ratio = norm_sq(rb.basis.row(0)) / min_gso;
    const long bound = isqrt(ceil(ratio)).get_si() + 1;
    const auto brute = oracle::shortest_in_box(rb.basis, bound);
    const auto sv = shortest_vector(dual);
    ASSERT_EQ(sv.norm_sq, brute.norm_sq);
    ASSERT_EQ(sv.vector, brute.vector);
  }
}

TEST(Spectral, Examples) {
  for (unsigned long m = 1; m <= 6; ++m)
    for (std::size_t d = 1; d <= 3; ++d) {
      const auto s = spectral_test(scaled_integer_lattice(m, d));
      EXPECT_EQ(s.sigma_sq, make_rational(1, m * m));
    }
  const auto s = spectral_test(rank1_5_13());
  EXPECT_EQ(s.sigma_sq, make_rational(1, 5));
  EXPECT_EQ(s.shortest_dual_sq, 5);
  EXPECT_EQ(s.sigma_sq * s.shortest_dual_sq, 1);
  EXPECT_EQ(s.sigma_decimal.substr(0, 12), "4.4721359549");
  EXPECT_GE(s.sigma_decimal.find('e') - 1, 30u);
  EXPECT_EQ(spectral_test(bad_lattice(3, 2)).sigma_sq, make_rational(1, 4));
  EXPECT_EQ(spectral_test(bad_lattice(5, 4)).sigma_sq, make_rational(1, 4));
}

TEST(Spectral, BasisIndependent) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 1 + t % 5;
    const auto l = oracle::random_integration_lattice(rng, d);
    const auto other = IntegrationLattice::from_basis(oracle::random_unimodular(rng, d) * l.basis());
    EXPECT_EQ(spectral_test(l).sigma_sq, spectral_test(other).sigma_sq);
    EXPECT_EQ(spectral_test(l).shortest_dual_vector, spectral_test(other).shortest_dual_vector);
  }
}

TEST(Spectral, MatchesDualScan) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto l = oracle::random_integration_lattice(rng, 1 + t % 3, 8);
    EXPECT_EQ(spectral_test(l).sigma_sq, oracle::sigma_sq_by_dual_scan(l, oracle::dual_scan_bound(l)));
  }
}

TEST(Covering, Examples) {
  const auto z = covering_family(IntegrationLattice::from_basis(RationalMatrix::identity(2)));
  EXPECT_EQ(z.spacing_sq, 1);
  EXPECT_EQ(norm_sq(std::span<const Rational>(z.normal)), 1);

  const auto f = covering_family(rank1_5_13());
  EXPECT_EQ(f.normal, (RationalVector{2, 1}));
  EXPECT_EQ(f.spacing_sq, make_rational(1, 5));
  EXPECT_EQ(f.points_checked, 5u);

  const auto bad = covering_family(bad_lattice(4, 3));
  EXPECT_EQ(bad.normal, (RationalVector{0, 0, 2}));
  EXPECT_EQ(bad.spacing_sq, make_rational(1, 4));
}

TEST(Covering, AllPointsOnFamily) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const auto l = oracle::random_integration_lattice(rng, 1 + t % 4);
    EXPECT_NO_THROW(covering_family(l));
  }
}

TEST(UnitCell, IdentityExample) {
  const auto rb = lll_reduce(RationalMatrix::identity(2));
  const auto u = unit_cell_diameter_bound(rb, Rational(1));
  ASSERT_TRUE(u.diameter_sq.has_value());
  EXPECT_EQ(*u.diameter_sq, 2);
  EXPECT_EQ(u.factor, 4);
  EXPECT_TRUE(u.all_hold());
}

TEST(UnitCell, ScaledAndRank1) {
  for (unsigned long m = 1; m <= 5; ++m)
    for (std::size_t d = 1; d <= 4; ++d) {
      const auto l = scaled_integer_lattice(m, d);
      const auto u = unit_cell_diameter_bound(lll_reduce(l.basis()), spectral_test(l).sigma_sq);
      EXPECT_EQ(*u.diameter_sq, make_rational(static_cast<unsigned long>(d), m * m));
      EXPECT_TRUE(u.all_hold()) << m << " " << d;
    }
  const auto l = rank1_5_13();
  EXPECT_TRUE(unit_cell_diameter_bound(lll_reduce(l.basis()), spectral_test(l).sigma_sq).all_hold());
}

TEST(UnitCell, ChainOnRandomLattices) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const auto l = oracle::random_integration_lattice(rng, 1 + t % 5);
    const auto u = unit_cell_diameter_bound(lll_reduce(l.basis()), spectral_test(l).sigma_sq);
    EXPECT_TRUE(u.all_hold());
  }
}
