#include <gtest/gtest.h>

#include "latspec/constructions.hpp"
#include "latspec/volume.hpp"
#include "oracles.hpp"

using namespace latspec;

TEST(Fibonacci, Examples) {
  const auto f5 = fibonacci_lattice(5);
  EXPECT_EQ(f5.n_points(), 5);
  EXPECT_EQ(f5.rank1()->generator, (IntegerVector{1, 3}));
  EXPECT_EQ(fibonacci_lattice(6).rank1()->generator, (IntegerVector{1, 5}));
  EXPECT_EQ(fibonacci_lattice(6).n_points(), 8);
  EXPECT_EQ(fibonacci_lattice(12).n_points(), 144);
  EXPECT_EQ(fibonacci_lattice(12).rank1()->generator, (IntegerVector{1, 89}));
  EXPECT_THROW(fibonacci_lattice(2), std::invalid_argument);
}

TEST(Fibonacci, CoprimeAndCount) {
  for (unsigned long m = 3; m <= 30; ++m) {
    EXPECT_EQ(fibonacci_lattice(m).n_points(), fibonacci(m));
    EXPECT_EQ(gcd(fibonacci(m), fibonacci(m - 1)), 1);
  }
}

TEST(Scaled, Examples) {
  const auto z = scaled_integer_lattice(1, 3);
  EXPECT_EQ(z.n_points(), 1);
  EXPECT_EQ(spectral_test(z).sigma_sq, 1);
  const auto s = scaled_integer_lattice(4, 3);
  EXPECT_EQ(s.n_points(), 64);
  EXPECT_EQ(spectral_test(s).sigma_sq, make_rational(1, 16));
  const auto t = scaled_integer_lattice(10, 2);
  EXPECT_EQ(t.n_points(), 100);
  EXPECT_EQ(spectral_test(t).sigma_sq, make_rational(1, 100));
  EXPECT_THROW(scaled_integer_lattice(0, 2), std::invalid_argument);
}

TEST(Bad, Examples) {
  const auto b = bad_lattice(3, 2);
  EXPECT_EQ(b.n_points(), 6);
  for (const auto& p : b.enumerate_points().points()) EXPECT_TRUE(p[1] == 0 || p[1] == make_rational(1, 2));
  EXPECT_EQ(spectral_test(b).sigma_sq, make_rational(1, 4));

  const auto one = bad_lattice(1, 2).enumerate_points();
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one.point(0), (RationalVector{0, 0}));
  EXPECT_EQ(one.point(1), (RationalVector{0, make_rational(1, 2)}));

  const auto b3 = bad_lattice(2, 3);
  EXPECT_EQ(b3.n_points(), 8);
  const AxisBox box{{0, 0, 0}, {1, 1, make_rational(1, 2)}, true};
  EXPECT_EQ(count_inside(b3.enumerate_points(), box), 0u);
  EXPECT_EQ(local_discrepancy(b3.enumerate_points(), box), make_rational(-1, 2));
  EXPECT_THROW(bad_lattice(3, 1), std::invalid_argument);
}

TEST(Bad, SpectralTestEqualsHalfForLargerM) {
  // For m = 1 the dual contains e_1, so sigma = 1 rather than 1/2.
  EXPECT_EQ(spectral_test(bad_lattice(1, 2)).sigma_sq, 1);
  for (unsigned long m = 2; m <= 10; ++m)
    for (std::size_t d = 2; d <= 4; ++d) EXPECT_EQ(spectral_test(bad_lattice(m, d)).sigma_sq, make_rational(1, 4));
}

TEST(Korobov, Examples) {
  const auto five = korobov_search(5, 2, SearchKind::exhaustive);
  EXPECT_EQ(five.best_sigma_sq, make_rational(1, 5));
  EXPECT_EQ(five.best_generator, (IntegerVector{1, 2}));

  const auto two = korobov_search(2, 2, SearchKind::exhaustive);
  EXPECT_EQ(two.best_generator, (IntegerVector{1, 1}));
  EXPECT_EQ(two.best_sigma_sq, make_rational(1, 2));

  const auto r = korobov_search(101, 2, SearchKind::korobov);
  EXPECT_LE(r.empirical_constant_value, 2.0);
  EXPECT_EQ(r.candidates, 100u);
  EXPECT_EQ(spectral_test(IntegrationLattice::from_rank1(Integer(101), r.best_generator)).sigma_sq, r.best_sigma_sq);
}

TEST(Korobov, ExhaustiveMatchesOracleAndAgreesInTwoDimensions) {
  for (unsigned long n : {3ul, 7ul, 13ul, 31ul}) {
    const auto ex = korobov_search(n, 2, SearchKind::exhaustive);
    const auto ko = korobov_search(n, 2, SearchKind::korobov);
    EXPECT_EQ(ex.best_sigma_sq, ko.best_sigma_sq);
    Rational best = 2;
    for (unsigned long a = 0; a < n; ++a) {
      const auto l = IntegrationLattice::from_rank1(Integer(n), {Integer(1), Integer(a)});
      best = std::min(best, oracle::sigma_sq_by_dual_scan(l, oracle::dual_scan_bound(l)));
    }
    EXPECT_EQ(ex.best_sigma_sq, best);
  }
}

TEST(Korobov, Errors) {
  EXPECT_THROW(korobov_search(9, 2, SearchKind::korobov), std::invalid_argument);
  EXPECT_THROW(korobov_search(101, 3, SearchKind::exhaustive, Limits{.search_cap = 1000}), CapExceeded);
  EXPECT_THROW(korobov_search(101, 2, SearchKind::korobov, Limits{.search_cap = 100}), CapExceeded);
}
