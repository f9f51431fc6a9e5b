#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "latspec/lattice.hpp"

using namespace latspec;

namespace {

std::set<RationalVector> as_set(const PointSet& p) {
  const auto v = p.points();
  return {v.begin(), v.end()};
}

RationalVector frac(const RationalVector& x) {
  RationalVector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - Rational(floor(x[i]));
  return r;
}

IntegrationLattice random_lattice(std::mt19937_64& rng, std::size_t d) {
  std::uniform_int_distribution<int> den(1, 6);
  std::vector<RationalVector> gens(1 + rng() % 2, RationalVector(d));
  for (auto& g : gens)
    for (auto& x : g) {
      const int q = den(rng);
      x = make_rational(static_cast<int>(rng() % q), q);
    }
  return IntegrationLattice::from_generators(d, gens);
}

}  // namespace

TEST(Lattice, Rank1Examples) {
  const auto l = IntegrationLattice::from_rank1(Integer(5), {Integer(1), Integer(3)});
  EXPECT_EQ(l.basis(), (RationalMatrix{{make_rational(1, 5), make_rational(3, 5)}, {0, 1}}));
  EXPECT_EQ(l.n_points(), 5);

  const auto z = IntegrationLattice::from_rank1(Integer(1), {Integer(0), Integer(0), Integer(0)});
  EXPECT_EQ(z.n_points(), 1);
  EXPECT_EQ(z.basis(), RationalMatrix::identity(3));

  EXPECT_EQ(IntegrationLattice::from_rank1(Integer(8), {Integer(1), Integer(5)}).n_points(), 8);
  EXPECT_THROW(IntegrationLattice::from_rank1(Integer(0), {Integer(1)}), std::invalid_argument);
}

TEST(Lattice, FromBasisExamples) {
  EXPECT_EQ(IntegrationLattice::from_basis(RationalMatrix::identity(3)).n_points(), 1);
  EXPECT_EQ(IntegrationLattice::from_basis(RationalMatrix{{make_rational(1, 2), 0}, {0, make_rational(1, 2)}}).n_points(), 4);
  const RationalMatrix b{{make_rational(1, 3), 0}, {0, make_rational(1, 2)}};
  EXPECT_EQ(det(b), make_rational(1, 6));
  EXPECT_EQ(IntegrationLattice::from_basis(b).n_points(), 6);
}

TEST(Lattice, RejectsNonIntegrationBasis) {
  try {
    IntegrationLattice::from_basis(RationalMatrix{{2, 0}, {0, 1}});
    FAIL() << "expected rejection";
  } catch (const NotIntegrationLattice& e) {
    EXPECT_EQ(e.unit_index(), 0u);
  }
  EXPECT_THROW(IntegrationLattice::from_basis(RationalMatrix{{1, 2}, {2, 4}}), std::invalid_argument);
}

TEST(Lattice, RelaxedConstructorCountsPoints) {
  const auto l = IntegrationLattice::from_basis_relaxed(RationalMatrix{{2, 0}, {0, make_rational(1, 3)}});
  EXPECT_FALSE(l.is_integration());
  EXPECT_EQ(l.n_points(), 3);
  EXPECT_EQ(l.enumerate_points().size(), 3u);
  EXPECT_FALSE(l.dual().integral());
  EXPECT_EQ(abs(det(l.dual().basis())), make_rational(3, 2));
}

TEST(Lattice, DualExamples) {
  EXPECT_EQ(IntegrationLattice::from_basis(RationalMatrix::identity(2)).dual().basis(), RationalMatrix::identity(2));
  const auto l = IntegrationLattice::from_rank1(Integer(5), {Integer(1), Integer(3)});
  const auto dual = l.dual();
  EXPECT_TRUE(dual.integral());
  EXPECT_EQ(abs(det(dual.basis())), 5);
  // (2,1) in the dual: integer coefficients against the dual basis.
  const auto c = inverse(dual.basis()).left_multiply(RationalVector{2, 1});
  for (const auto& x : c) EXPECT_TRUE(is_integer(x));
  for (const auto& p : l.enumerate_points().points()) EXPECT_TRUE(is_integer(2 * p[0] + p[1]));

  const auto scaled = IntegrationLattice::from_basis(RationalMatrix::identity(3).scaled(make_rational(1, 4)));
  EXPECT_EQ(scaled.dual().basis(), RationalMatrix::identity(3).scaled(Rational(4)));
}

TEST(Lattice, EnumerationExamples) {
  const auto z = IntegrationLattice::from_basis(RationalMatrix::identity(2)).enumerate_points();
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z.point(0), (RationalVector{0, 0}));

  const auto p = IntegrationLattice::from_rank1(Integer(5), {Integer(1), Integer(3)}).enumerate_points();
  const std::set<RationalVector> expect{{0, 0},
                                        {make_rational(1, 5), make_rational(3, 5)},
                                        {make_rational(2, 5), make_rational(1, 5)},
                                        {make_rational(3, 5), make_rational(4, 5)},
                                        {make_rational(4, 5), make_rational(2, 5)}};
  EXPECT_EQ(as_set(p), expect);

  const auto h = IntegrationLattice::from_basis(RationalMatrix::identity(2).scaled(make_rational(1, 2))).enumerate_points();
  const std::set<RationalVector> grid{{0, 0}, {0, make_rational(1, 2)}, {make_rational(1, 2), 0}, {make_rational(1, 2), make_rational(1, 2)}};
  EXPECT_EQ(as_set(h), grid);
}

TEST(Lattice, EnumerationCap) {
  const auto l = IntegrationLattice::from_basis(RationalMatrix::identity(3).scaled(make_rational(1, 20)));
  EXPECT_THROW(l.enumerate_points(Limits{.enumeration_cap = 7999}), CapExceeded);
  EXPECT_EQ(l.enumerate_points(Limits{.enumeration_cap = 8000}).size(), 8000u);
}

TEST(Lattice, MembershipExamples) {
  const auto l = IntegrationLattice::from_rank1(Integer(5), {Integer(1), Integer(3)});
  EXPECT_TRUE(l.contains(RationalVector{1, 0}));
  EXPECT_TRUE(l.contains(RationalVector{0, 1}));
  EXPECT_TRUE(l.contains(RationalVector{make_rational(1, 5), make_rational(3, 5)}));
  EXPECT_FALSE(l.contains(RationalVector{make_rational(1, 5), make_rational(2, 5)}));
  EXPECT_THROW(l.contains(RationalVector{1}), std::invalid_argument);
}

TEST(Lattice, Rank1PointSetMatchesDefinition) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 60; ++t) {
    const std::size_t d = 1 + t % 4;
    const long n = 1 + static_cast<long>(rng() % 60);
    IntegerVector g(d);
    for (auto& x : g) x = static_cast<long>(rng() % n);
    const auto l = IntegrationLattice::from_rank1(Integer(n), g);
    std::set<RationalVector> direct;
    for (long k = 0; k < n; ++k) {
      RationalVector x(d);
      for (std::size_t i = 0; i < d; ++i) x[i] = make_rational(Integer(k) * g[i], Integer(n));
      direct.insert(frac(x));
    }
    const auto p = l.enumerate_points();
    EXPECT_EQ(as_set(p), direct);
    EXPECT_EQ(Integer(static_cast<unsigned long>(p.size())), l.n_points());
  }
}

TEST(Lattice, StructuralInvariants) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 150; ++t) {
    const auto l = random_lattice(rng, 1 + t % 4);
    const auto dual = l.dual();
    EXPECT_TRUE(dual.integral());
    EXPECT_EQ(abs(det(l.basis()) * det(dual.basis())), 1);
    EXPECT_EQ(abs(det(dual.basis())), Rational(l.n_points()));
    EXPECT_EQ(dual.primal(), l);
    const auto p = l.enumerate_points();
    EXPECT_EQ(Integer(static_cast<unsigned long>(p.size())), l.n_points());
    const auto set = as_set(p);
    EXPECT_EQ(set.size(), p.size());
    EXPECT_TRUE(set.count(RationalVector(l.dim(), 0)));
    for (const auto& x : p.points()) {
      EXPECT_TRUE(l.contains(x));
      for (const auto& c : x) EXPECT_TRUE(c >= 0 && c < 1);
      for (std::size_t r = 0; r < dual.basis().rows(); ++r)
        EXPECT_TRUE(is_integer(dot<Rational, Rational>(dual.basis().row(r), std::span<const Rational>(x))));
    }
    for (std::size_t i = 0; i < l.dim(); ++i) {
      RationalVector e(l.dim(), 0);
      e[i] = 1;
      EXPECT_TRUE(l.contains(e));
    }
  }
}

TEST(Lattice, CanonicalFormMakesEqualLatticesEqual) {
  const auto a = IntegrationLattice::from_rank1(Integer(7), {Integer(1), Integer(3)});
  const auto b = IntegrationLattice::from_rank1(Integer(7), {Integer(2), Integer(6)});
  const auto c = IntegrationLattice::from_rank1(Integer(7), {Integer(1), Integer(2)});
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
}
