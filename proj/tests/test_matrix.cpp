#include <gtest/gtest.h>

#include <random>

#include "latspec/matrix.hpp"

using namespace latspec;

namespace {

RationalMatrix random_matrix(std::mt19937_64& rng, std::size_t n, int range, int max_den) {
  std::uniform_int_distribution<int> num(-range, range), den(1, max_den);
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = make_rational(num(rng), den(rng));
  return m;
}

// Laplace expansion, independent of the elimination code.
Rational laplace(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  Rational s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    RationalMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, k = 0; j < n; ++j)
        if (j != c) minor(i - 1, k++) = m(i, j);
    const Rational term = m(0, c) * laplace(minor);
    s += c % 2 ? Rational(-term) : term;
  }
  return s;
}

}  // namespace

TEST(Matrix, DeterminantExamples) {
  EXPECT_EQ(det(RationalMatrix::identity(2)), 1);
  EXPECT_EQ(det(RationalMatrix{{make_rational(1, 5), make_rational(3, 5)}, {0, 1}}), make_rational(1, 5));
  EXPECT_EQ(det(RationalMatrix{{2, 0}, {0, 3}}), 6);
  EXPECT_EQ(det(RationalMatrix{{1, 2}, {2, 4}}), 0);
}

TEST(Matrix, DeterminantMatchesLaplace) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const auto m = random_matrix(rng, 1 + t % 5, 9, 6);
    EXPECT_EQ(det(m), laplace(m));
  }
}

TEST(Matrix, InverseExamples) {
  EXPECT_EQ(inverse(RationalMatrix::identity(3)), RationalMatrix::identity(3));
  EXPECT_EQ(inverse(RationalMatrix{{make_rational(1, 5), make_rational(3, 5)}, {0, 1}}), (RationalMatrix{{5, -3}, {0, 1}}));
  EXPECT_EQ(inverse(RationalMatrix{{2, 0}, {0, 4}}), (RationalMatrix{{make_rational(1, 2), 0}, {0, make_rational(1, 4)}}));
  EXPECT_THROW(inverse(RationalMatrix{{1, 2}, {2, 4}}), std::domain_error);
}

TEST(Matrix, InverseIsExact) {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    const auto m = random_matrix(rng, 1 + t % 6, 7, 5);
    if (det(m) == 0) continue;
    ++checked;
    EXPECT_EQ(m * inverse(m), RationalMatrix::identity(m.rows()));
    EXPECT_EQ(det(inverse(m)), 1 / det(m));
  }
  EXPECT_GT(checked, 250);
}

TEST(Matrix, HermiteNormalFormExamples) {
  const RationalMatrix a{{1, 3}, {5, 0}, {0, 5}};
  EXPECT_EQ(hnf(a, Integer(1)), (RationalMatrix{{1, 3}, {0, 5}}));
  EXPECT_EQ(hnf(RationalMatrix::identity(3), Integer(1)), RationalMatrix::identity(3));
  const RationalMatrix b{{2, 0}, {0, 2}, {1, 1}};
  EXPECT_EQ(hnf(b, Integer(1)), (RationalMatrix{{1, 1}, {0, 2}}));
}

TEST(Matrix, HermiteNormalFormRational) {
  const RationalMatrix a{{make_rational(1, 5), make_rational(3, 5)}, {1, 0}, {0, 1}};
  EXPECT_EQ(hnf(a), (RationalMatrix{{make_rational(1, 5), make_rational(3, 5)}, {0, 1}}));
}

TEST(Matrix, HermiteNormalFormRejectsRankDeficient) {
  EXPECT_THROW(hnf(RationalMatrix{{1, 2}, {2, 4}}, Integer(1)), std::invalid_argument);
}

TEST(Matrix, HermiteNormalFormIsCanonical) {
  // Unimodular row operations leave the HNF unchanged.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int t = 0; t < 100; ++t) {
    auto m = random_matrix(rng, 2 + t % 4, 5, 4);
    if (det(m) == 0) continue;
    const auto h = hnf(m);
    auto u = m;
    for (int k = 0; k < 10; ++k) {
      const std::size_t i = rng() % u.rows(), j = rng() % u.rows();
      if (i == j) continue;
      const Rational f = c(rng);
      for (std::size_t col = 0; col < u.cols(); ++col) u(i, col) += f * u(j, col);
      if (k % 3 == 0) u.swap_rows(i, j);
    }
    EXPECT_EQ(hnf(u), h);
    EXPECT_EQ(abs(det(h)), abs(det(m)));
  }
}

TEST(Matrix, GramSchmidtExamples) {
  const auto id = gram_schmidt(RationalMatrix{{2, 0}, {0, 3}});
  EXPECT_EQ(id.orthogonal, (RationalMatrix{{2, 0}, {0, 3}}));
  EXPECT_EQ(id.mu(1, 0), 0);

  const auto a = gram_schmidt(RationalMatrix{{1, 0}, {1, 1}});
  EXPECT_EQ(a.orthogonal.row_vector(1), (RationalVector{0, 1}));
  EXPECT_EQ(a.mu(1, 0), 1);

  const auto b = gram_schmidt(RationalMatrix{{2, 0}, {3, 4}});
  EXPECT_EQ(b.orthogonal.row_vector(1), (RationalVector{0, 4}));
  EXPECT_EQ(b.mu(1, 0), make_rational(3, 2));
  EXPECT_EQ(b.norms_sq[1], 16);
}

TEST(Matrix, GramSchmidtOrthogonality) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto m = random_matrix(rng, 2 + t % 5, 6, 4);
    if (det(m) == 0) continue;
    const auto g = gram_schmidt(m);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ((dot<Rational, Rational>(g.orthogonal.row(i), g.orthogonal.row(j))), 0);
    Rational prod = 1;
    for (const auto& x : g.norms_sq) prod *= x;
    EXPECT_EQ(prod, det(m) * det(m));
  }
}

TEST(Matrix, GramSchmidtRejectsDependentRows) {
  EXPECT_THROW(gram_schmidt(RationalMatrix{{1, 2}, {2, 4}}), std::invalid_argument);
}
