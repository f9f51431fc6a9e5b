#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "latspec/bigfloat.hpp"
#include "latspec/errors.hpp"
#include "latspec/lattice.hpp"
#include "latspec/rational.hpp"
#include "latspec/reduction.hpp"

namespace latspec {

// F_1 = F_2 = 1.
inline Integer fibonacci(unsigned long m) {
  if (m == 0) return 0;
  Integer r;
  mpz_fib_ui(r.get_mpz_t(), m);
  return r;
}

// Rank-1 lattice with N = F_m and generator (1, F_{m-1}).
inline IntegrationLattice fibonacci_lattice(unsigned long m) {
  if (m < 3) throw std::invalid_argument("fibonacci_lattice: index must be at least 3");
  return IntegrationLattice::from_rank1(fibonacci(m), {Integer(1), fibonacci(m - 1)});
}

// (1/m) Z^d.
inline IntegrationLattice scaled_integer_lattice(unsigned long m, std::size_t d) {
  if (m == 0) throw std::invalid_argument("scaled_integer_lattice: m must be positive");
  if (d == 0) throw std::invalid_argument("scaled_integer_lattice: dimension must be positive");
  return IntegrationLattice::from_basis(RationalMatrix::identity(d).scaled(Rational(1, m)));
}

// Basis (1/m) e_i for i < d and (1/2) e_d: N = 2 m^(d-1) points on the two
// planes x_d = 0 and x_d = 1/2.
inline IntegrationLattice bad_lattice(unsigned long m, std::size_t d) {
  if (m == 0) throw std::invalid_argument("bad_lattice: m must be positive");
  if (d < 2) throw std::invalid_argument("bad_lattice: dimension must be at least 2");
  RationalMatrix b(d, d);
  for (std::size_t i = 0; i + 1 < d; ++i) b(i, i) = Rational(1, m);
  b(d - 1, d - 1) = Rational(1, 2);
  return IntegrationLattice::from_basis(b);
}

inline bool is_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

enum class SearchKind { korobov, exhaustive };

inline const char* to_string(SearchKind k) { return k == SearchKind::korobov ? "korobov" : "exhaustive"; }

struct GeneratorSearchResult {
  unsigned long n = 0;
  std::size_t dim = 0;
  IntegerVector best_generator;
  Rational best_sigma_sq;
  Rational best_dual_sq;
  SearchKind kind = SearchKind::korobov;
  std::uint64_t candidates = 0;
  std::string empirical_constant;  // sigma * n^(1/d)
  double empirical_constant_value = 0;
};

namespace detail {

// sigma * n^(1/d) = (sigma^2 * n^(2/d))^(1/2).
inline BigFloat empirical_constant(const Rational& sigma_sq, unsigned long n, std::size_t d, mpfr_prec_t bits) {
  BigFloat s = sqrt_of(sigma_sq, bits, MPFR_RNDN);
  BigFloat r = root(BigFloat::from(Integer(n), bits, MPFR_RNDN), static_cast<unsigned long>(d), MPFR_RNDN);
  return mul(s, r, MPFR_RNDN);
}

}  // namespace detail

// Searches rank-1 generators g with g_1 = 1 for the smallest spectral test:
// the Korobov family (1, a, a^2, ...) mod n, or every (1, g_2, ..., g_d).
// Ties go to the lexicographically smallest generator.
inline GeneratorSearchResult korobov_search(unsigned long n, std::size_t d, SearchKind kind,
                                            const Limits& limits = {}) {
  if (d == 0) throw std::invalid_argument("korobov_search: dimension must be positive");
  if (!is_prime(Integer(n))) throw std::invalid_argument("korobov_search: n = " + std::to_string(n) + " is not prime");
  Integer space = kind == SearchKind::korobov ? Integer(n) : Integer(1);
  if (kind == SearchKind::exhaustive)
    for (std::size_t i = 1; i < d; ++i) space *= n;
  if (space > Integer(static_cast<unsigned long>(limits.search_cap)))
    throw CapExceeded("korobov_search: search space " + space.get_str() + " exceeds cap " +
                      std::to_string(limits.search_cap));

  GeneratorSearchResult best;
  best.n = n;
  best.dim = d;
  best.kind = kind;
  bool have = false;
  auto consider = [&](const IntegerVector& g) {
    ++best.candidates;
    const auto spec = spectral_test(IntegrationLattice::from_rank1(Integer(n), g), limits, 30);
    if (!have || spec.sigma_sq < best.best_sigma_sq ||
        (spec.sigma_sq == best.best_sigma_sq && g < best.best_generator)) {
      best.best_generator = g;
      best.best_sigma_sq = spec.sigma_sq;
      best.best_dual_sq = spec.shortest_dual_sq;
      have = true;
    }
  };

  if (kind == SearchKind::korobov) {
    // a = 0 is included only in d = 1, where the family collapses to (1).
    const unsigned long first = d == 1 ? 0 : 1;
    for (unsigned long a = first; a < (d == 1 ? 1ul : n); ++a) {
      IntegerVector g(d);
      Integer p = 1;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = p;
        p = (p * a) % n;
      }
      consider(g);
    }
  } else {
    IntegerVector g(d, 0);
    g[0] = 1;
    while (true) {
      consider(g);
      std::size_t k = d;
      bool carried = true;
      while (k-- > 1) {
        if (g[k] + 1 < n) {
          ++g[k];
          carried = false;
          break;
        }
        g[k] = 0;
      }
      if (carried) break;
    }
  }
  const auto c = detail::empirical_constant(best.best_sigma_sq, n, d, bits_for_digits(kDefaultDigits));
  best.empirical_constant = c.to_string(30);
  best.empirical_constant_value = c.to_double();
  return best;
}

}  // namespace latspec
