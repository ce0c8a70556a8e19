#pragma once

#include <random>

#include "openbook/polymap.hpp"

namespace openbook::testutil {

// Random sparse polynomial with small rational coefficients, total degree
// at most max_deg.
inline Polynomial random_poly(std::mt19937_64& rng, std::size_t num_vars,
                              std::size_t max_deg, int n_terms = 6) {
  std::uniform_int_distribution<int> coef(-9, 9);
  std::uniform_int_distribution<int> den(1, 5);
  Polynomial p(num_vars);
  for (int t = 0; t < n_terms; ++t) {
    Exponents e(num_vars, 0);
    std::size_t budget = max_deg;
    for (std::size_t v = 0; v < num_vars && budget > 0; ++v) {
      std::uniform_int_distribution<std::size_t> d(0, budget);
      e[v] = static_cast<std::uint32_t>(d(rng));
      budget -= e[v];
    }
    p.add_term(e, Rational(coef(rng), den(rng)));
  }
  return p;
}

inline PolyMap random_map(std::mt19937_64& rng, std::size_t num_vars, std::size_t p,
                          std::size_t max_deg) {
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < p; ++i) {
    Polynomial f = random_poly(rng, num_vars, max_deg);
    if (f.is_zero()) f = Polynomial::constant(num_vars, 1);
    comps.push_back(std::move(f));
  }
  return PolyMap(std::move(comps));
}

inline std::vector<Rational> random_rational_point(std::mt19937_64& rng,
                                                   std::size_t num_vars) {
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 7);
  std::vector<Rational> x;
  for (std::size_t i = 0; i < num_vars; ++i) x.emplace_back(num(rng), den(rng));
  return x;
}

inline std::vector<double> random_double_point(std::mt19937_64& rng, std::size_t num_vars,
                                               double box = 2.0) {
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<double> x(num_vars);
  for (auto& v : x) v = u(rng);
  return x;
}

} // namespace openbook::testutil
