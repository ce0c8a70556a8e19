#include "doctest.h"

#include "openbook/polymap.hpp"
#include "test_util.hpp"

using namespace openbook;

namespace {
const std::vector<std::string> kXYZ = {"x", "y", "z"};

// Horner-free oracle: sum of coef * prod x_i^e_i computed term by term with
// plain repeated multiplication.
Rational term_sum_oracle(const Polynomial& p, const std::vector<Rational>& x) {
  Rational acc = 0;
  for (const auto& [e, c] : p.terms()) {
    Rational t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::uint32_t k = 0; k < e[i]; ++k) t *= x[i];
    acc += t;
  }
  return acc;
}
} // namespace

TEST_CASE("parse: worked map component") {
  Polynomial p = Polynomial::parse("x^2 + y*(x^2+y^2) + z^2", kXYZ);
  Polynomial q = Polynomial::parse("x^2 + x^2*y + y^3 + z^2", kXYZ);
  CHECK(p == q);
  CHECK(p.terms().size() == 4);
}

TEST_CASE("parse: zero and ring identity") {
  CHECK(Polynomial::parse("0", kXYZ).is_zero());
  CHECK(Polynomial::parse("(x+y)^2 - x^2 - 2*x*y - y^2", kXYZ).is_zero());
}

TEST_CASE("parse: rational literals and unary minus") {
  Polynomial p = Polynomial::parse("-1/2*x + 3/4", {"x"});
  CHECK(to_double(p.evaluate(std::vector<Rational>{Rational(1)})) == doctest::Approx(0.25));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(Polynomial::parse("x + ", kXYZ), ParseError);
  CHECK_THROWS_AS(Polynomial::parse("x + w", kXYZ), ParseError);
  CHECK_THROWS_AS(Polynomial::parse("x^-2", kXYZ), ParseError);
  CHECK_THROWS_AS(Polynomial::parse("x^65", kXYZ), ParseError);
  try {
    Polynomial::parse("x + w", kXYZ);
  } catch (const ParseError& e) {
    CHECK(e.position == 4);
  }
}

TEST_CASE("ring ops basics") {
  Polynomial x = Polynomial::parse("x", kXYZ);
  Polynomial y = Polynomial::parse("y", kXYZ);
  CHECK(x * x == Polynomial::parse("x^2", kXYZ));
  CHECK((x + y) * (x - y) == Polynomial::parse("x^2 - y^2", kXYZ));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    Polynomial a = testutil::random_poly(rng, 3, 3);
    CHECK((a - a).is_zero());
  }
  Polynomial other(2);
  CHECK_THROWS_AS(x + other, PolyError);
}

TEST_CASE("differentiate matches the worked example") {
  Polynomial f2 = Polynomial::parse("x^2 + x^2*y + y^3 + z^2", kXYZ);
  CHECK(f2.derivative(1) == Polynomial::parse("x^2 + 3*y^2", kXYZ));
  CHECK(Polynomial::constant(3, 5).derivative(0).is_zero());
  Polynomial rho = Polynomial::parse("x^2+y^2+z^2", kXYZ);
  auto g = rho.gradient();
  CHECK(g[0] == Polynomial::parse("2*x", kXYZ));
  CHECK(g[1] == Polynomial::parse("2*y", kXYZ));
  CHECK(g[2] == Polynomial::parse("2*z", kXYZ));
  CHECK_THROWS_AS(rho.derivative(3), PolyError);
}

TEST_CASE("Leibniz rule holds symbolically on random inputs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    Polynomial a = testutil::random_poly(rng, 3, 3);
    Polynomial b = testutil::random_poly(rng, 3, 3);
    for (std::size_t v = 0; v < 3; ++v) {
      Polynomial lhs = (a * b).derivative(v);
      Polynomial rhs = a * b.derivative(v) + b * a.derivative(v);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("evaluate: exact rational path") {
  Polynomial p = Polynomial::parse("x^2 + y", kXYZ);
  std::vector<Rational> pt = {Rational(2), Rational(1), Rational(0)};
  CHECK(p.evaluate(pt) == Rational(5));
  CHECK(Polynomial(3).evaluate(pt) == Rational(0));
  CHECK_THROWS_AS(p.evaluate(std::vector<Rational>{Rational(1)}), PolyError);
}

TEST_CASE("evaluate agrees with the term-sum oracle and is additive") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    Polynomial a = testutil::random_poly(rng, 3, 4);
    Polynomial b = testutil::random_poly(rng, 3, 4);
    auto x = testutil::random_rational_point(rng, 3);
    CHECK(a.evaluate(x) == term_sum_oracle(a, x));
    CHECK((a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x));
  }
}

TEST_CASE("norm_squared") {
  Polynomial x = Polynomial::parse("x", kXYZ);
  Polynomial y = Polynomial::parse("y", kXYZ);
  CHECK(norm_squared(PolyMap({x, y})) == Polynomial::parse("x^2+y^2", kXYZ));
  CHECK(norm_squared(PolyMap({Polynomial(3)})).is_zero());
  Polynomial f2 = Polynomial::parse("x^2 + x^2*y + y^3 + z^2", kXYZ);
  // symbolic expansion oracle
  CHECK(norm_squared(PolyMap({x, f2})) == x * x + f2 * f2);
}

TEST_CASE("norm_squared evaluation matches the component-sum oracle") {
  std::mt19937_64 rng(17);
  PolyMap F = testutil::random_map(rng, 3, 3, 3);
  Polynomial n2 = norm_squared(F);
  for (int i = 0; i < 1000; ++i) {
    auto x = testutil::random_rational_point(rng, 3);
    Rational s = 0;
    for (const auto& f : F.components) {
      Rational v = f.evaluate(x);
      s += v * v;
    }
    CHECK(n2.evaluate(x) == s);
  }
}

TEST_CASE("canonical printer round-trips") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 40; ++i) {
    Polynomial a = testutil::random_poly(rng, 3, 4);
    Polynomial back = Polynomial::parse(a.to_string(kXYZ), kXYZ);
    CHECK(a == back);
  }
  CHECK(Polynomial(3).to_string(kXYZ) == "0");
}
