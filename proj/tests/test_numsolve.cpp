#include "doctest.h"

#include <cmath>

#include "openbook/solve.hpp"
#include "test_util.hpp"

using namespace openbook;

namespace {
const std::vector<std::string> kXYZ = {"x", "y", "z"};

PolySystem make_system(std::vector<Polynomial> eqs, std::size_t ambient,
                       std::size_t aux = 0) {
  PolySystem s;
  s.equations = std::move(eqs);
  s.ambient_vars = ambient;
  s.aux_unknowns = aux;
  return s;
}
} // namespace

TEST_CASE("compiled evaluation matches exact rational evaluation") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 40; ++t) {
    Polynomial p = testutil::random_poly(rng, 3, 4);
    CompiledPoly cp = CompiledPoly::from(p);
    for (int s = 0; s < 10; ++s) {
      auto x = testutil::random_double_point(rng, 3);
      double exact = p.evaluate(std::span<const double>(x));
      CHECK(cp.eval(x) == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("newton_refine: sqrt(2) from 1.0") {
  PolySystem sys = make_system({Polynomial::parse("x^2 - 2", {"x"})}, 1);
  CompiledSystem cs = compile(sys, 2.0);
  RefineResult r = newton_refine(cs, {1.0});
  CHECK(r.converged);
  CHECK(r.point[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.residual <= 1e-10 * cs.scale);
}

TEST_CASE("newton_refine: inequation rejection carries a reason") {
  PolySystem sys = make_system({Polynomial::parse("x^2 - 2", {"x"})}, 1);
  sys.inequations.push_back({Polynomial::parse("x", {"x"}), SignKind::Negative, 0.0});
  CompiledSystem cs = compile(sys, 2.0);
  RefineResult pos = newton_refine(cs, {1.0});
  CHECK_FALSE(pos.inequations_ok);
  CHECK(pos.failure == "inequation violated");
  RefineResult neg = newton_refine(cs, {-1.0});
  CHECK(neg.converged);
  CHECK(neg.inequations_ok);
  CHECK(neg.point[0] == doctest::Approx(-std::sqrt(2.0)));
}

TEST_CASE("multistart on a zero-dimensional system finds exactly two points") {
  PolySystem sys = make_system({Polynomial::parse("x", kXYZ),
                                Polynomial::parse("y", kXYZ),
                                Polynomial::parse("x^2+y^2+z^2 - 1", kXYZ)},
                               3);
  SamplerSpec sph{SamplerSpec::Kind::SphereSurface, 3, 1.0};
  SolutionSet sol = multistart_solve(sys, sph, 200, 42);
  REQUIRE(sol.points.size() == 2);
  int total_basins = 0;
  for (const auto& p : sol.points) {
    CHECK(std::abs(p.coords[0]) < 1e-9);
    CHECK(std::abs(p.coords[1]) < 1e-9);
    CHECK(std::abs(std::abs(p.coords[2]) - 1.0) < 1e-9);
    CHECK(p.basin_count >= 1);
    total_basins += p.basin_count;
  }
  CHECK(total_basins <= 200);
}

TEST_CASE("multistart is bit-for-bit deterministic given (seed, n_starts)") {
  PolySystem sys = make_system({Polynomial::parse("x^2 + y^2 - 1", kXYZ),
                                Polynomial::parse("z", kXYZ),
                                Polynomial::parse("x - y", kXYZ)},
                               3);
  SamplerSpec sph{SamplerSpec::Kind::Ball, 3, 2.0};
  SolutionSet a = multistart_solve(sys, sph, 150, 42);
  SolutionSet b = multistart_solve(sys, sph, 150, 42);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].basin_count == b.points[i].basin_count);
    for (std::size_t c = 0; c < a.points[i].coords.size(); ++c)
      CHECK(a.points[i].coords[c] == b.points[i].coords[c]);
  }
  CHECK(a.points.size() == 2);  // (+-1/sqrt2, +-1/sqrt2, 0)
}

TEST_CASE("multistart solves Lagrange systems with multiplier warm start") {
  std::vector<Polynomial> g = {Polynomial::parse("x^2+y^2+z^2 - 4", kXYZ)};
  PolySystem sys = lagrange_system(g, Polynomial::parse("z", kXYZ));
  SamplerSpec sph{SamplerSpec::Kind::SphereSurface, 3, 2.0};
  SolutionSet sol = multistart_solve(sys, sph, 120, 42);
  REQUIRE(sol.points.size() == 2);
  for (const auto& p : sol.points) {
    CHECK(std::abs(p.coords[0]) < 1e-8);
    CHECK(std::abs(p.coords[1]) < 1e-8);
    CHECK(std::abs(std::abs(p.coords[2]) - 2.0) < 1e-8);
    // multiplier sign tracks the pole: lambda = z / 8
    CHECK(p.coords[3] == doctest::Approx(p.coords[2] / 8.0).epsilon(1e-6));
  }
}

TEST_CASE("emptiness score separates empty from populated systems") {
  PolySystem empty = make_system({Polynomial::parse("x^2 + y^2 + 1", {"x", "y"})}, 2);
  SamplerSpec box{SamplerSpec::Kind::Box, 2, 2.0};
  EmptinessScore es = emptiness_score(empty, box, 80, 42);
  CHECK(es.empty);
  CHECK(es.score > 1e-6);
  CHECK_FALSE(es.witness.has_value());

  PolySystem circle = make_system({Polynomial::parse("x^2 + y^2 - 1", {"x", "y"})}, 2);
  EmptinessScore cs = emptiness_score(circle, box, 80, 42);
  CHECK_FALSE(cs.empty);
  REQUIRE(cs.witness.has_value());
  double w = std::hypot((*cs.witness)[0], (*cs.witness)[1]);
  CHECK(w == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("radius sweep: global verdict for the everywhere-good map") {
  PolyMap F({Polynomial::parse("x", kXYZ), Polynomial::parse("y", kXYZ)});
  std::vector<Rational> radii = {Rational(2), Rational(4), Rational(8)};
  SweepResult sr = radius_sweep(F, MilnorKind::Normalized, radii, SweepMode::Global,
                                120, 42);
  CHECK(sr.verdict == SweepVerdict::Empty);
  for (const auto& step : sr.steps) CHECK(step.n_solutions == 0);
}

TEST_CASE("radius sweep: local accumulation of the cusp-like branch") {
  PolyMap F({Polynomial::parse("x", kXYZ),
             Polynomial::parse("x^2 + y*(x^2+y^2) + z^2", kXYZ)});
  std::vector<Rational> radii = {Rational(1, 5), Rational(1, 10), Rational(1, 20),
                                 Rational(1, 40)};
  SweepResult sr = radius_sweep(F, MilnorKind::Normalized, radii, SweepMode::Local,
                                150, 42);
  CHECK(sr.verdict == SweepVerdict::AccumulatesAtCenter);
  for (const auto& step : sr.steps) {
    CHECK(step.n_solutions > 0);
    CHECK(step.min_norm <= step.radius * (1 + 1e-9));
  }
  // min distance to the center scales at least linearly with the radius
  CHECK(sr.steps.back().min_norm < sr.steps.front().min_norm);
}

TEST_CASE("radius sweep rejects short radius lists") {
  PolyMap F({Polynomial::parse("x", kXYZ), Polynomial::parse("y", kXYZ)});
  CHECK_THROWS_AS(radius_sweep(F, MilnorKind::Plain, {Rational(1), Rational(2)},
                               SweepMode::Global, 10, 42),
                  PolyError);
}

TEST_CASE("condition verdicts: projection map fibers over the circle") {
  PolyMap F({Polynomial::parse("x", kXYZ), Polynomial::parse("y", kXYZ)});
  std::vector<Rational> radii = {Rational(1), Rational(2), Rational(4)};
  ConditionReport cr = condition_verdicts(F, radii, SweepMode::Global, 60, 42);
  CHECK(cr.condition_a);
  CHECK(cr.condition_b);
  CHECK(cr.fibration);
  CHECK(cr.notes.find("heuristic") != std::string::npos);
}
