#include "doctest.h"

#include "openbook/omega.hpp"
#include "openbook/solve.hpp"
#include "openbook/systems.hpp"
#include "test_util.hpp"

using namespace openbook;

namespace {
const std::vector<std::string> kXYZ = {"x", "y", "z"};

PolyMap example_milnor() {
  return PolyMap({Polynomial::parse("x", kXYZ),
                  Polynomial::parse("x^2 + y*(x^2+y^2) + z^2", kXYZ)});
}

double system_residual(const PolySystem& sys, const std::vector<double>& x) {
  double m = 0.0;
  for (const auto& eq : sys.equations)
    m = std::max(m, std::abs(eq.evaluate(std::span<const double>(x))));
  return m;
}
} // namespace

TEST_CASE("drop_component") {
  PolyMap F({Polynomial::parse("x^2+y", kXYZ), Polynomial::parse("x+z", kXYZ),
             Polynomial::parse("z", kXYZ)});
  PolyMap G = drop_component(F, 3);
  CHECK(G.p() == 2);
  CHECK(G.components[0] == F.components[0]);
  CHECK(G.components[1] == F.components[1]);
  PolyMap H = drop_component(PolyMap({Polynomial::parse("x^2+y", kXYZ),
                                      Polynomial::parse("x+z", kXYZ)}),
                             1);
  CHECK(H.p() == 1);
  CHECK(H.components[0] == Polynomial::parse("x+z", kXYZ));
  // repeated drops realize a single-component map
  PolyMap single = drop_component(drop_component(F, 3), 2);
  CHECK(single.p() == 1);
  CHECK_THROWS_AS(drop_component(single, 1), PolyError);
}

TEST_CASE("sigma_F_W: equator worked example") {
  PolyMap F({Polynomial::parse("x", kXYZ), Polynomial::parse("y", kXYZ)});
  WorldSpec W = WorldSpec::sphere(3, 1);
  PolySystem sys = sigma_F_W(F, W);
  CHECK(sys.equations.size() == 2);  // sphere + one 3x3 minor
  // the minor is 2z up to sign
  Polynomial two_z = Polynomial::parse("2*z", kXYZ);
  bool matches = sys.equations[1] == two_z || sys.equations[1] == -two_z;
  CHECK(matches);
  std::vector<double> equator = {0.6, 0.8, 0.0};
  CHECK(system_residual(sys, equator) < 1e-12);
  std::vector<double> pole = {0.0, 0.0, 1.0};
  CHECK(system_residual(sys, pole) > 0.1);
}

TEST_CASE("sigma_F_W: constant component makes every W point critical") {
  PolyMap F({Polynomial::parse("x", kXYZ), Polynomial::constant(3, 7)});
  WorldSpec W = WorldSpec::sphere(3, 1);
  PolySystem sys = sigma_F_W(F, W);
  SamplerSpec sph{SamplerSpec::Kind::SphereSurface, 3, 1.0};
  Rng r2(7);
  for (int t = 0; t < 20; ++t) {
    auto x = sph.draw(r2);
    CHECK(system_residual(sys, x) < 1e-12);
  }
}

TEST_CASE("sigma_F_W errors") {
  PolyMap F({Polynomial::parse("x", kXYZ), Polynomial::parse("y", kXYZ),
             Polynomial::parse("z", kXYZ)});
  WorldSpec W = WorldSpec::sphere(3, 1);
  CHECK_THROWS_AS(sigma_F_W(F, W), PolyError);  // k+p > N
  // minor guard on wide ambient spaces
  const std::size_t N = 9;
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < 2; ++i) comps.push_back(Polynomial::variable(N, i));
  CHECK_THROWS_AS(sigma_F_W(PolyMap(comps), WorldSpec::sphere(N, 1)), PolyError);
}

TEST_CASE("sigma_Fbar_W: toy map is empty off V(F)") {
  PolyMap F({Polynomial::parse("x", kXYZ), Polynomial::parse("y", kXYZ)});
  WorldSpec W = WorldSpec::sphere(3, 1);
  PolySystem sys = sigma_Fbar_W(F, W, 1);
  CHECK(sys.inequations.size() == 1);
  // cross product (-zx, -zy, x^2+y^2) vanishes only on V(F): check the
  // equations at a few off-V sphere points are bounded away from zero.
  Rng rng(11);
  SamplerSpec sph{SamplerSpec::Kind::SphereSurface, 3, 1.0};
  for (int t = 0; t < 50; ++t) {
    auto x = sph.draw(rng);
    if (std::hypot(x[0], x[1]) < 0.2) continue;
    double res = 0.0;
    for (std::size_t e = 1; e < sys.equations.size(); ++e)
      res = std::max(res, std::abs(sys.equations[e].evaluate(std::span<const double>(x))));
    CHECK(res > 1e-4);
  }
}

TEST_CASE("sigma_Fbar_W minor resolves the z=0 branch curve form") {
  // Independent symbolic oracle: the {x,y}-minor of [grad rho; omega_{1,2}]
  // at z=0 is 2*(x^4 + y^4 + 2x^2y^2 - x^2*y), the x^2*y form, not x*y^2.
  PolyMap F = example_milnor();
  PolyVector w = omega(F, 1, 2);
  Polynomial x = Polynomial::parse("x", kXYZ);
  Polynomial y = Polynomial::parse("y", kXYZ);
  Polynomial minor_xy = Polynomial::parse("2*x", kXYZ) * w[1] -
                        Polynomial::parse("2*y", kXYZ) * w[0];
  // substitute z = 0 by dropping all terms with positive z-exponent
  Polynomial at_z0(3);
  for (const auto& [e, c] : minor_xy.terms())
    if (e[2] == 0) at_z0.add_term(e, c);
  Polynomial expect =
      Polynomial::parse("2*(x^4 + y^4 + 2*x^2*y^2 - x^2*y)", kXYZ);
  Polynomial alternate_form =
      Polynomial::parse("2*(x^4 + y^4 + 2*x^2*y^2 - x*y^2)", kXYZ);
  CHECK(at_z0 == expect);
  CHECK(at_z0 != alternate_form);
}

TEST_CASE("milnor_set: planted petal point solves the normalized system") {
  PolyMap F = example_milnor();
  // theta = pi/4 on the petal (x^2+y^2)^2 = x^2 y, z = 0.
  double s = std::sqrt(0.5);
  double r = s * 0.5;  // sin * cos^2
  std::vector<double> pt = {r * s, r * s, 0.0};
  auto systems = milnor_set(F, MilnorKind::Normalized, Rational(r));
  // radius enters as an exact rational; rebuild with the exact r^2 = 1/8
  WorldSpec W;
  W.constraints = {Polynomial::parse("x^2+y^2+z^2 - 1/8", kXYZ)};
  W.radius = std::sqrt(0.125);
  PolySystem chart1 = sigma_Fbar_W(F, W, 1);
  CHECK(system_residual(chart1, pt) < 1e-12);
  CHECK(systems.size() == 2);
  CHECK_THROWS_AS(milnor_set(F, MilnorKind::Plain, Rational(-1)), PolyError);

  // containment: the petal point satisfies sigma_F_W as well
  PolySystem plain = sigma_F_W(F, W);
  CHECK(system_residual(plain, pt) < 1e-12);
}

TEST_CASE("milnor_set: plain system of the toy map is empty at every radius") {
  PolyMap F({Polynomial::parse("x", kXYZ), Polynomial::parse("y", kXYZ)});
  for (double r : {0.5, 1.0, 2.0}) {
    auto systems = milnor_set(F, MilnorKind::Normalized, Rational(r));
    SamplerSpec sph{SamplerSpec::Kind::SphereSurface, 3, r};
    for (const auto& sys : systems) {
      SolutionSet sol = multistart_solve(sys, sph, 200, 42);
      CHECK(sol.points.empty());
    }
  }
}

TEST_CASE("lagrange_system: sphere poles") {
  std::vector<Polynomial> g = {Polynomial::parse("x^2+y^2+z^2 - 4", kXYZ)};
  PolySystem sys = lagrange_system(g, Polynomial::parse("z", kXYZ));
  CHECK(sys.equations.size() == 4);
  CHECK(sys.aux_unknowns == 1);
  std::vector<double> pole = {0.0, 0.0, 2.0, 0.25};  // lambda = 1/(2r)
  CHECK(system_residual(sys, pole) < 1e-12);
  std::vector<double> south = {0.0, 0.0, -2.0, -0.25};
  CHECK(system_residual(sys, south) < 1e-12);
  CHECK_THROWS_AS(lagrange_system({}, Polynomial::parse("z", kXYZ)), PolyError);
}

TEST_CASE("carpeting_system: toy map on the great circle") {
  PolyMap F({Polynomial::parse("x", kXYZ), Polynomial::parse("y", kXYZ)});
  WorldSpec W = WorldSpec::sphere(3, 1);
  PolySystem sys = carpeting_system(F, W, 1, 0.1);
  CHECK(sys.inequations.size() == 2);
  // critical points of x on {y=0} cap at x=+-1; f_1 = 1 > delta so the
  // inequation band 0 < f_1 <= delta rejects them: carpeting OK below 0.1.
  SamplerSpec sph{SamplerSpec::Kind::SphereSurface, 3, 1.0};
  SolutionSet sol = multistart_solve(sys, sph, 300, 42);
  CHECK(sol.points.empty());
  CHECK_THROWS_AS(carpeting_system(F, W, 5, 0.1), PolyError);
}

TEST_CASE("chart consistency and drop monotonicity on sampled points") {
  PolyMap F({Polynomial::parse("x + y^2", kXYZ), Polynomial::parse("y - z", kXYZ)});
  WorldSpec W = WorldSpec::sphere(3, 2);
  PolySystem c1 = sigma_Fbar_W(F, W, 1);
  PolySystem c2 = sigma_Fbar_W(F, W, 2);
  PolySystem plain = sigma_F_W(F, W);
  SamplerSpec sph{SamplerSpec::Kind::SphereSurface, 3, 2.0};
  Rng r2(3);
  int tested = 0;
  for (int t = 0; t < 400 && tested < 100; ++t) {
    auto x = sph.draw(r2);
    std::vector<double> f = F.evaluate(x);
    if (std::abs(f[0]) < 0.2 || std::abs(f[1]) < 0.2) continue;
    bool in1 = system_residual(c1, x) <= 1e-8;
    bool in2 = system_residual(c2, x) <= 1e-8;
    CHECK(in1 == in2);
    ++tested;
  }
  // every sigma_Fbar solution (off V) satisfies sigma_F: solve and check
  SolutionSet sol = multistart_solve(c1, sph, 300, 42);
  for (const auto& pt : sol.points) {
    std::vector<double> x(pt.coords.begin(), pt.coords.begin() + 3);
    CHECK(system_residual(plain, x) <= 1e-7);
  }
  // drop monotonicity: solutions of sigma_G_W satisfy sigma_F_W equations
  PolyMap G = drop_component(F, 2);
  PolySystem gsys = sigma_F_W(G, W);
  SolutionSet gsol = multistart_solve(gsys, sph, 300, 42);
  for (const auto& pt : gsol.points) {
    std::vector<double> x(pt.coords.begin(), pt.coords.begin() + 3);
    CHECK(system_residual(plain, x) <= 1e-7);
  }
}
