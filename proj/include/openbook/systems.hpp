#pragma once

#include <optional>
#include <string>
#include <vector>

#include "openbook/polymap.hpp"

namespace openbook {

// W as a regular level set of constraint polynomials; default is the sphere
// rho - r^2. radius carries the sampling scale for solvers.
struct WorldSpec {
  std::vector<Polynomial> constraints;
  double radius = 1.0;

  std::size_t ambient() const { return constraints.front().num_vars(); }
  std::size_t k() const { return constraints.size(); }
  std::size_t dim() const { return ambient() - k(); }

  static WorldSpec sphere(std::size_t N, const Rational& r);
};

enum class SignKind { NonZero, Positive, Negative, AtLeast };

struct Inequation {
  Polynomial poly;
  SignKind kind;
  double bound = 0.0;  // only for AtLeast: poly >= bound
};

// Polynomial equation system with chart inequations and optional appended
// auxiliary unknowns (Lagrange multipliers). All polynomials share
// ambient_vars + aux_unknowns variables.
struct PolySystem {
  std::vector<Polynomial> equations;
  std::vector<Inequation> inequations;
  std::size_t ambient_vars = 0;
  std::size_t aux_unknowns = 0;
  std::string description;

  std::size_t total_vars() const { return ambient_vars + aux_unknowns; }
};

// Embeds a polynomial over n vars into n + extra vars (exponent padding).
Polynomial lift(const Polynomial& f, std::size_t extra);

// Determinant of a square polynomial matrix (Laplace expansion; sizes here
// are at most 5x5 by the minor guard).
Polynomial symbolic_det(const std::vector<std::vector<Polynomial>>& m);

// (f_1,...,f_p) with component i removed; 1-based i, requires p >= 2.
PolyMap drop_component(const PolyMap& F, std::size_t i);

// Critical points of F|W: {h = 0} plus all (k+p)-minors of the stacked
// Jacobian [grad h; grad f]. Errors when k+p > N (rank condition vacuous)
// or when the minor guard trips (k+p > 5+1 rows or N > 8).
PolySystem sigma_F_W(const PolyMap& F, const WorldSpec& W);

// Chart system for the critical set of F/||F|| restricted to W on
// {f_i != 0}: {h = 0} plus all (k+p-1)-minors of [grad h; omega_{i,j}, j != i],
// with inequation f_i != 0. The union over i = 1..p covers the full set.
PolySystem sigma_Fbar_W(const PolyMap& F, const WorldSpec& W, std::size_t chart_i);

enum class MilnorKind { Plain, Normalized };

// Radius-r slice of the Milnor set M(F) (plain) or M(F-bar) (normalized,
// one system per chart) realized on the sphere rho = r^2.
std::vector<PolySystem> milnor_set(const PolyMap& F, MilnorKind which, const Rational& r);

// Square Lagrange system {grad l - sum lambda_i grad g_i = 0, g = 0} in
// (x, lambda); N + m equations and unknowns.
PolySystem lagrange_system(const std::vector<Polynomial>& constraints,
                           const Polynomial& objective);

// Critical points of f_j on W intersect V(eta) within 0 < f_j <= delta,
// eta being the remaining components; no solutions below delta means the
// carpeting check passes there.
PolySystem carpeting_system(const PolyMap& F, const WorldSpec& W, std::size_t j,
                            double delta);

} // namespace openbook
