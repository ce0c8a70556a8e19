#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "openbook/systems.hpp"

namespace openbook {

using Rng = std::mt19937_64;

// Flat term list for the fast float evaluation path.
struct CompiledPoly {
  struct Term {
    double coef;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pows;  // (var, exp)
  };
  std::vector<Term> terms;

  static CompiledPoly from(const Polynomial& p);
  double eval(const std::vector<double>& x) const;
};

struct CompiledIneq {
  CompiledPoly poly;
  SignKind kind;
  double bound;
  double scale;  // value-scale estimate for margins
};

// Double-precision view of a PolySystem: equations, analytic Jacobian and
// inequations, plus a per-system residual scale estimated by sampling.
struct CompiledSystem {
  std::size_t n = 0;        // total unknowns
  std::size_t ambient = 0;  // ambient (non-multiplier) unknowns
  std::vector<CompiledPoly> eqs;
  std::vector<std::vector<CompiledPoly>> jac;
  std::vector<CompiledIneq> ineqs;
  double scale = 1.0;
  double region_radius = 1.0;

  double residual_inf(const std::vector<double>& x) const;
  double residual_sq(const std::vector<double>& x) const;
  // Margin check used at acceptance; rel is the relative margin.
  bool inequations_ok(const std::vector<double>& x, double rel = 1e-8) const;
};

CompiledSystem compile(const PolySystem& sys, double region_radius);

struct SamplerSpec {
  enum class Kind { SphereSurface, Ball, Box } kind = Kind::SphereSurface;
  std::size_t ambient = 0;
  double radius = 1.0;

  std::vector<double> draw(Rng& rng) const;
};

struct RefineResult {
  std::vector<double> point;
  double residual = 0.0;  // max-abs over all equations
  bool converged = false;
  bool inequations_ok = false;
  std::string failure;
};

// Damped Gauss-Newton on the least-squares residual. Accepts iff the final
// residual is at or below 1e-10 * system scale and all inequations hold
// with relative margin 1e-8.
RefineResult newton_refine(const CompiledSystem& sys, std::vector<double> start,
                           double tol = 1e-12, int maxit = 200);

struct SolutionPoint {
  std::vector<double> coords;  // total_vars entries
  double residual = 0.0;
  int basin_count = 0;
};

struct SolutionSet {
  std::vector<SolutionPoint> points;
  std::string tag;
  std::uint64_t seed = 0;
  int n_starts = 0;
};

// Deterministic given (seed, n_starts); solutions deduplicated at
// merge_radius = 1e-6 * region diameter, ordered by first discovery.
// Every accepted point is re-verified by exact term-by-term evaluation of
// the original system, independent of the compiled solver path.
SolutionSet multistart_solve(const PolySystem& sys, const SamplerSpec& sampler,
                             int n_starts, std::uint64_t seed);

struct EmptinessScore {
  double score = 0.0;  // min over starts of scaled max-abs residual
  bool empty = false;  // score > 1e-6
  std::optional<std::vector<double>> witness;
};

// Minimizes the residual from n_samples starts while keeping inequation
// margins; verdict "empty" iff no start gets the scaled residual below 1e-6.
EmptinessScore emptiness_score(const PolySystem& sys, const SamplerSpec& sampler,
                               int n_samples, std::uint64_t seed);

enum class SweepVerdict {
  Empty,
  Bounded,
  UnboundedSuspect,
  AccumulatesAtCenter,
};

std::string to_string(SweepVerdict v);

struct RadiusStep {
  double radius = 0.0;
  int n_solutions = 0;
  double min_norm = 0.0;          // min ||x|| over accepted ambient points
  double min_score = 0.0;         // min emptiness score over the systems
  std::vector<SolutionPoint> solutions;
};

struct SweepResult {
  std::vector<RadiusStep> steps;
  SweepVerdict verdict = SweepVerdict::Empty;
  std::string note;
};

enum class SweepMode { Local, Global };

// Solves one system family per radius. Local mode looks for solutions at
// every shrinking radius with min ||x|| trending to 0 (log-log slope fit,
// threshold 0.5); global mode declares "bounded" when at least 3 trailing
// radii yield no accepted solutions.
SweepResult radius_sweep(const PolyMap& F, MilnorKind which,
                         const std::vector<Rational>& radii, SweepMode mode,
                         int n_starts, std::uint64_t seed);

struct ConditionReport {
  bool condition_a = false;
  bool condition_b = false;
  bool fibration = false;
  SweepResult sigma_sweep;       // sigma_F_W family
  SweepResult sigma_bar_sweep;   // sigma_Fbar_W family (all charts)
  std::vector<double> min_dist_to_V;  // per radius, +inf encoded as -1 when no data
  std::string notes;             // always flags "heuristic, not certified"
};

// Fibration-condition verdict: (a) from critical samples keeping distance
// >= 0.01 * radius from V(F) samples across the sweep, (b) from emptiness
// of every chart of sigma_Fbar_W. The conjunction is numerical evidence,
// never proof.
ConditionReport condition_verdicts(const PolyMap& F, const std::vector<Rational>& radii,
                                   SweepMode mode, int n_starts, std::uint64_t seed);

} // namespace openbook
