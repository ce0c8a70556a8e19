#include "openbook/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace openbook {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = seed ^ (a * 0x9e3779b97f4a7c15ull) ^ (b * 0xd1b54a32d192ed03ull);
  return splitmix64(s);
}

double median_abs(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end(),
                   [](double a, double b) { return std::abs(a) < std::abs(b); });
  return std::abs(v[v.size() / 2]);
}

} // namespace

CompiledPoly CompiledPoly::from(const Polynomial& p) {
  CompiledPoly c;
  for (const auto& [e, q] : p.terms()) {
    Term t;
    t.coef = to_double(q);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) t.pows.emplace_back(static_cast<std::uint32_t>(i), e[i]);
    c.terms.push_back(std::move(t));
  }
  return c;
}

double CompiledPoly::eval(const std::vector<double>& x) const {
  double acc = 0.0;
  for (const auto& t : terms) {
    double v = t.coef;
    for (auto [var, exp] : t.pows) {
      double b = x[var];
      double pw = 1.0;
      std::uint32_t k = exp;
      while (k) {
        if (k & 1u) pw *= b;
        b *= b;
        k >>= 1;
      }
      v *= pw;
    }
    acc += v;
  }
  return acc;
}

double CompiledSystem::residual_inf(const std::vector<double>& x) const {
  double m = 0.0;
  for (const auto& e : eqs) m = std::max(m, std::abs(e.eval(x)));
  return m;
}

double CompiledSystem::residual_sq(const std::vector<double>& x) const {
  double s = 0.0;
  for (const auto& e : eqs) {
    double v = e.eval(x);
    s += v * v;
  }
  return s;
}

bool CompiledSystem::inequations_ok(const std::vector<double>& x, double rel) const {
  for (const auto& q : ineqs) {
    double v = q.poly.eval(x);
    double margin = rel * q.scale;
    switch (q.kind) {
      case SignKind::NonZero:
        if (std::abs(v) <= margin) return false;
        break;
      case SignKind::Positive:
        if (v <= margin) return false;
        break;
      case SignKind::Negative:
        if (v >= -margin) return false;
        break;
      case SignKind::AtLeast:
        if (v < q.bound - margin) return false;
        break;
    }
  }
  return true;
}

CompiledSystem compile(const PolySystem& sys, double region_radius) {
  CompiledSystem c;
  c.n = sys.total_vars();
  c.ambient = sys.ambient_vars;
  c.region_radius = region_radius;
  for (const auto& eq : sys.equations) {
    c.eqs.push_back(CompiledPoly::from(eq));
    std::vector<CompiledPoly> row;
    row.reserve(c.n);
    for (std::size_t v = 0; v < c.n; ++v) row.push_back(CompiledPoly::from(eq.derivative(v)));
    c.jac.push_back(std::move(row));
  }
  // Scale estimate: median |value| over deterministic region samples, per
  // equation; the system scale is the largest of these (floor 1).
  Rng rng(0xC0FFEEull ^ static_cast<std::uint64_t>(c.n * 1315423911ull));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int kSamples = 64;
  std::vector<std::vector<double>> pts;
  for (int s = 0; s < kSamples; ++s) {
    std::vector<double> x(c.n);
    for (std::size_t i = 0; i < c.ambient; ++i) x[i] = unif(rng) * region_radius;
    for (std::size_t i = c.ambient; i < c.n; ++i) x[i] = unif(rng);
    pts.push_back(std::move(x));
  }
  double scale = 1.0;
  for (const auto& eq : c.eqs) {
    std::vector<double> vals;
    vals.reserve(kSamples);
    for (const auto& x : pts) vals.push_back(eq.eval(x));
    scale = std::max(scale, median_abs(vals));
  }
  c.scale = scale;
  for (const auto& q : sys.inequations) {
    CompiledIneq ci{CompiledPoly::from(q.poly), q.kind, q.bound, 1.0};
    std::vector<double> vals;
    vals.reserve(kSamples);
    for (const auto& x : pts) vals.push_back(ci.poly.eval(x));
    ci.scale = std::max(1e-12, median_abs(vals));
    c.ineqs.push_back(std::move(ci));
  }
  return c;
}

std::vector<double> SamplerSpec::draw(Rng& rng) const {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> x(ambient);
  switch (kind) {
    case Kind::SphereSurface: {
      double n2 = 0.0;
      for (auto& v : x) {
        v = gauss(rng);
        n2 += v * v;
      }
      double n = std::sqrt(std::max(n2, 1e-300));
      for (auto& v : x) v = v / n * radius;
      break;
    }
    case Kind::Ball: {
      double n2 = 0.0;
      for (auto& v : x) {
        v = gauss(rng);
        n2 += v * v;
      }
      double n = std::sqrt(std::max(n2, 1e-300));
      double u = std::pow(std::uniform_real_distribution<double>(0.0, 1.0)(rng),
                          1.0 / static_cast<double>(ambient));
      for (auto& v : x) v = v / n * radius * u;
      break;
    }
    case Kind::Box: {
      for (auto& v : x) v = unif(rng) * radius;
      break;
    }
  }
  return x;
}

namespace {

Eigen::VectorXd eval_residual(const CompiledSystem& sys, const std::vector<double>& x) {
  Eigen::VectorXd r(sys.eqs.size());
  for (std::size_t i = 0; i < sys.eqs.size(); ++i) r(i) = sys.eqs[i].eval(x);
  return r;
}

Eigen::MatrixXd eval_jacobian(const CompiledSystem& sys, const std::vector<double>& x) {
  Eigen::MatrixXd J(sys.eqs.size(), sys.n);
  for (std::size_t i = 0; i < sys.eqs.size(); ++i)
    for (std::size_t v = 0; v < sys.n; ++v) J(i, v) = sys.jac[i][v].eval(x);
  return J;
}

// Core damped Gauss-Newton loop. When `feasible_rel` is positive, trial
// steps violating the inequation margins at that relative level are
// rejected, which keeps emptiness scoring away from chart walls.
struct GnOutcome {
  std::vector<double> point;
  double residual_inf;
  bool stalled;
};

GnOutcome gauss_newton(const CompiledSystem& sys, std::vector<double> x, double tol,
                       int maxit, double feasible_rel) {
  double mu = 1e-3;
  Eigen::VectorXd r = eval_residual(sys, x);
  double best = r.squaredNorm();
  bool stalled = false;
  for (int it = 0; it < maxit; ++it) {
    double rinf = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) rinf = std::max(rinf, std::abs(r(i)));
    if (rinf <= tol * sys.scale) break;
    Eigen::MatrixXd J = eval_jacobian(sys, x);
    Eigen::MatrixXd JtJ = J.transpose() * J;
    Eigen::VectorXd g = J.transpose() * r;
    bool improved = false;
    for (int attempt = 0; attempt < 9; ++attempt) {
      Eigen::MatrixXd M = JtJ;
      for (Eigen::Index d = 0; d < M.rows(); ++d)
        M(d, d) += mu * std::max(JtJ(d, d), 1e-12);
      Eigen::VectorXd step = M.ldlt().solve(-g);
      std::vector<double> trial(x);
      for (std::size_t v = 0; v < sys.n; ++v) trial[v] += step(v);
      if (feasible_rel > 0.0 && !sys.inequations_ok(trial, feasible_rel)) {
        mu *= 10.0;
        continue;
      }
      Eigen::VectorXd rt = eval_residual(sys, trial);
      double ct = rt.squaredNorm();
      if (ct < best) {
        double step_norm = step.norm();
        x = std::move(trial);
        r = std::move(rt);
        best = ct;
        mu = std::max(mu / 3.0, 1e-14);
        improved = true;
        double xn = 0.0;
        for (double v : x) xn += v * v;
        if (step_norm <= 1e-14 * (1.0 + std::sqrt(xn))) it = maxit;  // converged step-wise
        break;
      }
      mu *= 10.0;
    }
    if (!improved) {
      stalled = true;
      break;
    }
  }
  double rinf = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) rinf = std::max(rinf, std::abs(r(i)));
  return {std::move(x), rinf, stalled};
}

// Lagrange-type systems are linear in the appended multipliers; fit them by
// least squares before refining.
void init_aux_least_squares(const CompiledSystem& sys, std::vector<double>& x) {
  const std::size_t na = sys.n - sys.ambient;
  if (na == 0) return;
  for (std::size_t i = sys.ambient; i < sys.n; ++i) x[i] = 0.0;
  Eigen::VectorXd b0 = eval_residual(sys, x);
  Eigen::MatrixXd A(b0.size(), na);
  for (std::size_t j = 0; j < na; ++j) {
    x[sys.ambient + j] = 1.0;
    Eigen::VectorXd bj = eval_residual(sys, x);
    A.col(j) = bj - b0;
    x[sys.ambient + j] = 0.0;
  }
  Eigen::VectorXd lam = A.colPivHouseholderQr().solve(-b0);
  for (std::size_t j = 0; j < na; ++j) x[sys.ambient + j] = lam(j);
}

} // namespace

RefineResult newton_refine(const CompiledSystem& sys, std::vector<double> start,
                           double tol, int maxit) {
  RefineResult out;
  if (start.size() != sys.n) {
    out.failure = "start dimension mismatch";
    return out;
  }
  GnOutcome gn = gauss_newton(sys, std::move(start), tol, maxit, 0.0);
  out.point = std::move(gn.point);
  out.residual = gn.residual_inf;
  out.converged = out.residual <= 1e-10 * sys.scale;
  if (!out.converged) {
    out.failure = gn.stalled ? "stalled before convergence" : "max iterations";
    return out;
  }
  out.inequations_ok = sys.inequations_ok(out.point, 1e-8);
  if (!out.inequations_ok) out.failure = "inequation violated";
  return out;
}

namespace {

// Exact term-by-term evaluation of the source equations at the rounded
// point; independent of the compiled path.
double exact_residual(const PolySystem& sys, const std::vector<double>& x) {
  std::vector<Rational> q;
  q.reserve(x.size());
  for (double v : x) q.emplace_back(v);
  double m = 0.0;
  for (const auto& eq : sys.equations)
    m = std::max(m, std::abs(to_double(eq.evaluate(q))));
  return m;
}

} // namespace

SolutionSet multistart_solve(const PolySystem& sys, const SamplerSpec& sampler,
                             int n_starts, std::uint64_t seed) {
  CompiledSystem c = compile(sys, sampler.radius);
  SolutionSet set;
  set.tag = sys.description;
  set.seed = seed;
  set.n_starts = n_starts;
  Rng rng(seed);
  const double merge_radius = 1e-6 * 2.0 * sampler.radius;
  for (int s = 0; s < n_starts; ++s) {
    std::vector<double> start(c.n, 0.0);
    std::vector<double> amb = sampler.draw(rng);
    std::copy(amb.begin(), amb.end(), start.begin());
    init_aux_least_squares(c, start);
    RefineResult r = newton_refine(c, std::move(start));
    if (!r.converged || !r.inequations_ok) continue;
    if (exact_residual(sys, r.point) > 1e-9 * c.scale) continue;
    bool merged = false;
    for (auto& pt : set.points) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < c.ambient; ++i) {
        double d = pt.coords[i] - r.point[i];
        d2 += d * d;
      }
      if (std::sqrt(d2) <= merge_radius) {
        pt.basin_count += 1;
        merged = true;
        break;
      }
    }
    if (!merged) set.points.push_back({std::move(r.point), r.residual, 1});
  }
  return set;
}

EmptinessScore emptiness_score(const PolySystem& sys, const SamplerSpec& sampler,
                               int n_samples, std::uint64_t seed) {
  CompiledSystem c = compile(sys, sampler.radius);
  Rng rng(seed);
  EmptinessScore out;
  out.score = std::numeric_limits<double>::infinity();
  const double wall = 1e-3;  // feasibility margin while minimizing
  for (int s = 0; s < n_samples; ++s) {
    std::vector<double> start(c.n, 0.0);
    std::vector<double> amb = sampler.draw(rng);
    std::copy(amb.begin(), amb.end(), start.begin());
    init_aux_least_squares(c, start);
    if (!c.inequations_ok(start, wall)) continue;
    GnOutcome gn = gauss_newton(c, std::move(start), 1e-14, 120, wall);
    double scaled = gn.residual_inf / c.scale;
    if (scaled < out.score) {
      out.score = scaled;
      out.witness = gn.point;
    }
  }
  if (!std::isfinite(out.score)) {
    out.score = std::numeric_limits<double>::max();
    out.witness.reset();
  }
  out.empty = out.score > 1e-6;
  if (out.empty) out.witness.reset();
  return out;
}

std::string to_string(SweepVerdict v) {
  switch (v) {
    case SweepVerdict::Empty: return "empty";
    case SweepVerdict::Bounded: return "bounded";
    case SweepVerdict::UnboundedSuspect: return "unbounded-suspect";
    case SweepVerdict::AccumulatesAtCenter: return "accumulates-at-center";
  }
  return "?";
}

namespace {

SweepVerdict classify_sweep(const std::vector<RadiusStep>& steps, SweepMode mode,
                            std::string& note) {
  bool all_empty = true;
  bool all_nonempty = true;
  for (const auto& st : steps) {
    if (st.n_solutions > 0)
      all_empty = false;
    else
      all_nonempty = false;
  }
  if (all_empty) {
    bool scores_ok = true;
    for (const auto& st : steps)
      if (st.min_score <= 1e-6) scores_ok = false;
    if (scores_ok) return SweepVerdict::Empty;
    note = "no accepted solutions but emptiness score below threshold at some radius";
    return SweepVerdict::Bounded;
  }
  if (mode == SweepMode::Global) {
    int trailing = 0;
    for (auto it = steps.rbegin(); it != steps.rend() && it->n_solutions == 0; ++it)
      ++trailing;
    if (trailing >= 3) return SweepVerdict::Bounded;
    note = "solutions persist at large radii (fewer than 3 confirming empty radii)";
    return SweepVerdict::UnboundedSuspect;
  }
  // Local mode: log-log regression of min ||x|| against the radius.
  if (all_nonempty) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& st : steps) {
      if (st.min_norm <= 0) continue;
      double lx = std::log(st.radius), ly = std::log(st.min_norm);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
    double denom = m * sxx - sx * sx;
    double slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    if (m >= 3 && slope >= 0.5) return SweepVerdict::AccumulatesAtCenter;
    note = "solutions at every radius but min-norm trend inconclusive";
    return SweepVerdict::Bounded;
  }
  note = "solutions at some radii only";
  return SweepVerdict::Bounded;
}

RadiusStep solve_radius(const PolyMap& F, MilnorKind which, const Rational& r,
                        int n_starts, std::uint64_t seed, std::uint64_t salt) {
  RadiusStep step;
  step.radius = to_double(r);
  step.min_norm = 0.0;
  step.min_score = std::numeric_limits<double>::max();
  std::vector<PolySystem> systems = milnor_set(F, which, r);
  SamplerSpec sampler{SamplerSpec::Kind::SphereSurface, F.num_vars(), step.radius};
  const double merge_radius = 1e-6 * 2.0 * step.radius;
  for (std::size_t c = 0; c < systems.size(); ++c) {
    SolutionSet set =
        multistart_solve(systems[c], sampler, n_starts, derive_seed(seed, salt, c));
    for (auto& pt : set.points) {
      bool dup = false;
      for (const auto& ex : step.solutions) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < F.num_vars(); ++i) {
          double d = ex.coords[i] - pt.coords[i];
          d2 += d * d;
        }
        if (std::sqrt(d2) <= merge_radius) {
          dup = true;
          break;
        }
      }
      if (!dup) step.solutions.push_back(std::move(pt));
    }
    EmptinessScore es = emptiness_score(systems[c], sampler, std::max(50, n_starts / 4),
                                        derive_seed(seed, salt + 101, c));
    step.min_score = std::min(step.min_score, es.score);
  }
  step.n_solutions = static_cast<int>(step.solutions.size());
  if (!step.solutions.empty()) {
    double mn = std::numeric_limits<double>::max();
    for (const auto& pt : step.solutions) {
      double n2 = 0.0;
      for (std::size_t i = 0; i < F.num_vars(); ++i) n2 += pt.coords[i] * pt.coords[i];
      mn = std::min(mn, std::sqrt(n2));
    }
    step.min_norm = mn;
  }
  return step;
}

} // namespace

SweepResult radius_sweep(const PolyMap& F, MilnorKind which,
                         const std::vector<Rational>& radii, SweepMode mode,
                         int n_starts, std::uint64_t seed) {
  if (radii.size() < 3) throw PolyError("radius sweep needs at least 3 radii");
  SweepResult res;
  for (std::size_t i = 0; i < radii.size(); ++i)
    res.steps.push_back(solve_radius(F, which, radii[i], n_starts, seed, i));
  res.verdict = classify_sweep(res.steps, mode, res.note);
  return res;
}

ConditionReport condition_verdicts(const PolyMap& F, const std::vector<Rational>& radii,
                                   SweepMode mode, int n_starts, std::uint64_t seed) {
  if (radii.size() < 3) throw PolyError("condition verdicts need at least 3 radii");
  ConditionReport rep;
  const std::size_t N = F.num_vars();

  // V(F) sampling system: plain zero set of all components.
  PolySystem vsys;
  vsys.ambient_vars = N;
  vsys.description = "V(F)";
  vsys.equations = F.components;

  bool all_a = true;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    double r = to_double(radii[i]);
    RadiusStep sigma = solve_radius(F, MilnorKind::Plain, radii[i], n_starts, seed, 1000 + i);
    RadiusStep sigma_bar =
        solve_radius(F, MilnorKind::Normalized, radii[i], n_starts, seed, 2000 + i);
    // V samples: in the ball and on the sphere at this radius.
    SamplerSpec ball{SamplerSpec::Kind::Ball, N, 1.5 * r};
    SolutionSet v_ball = multistart_solve(vsys, ball, std::max(100, n_starts / 2),
                                          derive_seed(seed, 3000 + i));
    PolySystem vw = vsys;
    vw.description = "V_W(F)";
    vw.equations.push_back(WorldSpec::sphere(N, radii[i]).constraints.front());
    SamplerSpec sph{SamplerSpec::Kind::SphereSurface, N, r};
    SolutionSet v_sph = multistart_solve(vw, sph, std::max(100, n_starts / 2),
                                         derive_seed(seed, 4000 + i));
    std::vector<const SolutionPoint*> v_pts;
    for (const auto& p : v_ball.points) v_pts.push_back(&p);
    for (const auto& p : v_sph.points) v_pts.push_back(&p);

    // Off-V filter on the sigma samples: ||F(x)|| above a relative floor.
    std::vector<double> fscale_samples;
    Rng rng(derive_seed(seed, 5000 + i));
    SamplerSpec ssph{SamplerSpec::Kind::SphereSurface, N, r};
    for (int s = 0; s < 64; ++s) {
      std::vector<double> x = ssph.draw(rng);
      std::vector<double> fv = F.evaluate(x);
      double n2 = 0.0;
      for (double v : fv) n2 += v * v;
      fscale_samples.push_back(std::sqrt(n2));
    }
    double fscale = std::max(1e-12, median_abs(fscale_samples));

    double min_dist = -1.0;
    for (const auto& pt : sigma.solutions) {
      std::vector<double> x(pt.coords.begin(), pt.coords.begin() + N);
      std::vector<double> fv = F.evaluate(x);
      double fn = 0.0;
      for (double v : fv) fn += v * v;
      if (std::sqrt(fn) <= 1e-6 * fscale) continue;  // on V(F), excluded
      for (const auto* vp : v_pts) {
        double d2 = 0.0;
        for (std::size_t c = 0; c < N; ++c) {
          double d = x[c] - vp->coords[c];
          d2 += d * d;
        }
        double d = std::sqrt(d2);
        if (min_dist < 0.0 || d < min_dist) min_dist = d;
      }
    }
    rep.min_dist_to_V.push_back(min_dist);
    // Condition (a) at this radius: the off-V critical samples keep a
    // distance floor of 0.01 * radius from the V(F) samples (vacuously
    // true when either sample set is empty).
    if (min_dist >= 0.0 && min_dist < 0.01 * r) all_a = false;

    rep.sigma_sweep.steps.push_back(std::move(sigma));
    rep.sigma_bar_sweep.steps.push_back(std::move(sigma_bar));
  }
  rep.sigma_sweep.verdict = classify_sweep(rep.sigma_sweep.steps, mode, rep.sigma_sweep.note);
  rep.sigma_bar_sweep.verdict =
      classify_sweep(rep.sigma_bar_sweep.steps, mode, rep.sigma_bar_sweep.note);

  rep.condition_a = all_a;
  bool b = true;
  for (const auto& st : rep.sigma_bar_sweep.steps)
    if (st.n_solutions > 0 || st.min_score <= 1e-6) b = false;
  rep.condition_b = b;
  rep.fibration = rep.condition_a && rep.condition_b;
  rep.notes = "heuristic, not certified";
  return rep;
}

} // namespace openbook
