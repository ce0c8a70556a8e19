#include "openbook/euler.hpp"

#include "openbook/omega.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

namespace openbook {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  s ^= s >> 30;
  s *= 0xbf58476d1ce4e5b9ULL;
  s ^= s >> 27;
  s *= 0x94d049bb133111ebULL;
  return s ^ (s >> 31);
}

// Rational coefficients keep the exact re-verification path in the solver
// available for the Lagrange systems built here.
Polynomial random_linear(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<int> num(-1000, 1000);
  Polynomial l(n);
  for (std::size_t i = 0; i < n; ++i) {
    Exponents e(n, 0);
    e[i] = 1;
    l.add_term(e, Rational(num(rng), 1000));
  }
  return l;
}

std::vector<PolyVector> all_gradients(const std::vector<Polynomial>& g) {
  std::vector<PolyVector> out;
  for (const auto& p : g) out.push_back(p.gradient());
  return out;
}

std::vector<std::vector<PolyVector>> all_hessians(const std::vector<Polynomial>& g) {
  std::vector<std::vector<PolyVector>> out;
  for (const auto& p : g) {
    std::vector<PolyVector> h;
    for (const auto& d : p.gradient()) h.push_back(d.gradient());
    out.push_back(std::move(h));
  }
  return out;
}

Eigen::MatrixXd jacobian_at(const std::vector<PolyVector>& grads,
                            const std::vector<double>& x) {
  Eigen::MatrixXd J(grads.size(), x.size());
  for (std::size_t i = 0; i < grads.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      J(i, j) = grads[i][j].evaluate(std::span<const double>(x));
  return J;
}

// Index of a Lagrange critical point of a linear objective: negative
// eigenvalues of -sum lambda_i Hess(g_i) projected onto the tangent space
// (kernel of the constraint Jacobian via full SVD).
int tangential_index(const std::vector<PolyVector>& grads,
                     const std::vector<std::vector<PolyVector>>& hess,
                     const std::vector<double>& x,
                     const std::vector<double>& lambda, double& min_abs_eig) {
  const std::size_t N = x.size();
  const std::size_t m = grads.size();
  const std::size_t d = N - m;
  if (d == 0) {
    min_abs_eig = std::numeric_limits<double>::infinity();
    return 0;
  }
  Eigen::MatrixXd J = jacobian_at(grads, x);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
  Eigen::MatrixXd Q = svd.matrixV().rightCols(d);

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b)
        H(a, b) -= lambda[i] * hess[i][a][b].evaluate(std::span<const double>(x));
  Eigen::MatrixXd Ht = Q.transpose() * H * Q;
  Ht = 0.5 * (Ht + Ht.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ht);
  int idx = 0;
  min_abs_eig = std::numeric_limits<double>::infinity();
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double e = es.eigenvalues()(i);
    min_abs_eig = std::min(min_abs_eig, std::abs(e) / scale);
    if (e < 0) ++idx;
  }
  return idx;
}

bool distinct_values(const std::vector<double>& vals) {
  double scale = 1.0;
  for (double v : vals) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t j = i + 1; j < vals.size(); ++j)
      if (std::abs(vals[i] - vals[j]) < 1e-8 * scale) return false;
  return true;
}

MorseOutcome chi_points_or_empty(const std::vector<Polynomial>& g, double R,
                                 std::uint64_t seed, int n_starts, long long d) {
  PolySystem sys;
  sys.equations = g;
  sys.ambient_vars = g.front().num_vars();
  SamplerSpec ball{SamplerSpec::Kind::Ball, sys.ambient_vars, 1.5 * R};
  if (d < 0) {
    EmptinessScore es = emptiness_score(sys, ball, std::max(n_starts, 64), seed);
    if (!es.empty)
      throw PolyError("morse_chi_closed: over-determined system has solutions");
    return {0, {}, 1};
  }
  SolutionSet sol = multistart_solve(sys, ball, n_starts, seed);
  MorseOutcome out;
  out.chi = static_cast<int>(sol.points.size());
  for (const auto& p : sol.points)
    out.records.push_back({p.coords, 0.0, 0, MorseRecord::Location::Interior});
  return out;
}

} // namespace

MorseOutcome morse_chi_closed(const std::vector<Polynomial>& constraints,
                              double sample_radius, std::uint64_t seed,
                              int n_starts) {
  if (constraints.empty()) throw PolyError("morse_chi_closed: no constraints");
  const std::size_t N = constraints.front().num_vars();
  const long long d = static_cast<long long>(N) -
                      static_cast<long long>(constraints.size());
  if (d <= 0) return chi_points_or_empty(constraints, sample_radius, seed, n_starts, d);

  auto grads = all_gradients(constraints);
  auto hess = all_hessians(constraints);
  SamplerSpec ball{SamplerSpec::Kind::Ball, N, 1.5 * sample_radius};

  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng(mix_seed(seed, 7000 + attempt));
    Polynomial objective = random_linear(N, rng);
    PolySystem sys = lagrange_system(constraints, objective);
    SolutionSet sol =
        multistart_solve(sys, ball, n_starts, mix_seed(seed, 7100 + attempt));
    if (sol.points.empty()) continue;  // a compact manifold has critical points

    std::vector<double> values;
    for (const auto& p : sol.points) {
      std::vector<double> x(p.coords.begin(), p.coords.begin() + N);
      values.push_back(objective.evaluate(std::span<const double>(x)));
    }
    if (!distinct_values(values)) continue;

    MorseOutcome out;
    out.functionals_tried = attempt + 1;
    bool degenerate = false;
    for (std::size_t k = 0; k < sol.points.size(); ++k) {
      std::vector<double> x(sol.points[k].coords.begin(),
                            sol.points[k].coords.begin() + N);
      std::vector<double> lam(sol.points[k].coords.begin() + N,
                              sol.points[k].coords.end());
      double min_eig = 0.0;
      int idx = tangential_index(grads, hess, x, lam, min_eig);
      if (min_eig < 1e-6) {
        degenerate = true;
        break;
      }
      out.chi += (idx % 2 == 0) ? 1 : -1;
      out.records.push_back({x, values[k], idx, MorseRecord::Location::Interior});
    }
    if (degenerate) continue;
    if (d % 2 == 1 && out.chi != 0) continue;  // missed critical points suspected
    return out;
  }
  throw PolyError(
      "morse_chi_closed: degeneracy or instability persisted through 5 functionals");
}

MorseOutcome morse_chi_boundary(const std::vector<Polynomial>& constraints,
                                const Polynomial& barrier, double delta,
                                double sample_radius, std::uint64_t seed,
                                int n_starts) {
  if (constraints.empty()) throw PolyError("morse_chi_boundary: no constraints");
  const std::size_t N = constraints.front().num_vars();
  const long long d = static_cast<long long>(N) -
                      static_cast<long long>(constraints.size());
  if (d <= 0)
    throw PolyError("morse_chi_boundary: region dimension must be positive");

  auto grads = all_gradients(constraints);
  auto hess = all_hessians(constraints);
  std::vector<Polynomial> with_boundary = constraints;
  with_boundary.push_back(barrier - Polynomial::constant(N, Rational(delta)));
  auto bgrads = all_gradients(with_boundary);
  auto bhess = all_hessians(with_boundary);
  PolyVector barrier_grad = barrier.gradient();
  SamplerSpec ball{SamplerSpec::Kind::Ball, N, 1.5 * sample_radius};

  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng(mix_seed(seed, 8000 + attempt));
    Polynomial objective = random_linear(N, rng);

    SolutionSet interior = multistart_solve(lagrange_system(constraints, objective),
                                            ball, n_starts,
                                            mix_seed(seed, 8100 + attempt));
    SolutionSet boundary = multistart_solve(lagrange_system(with_boundary, objective),
                                            ball, n_starts,
                                            mix_seed(seed, 8200 + attempt));

    MorseOutcome out;
    out.functionals_tried = attempt + 1;
    bool degenerate = false;
    std::vector<double> values;

    for (const auto& p : interior.points) {
      std::vector<double> x(p.coords.begin(), p.coords.begin() + N);
      double b = barrier.evaluate(std::span<const double>(x));
      if (std::abs(b - delta) < 1e-6 * (1.0 + std::abs(delta))) {
        degenerate = true;  // boundary tangency
        break;
      }
      if (b < delta) continue;
      std::vector<double> lam(p.coords.begin() + N, p.coords.end());
      double min_eig = 0.0;
      int idx = tangential_index(grads, hess, x, lam, min_eig);
      if (min_eig < 1e-6) {
        degenerate = true;
        break;
      }
      double v = objective.evaluate(std::span<const double>(x));
      values.push_back(v);
      out.chi += (idx % 2 == 0) ? 1 : -1;
      out.records.push_back({x, v, idx, MorseRecord::Location::Interior});
    }

    for (const auto& p : boundary.points) {
      if (degenerate) break;
      std::vector<double> x(p.coords.begin(), p.coords.begin() + N);
      std::vector<double> lam(p.coords.begin() + N, p.coords.end());

      // project the objective and barrier gradients onto the tangent space
      // of the equality constraints alone; inward means the restricted
      // objective increases into {barrier > delta}.
      Eigen::MatrixXd J = jacobian_at(grads, x);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
      Eigen::MatrixXd Q = svd.matrixV().rightCols(N - constraints.size());
      Eigen::VectorXd gl(N), gb(N);
      for (std::size_t j = 0; j < N; ++j) {
        gl(j) = objective.derivative(j).evaluate(std::span<const double>(x));
        gb(j) = barrier_grad[j].evaluate(std::span<const double>(x));
      }
      Eigen::VectorXd pl = Q * (Q.transpose() * gl);
      Eigen::VectorXd pb = Q * (Q.transpose() * gb);
      double s = pl.dot(pb);
      double tangency_scale = pl.norm() * pb.norm();
      if (tangency_scale < 1e-12 || std::abs(s) < 1e-6 * tangency_scale) {
        degenerate = true;
        break;
      }
      if (s < 0) continue;  // outward: no contribution

      double min_eig = 0.0;
      int idx = tangential_index(bgrads, bhess, x, lam, min_eig);
      if (min_eig < 1e-6) {
        degenerate = true;
        break;
      }
      double v = objective.evaluate(std::span<const double>(x));
      values.push_back(v);
      out.chi += (idx % 2 == 0) ? 1 : -1;
      out.records.push_back({x, v, idx, MorseRecord::Location::BoundaryInward});
    }

    if (degenerate || !distinct_values(values)) continue;
    return out;
  }
  throw PolyError(
      "morse_chi_boundary: degeneracy or tangency persisted through 5 functionals");
}

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

} // namespace

CurveChi curve_chi_oracle(const PolySystem& sys, const SamplerSpec& sampler,
                          int density, std::uint64_t seed) {
  const std::size_t amb = sys.ambient_vars;
  // Two sampling geometries: refinement basins can leave structural gaps in
  // the cloud under a single start distribution.
  SamplerSpec alt = sampler;
  alt.kind = (sampler.kind == SamplerSpec::Kind::Ball) ? SamplerSpec::Kind::SphereSurface
                                                       : SamplerSpec::Kind::Ball;
  alt.radius = 1.25 * sampler.radius;
  std::vector<std::vector<double>> cloud;
  for (const SolutionSet& sol :
       {multistart_solve(sys, sampler, density, seed),
        multistart_solve(sys, alt, density, mix_seed(seed, 911))})
    for (const auto& p : sol.points)
      cloud.emplace_back(p.coords.begin(), p.coords.begin() + amb);
  if (cloud.size() < 20)
    throw PolyError("curve_chi_oracle: cloud too sparse, set is not 1-dimensional "
                    "or the start budget is too small");

  const std::size_t M = cloud.size();
  std::vector<double> nn(M, std::numeric_limits<double>::infinity());
  std::vector<double> lo(amb, std::numeric_limits<double>::infinity());
  std::vector<double> hi(amb, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < M; ++j)
      if (i != j) nn[i] = std::min(nn[i], dist(cloud[i], cloud[j]));
    for (std::size_t c = 0; c < amb; ++c) {
      lo[c] = std::min(lo[c], cloud[i][c]);
      hi[c] = std::max(hi[c], cloud[i][c]);
    }
  }
  std::vector<double> sorted_nn = nn;
  std::sort(sorted_nn.begin(), sorted_nn.end());
  double median_nn = sorted_nn[M / 2];
  double diag = 0.0;
  for (std::size_t c = 0; c < amb; ++c) diag += (hi[c] - lo[c]) * (hi[c] - lo[c]);
  diag = std::sqrt(diag);
  double sep = std::max(3.0 * median_nn, diag / 60.0);

  std::vector<int> kept;
  for (std::size_t i = 0; i < M; ++i) {
    bool ok = true;
    for (int k : kept)
      if (dist(cloud[i], cloud[k]) < sep) {
        ok = false;
        break;
      }
    if (ok) kept.push_back(static_cast<int>(i));
  }
  if (kept.size() < 8)
    throw PolyError("curve_chi_oracle: thinned cloud too small for linking");

  // Chain walking: grow each polyline from a seed point by repeatedly
  // stepping to the nearest unused point within the link radius, in both
  // directions. A chain whose two ends meet again is a loop.
  const double link_radius = std::max(4.0 * sep, diag / 8.0);
  std::vector<char> used(kept.size(), 0);
  CurveChi out;
  out.cloud_size = M;
  for (std::size_t s = 0; s < kept.size(); ++s) {
    if (used[s]) continue;
    std::deque<int> chain = {static_cast<int>(s)};
    used[s] = 1;
    for (int dir = 0; dir < 2; ++dir) {
      for (;;) {
        int cur = (dir == 0) ? chain.back() : chain.front();
        int best = -1;
        double best_d = link_radius;
        for (std::size_t j = 0; j < kept.size(); ++j) {
          if (used[j]) continue;
          double l = dist(cloud[kept[cur]], cloud[kept[j]]);
          if (l <= best_d) {
            best_d = l;
            best = static_cast<int>(j);
          }
        }
        if (best < 0) break;
        used[best] = 1;
        if (dir == 0)
          chain.push_back(best);
        else
          chain.push_front(best);
      }
    }
    if (chain.size() < 4)
      throw PolyError("curve_chi_oracle: ambiguous linking, stray cluster of " +
                      std::to_string(chain.size()) + " points");
    double closing = dist(cloud[kept[chain.front()]], cloud[kept[chain.back()]]);
    if (closing <= link_radius && chain.size() >= 8)
      ++out.loops;
    else
      ++out.arcs;
  }
  out.chi = out.arcs;
  return out;
}

long long predict_link_chi(long long chi_fiber, long long chi_W, int n, int l) {
  if (n < 2) throw PolyError("predict_link_chi: n must be at least 2");
  if (l < 1) throw PolyError("predict_link_chi: l must be at least 1");
  if (n % 2 == 0) return (l % 2 == 1) ? 2 * chi_fiber : 0;
  return (l % 2 == 1) ? chi_W - 2 * chi_fiber : chi_W;
}

long long invert_fiber_chi(long long chi_link_j, long long chi_W, int n) {
  if (n < 2) throw PolyError("invert_fiber_chi: n must be at least 2");
  long long diff = chi_W - chi_link_j;
  if (diff % 2 != 0)
    throw PolyError("invert_fiber_chi: parity violation, chi_W - chi_link is odd");
  long long half = diff / 2;
  return (n % 2 == 1) ? half : -half;  // (-1)^(n-1) * (chi_W - chi_link) / 2
}

std::string chi_key(const std::vector<std::size_t>& index_set) {
  if (index_set.empty()) return "W";
  std::ostringstream os;
  os << "link[";
  for (std::size_t i = 0; i < index_set.size(); ++i) {
    if (i) os << ",";
    os << index_set[i];
  }
  os << "]";
  return os.str();
}

namespace {

bool is_subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

long long parity_sign(int e) { return (((e % 2) + 2) % 2 == 0) ? 1 : -1; }

} // namespace

ChiReport consistency_report(const ChiInputs& in) {
  ChiReport rep;
  rep.n = in.n;
  rep.p = in.p;
  if (in.chi_W) rep.chis["W"] = *in.chi_W;
  for (const auto& [I, v] : in.links) rep.chis[chi_key(I)] = v;
  if (in.fiber) rep.chis["fiber"] = *in.fiber;

  auto add = [&rep](IdentityCheck c) {
    if (!c.informational && !c.pass) rep.algebraic_pass = false;
    rep.identities.push_back(std::move(c));
  };

  // preferred chi(M_F): inverted from a nonsingular single-component link
  std::optional<long long> inverted;
  std::string inv_src;
  if (in.chi_W) {
    for (const auto& [I, v] : in.links) {
      if (I.size() != 1 || in.singular.count(I)) continue;
      long long diff = in.chi_W->value - v.value;
      if (diff % 2 != 0) {
        add({"fiber inversion parity", "W, " + chi_key(I), diff % 2, 0, false, false});
        continue;
      }
      long long cand = invert_fiber_chi(v.value, in.chi_W->value, in.n);
      if (!inverted) {
        inverted = cand;
        inv_src = chi_key(I);
      } else {
        add({"fiber inversion agreement", inv_src + ", " + chi_key(I), *inverted,
             cand, *inverted == cand, false});
      }
    }
  }
  if (inverted) {
    rep.fiber_chi = *inverted;
    rep.fiber_provenance = "inverted";
    rep.chis["fiber(inverted)"] = {*inverted, "inverted from " + inv_src};
  } else if (in.fiber) {
    rep.fiber_chi = in.fiber->value;
    rep.fiber_provenance = in.fiber->provenance;
  }

  if (in.fiber && inverted)
    add({"direct fiber cross-check", "fiber, " + inv_src, in.fiber->value, *inverted,
         in.fiber->value == *inverted, false});

  if (rep.fiber_chi) {
    long long chF = *rep.fiber_chi;
    for (const auto& [I, vI] : in.links) {
      int l = static_cast<int>(I.size());
      bool info_I = in.singular.count(I) > 0;
      long long rhs = parity_sign(in.n - l) * 2 * chF;
      if (l == 1 && in.chi_W) {
        add({"component-drop difference", "W, " + chi_key(I) + ", fiber",
             in.chi_W->value - vI.value, rhs,
             in.chi_W->value - vI.value == rhs, info_I});
      }
      for (const auto& [J, vJ] : in.links) {
        if (J.size() + 1 != I.size() || !is_subset(J, I)) continue;
        bool info = info_I || in.singular.count(J) > 0;
        add({"component-drop difference", chi_key(J) + ", " + chi_key(I) + ", fiber",
             vJ.value - vI.value, rhs, vJ.value - vI.value == rhs, info});
      }
    }
    if (in.chi_W) {
      for (const auto& [I, v] : in.links) {
        long long pred = predict_link_chi(chF, in.chi_W->value, in.n,
                                          static_cast<int>(I.size()));
        add({"parity table", "W, fiber, " + chi_key(I), v.value, pred,
             v.value == pred, in.singular.count(I) > 0});
      }
    }
  }

  for (const auto& [I, vI] : in.links)
    for (const auto& [K, vK] : in.links) {
      if (K.size() + 2 != I.size() || !is_subset(K, I)) continue;
      bool info = in.singular.count(I) > 0 || in.singular.count(K) > 0;
      add({"skip-two equality", chi_key(K) + ", " + chi_key(I), vK.value, vI.value,
           vK.value == vI.value, info});
    }

  for (const auto& [key, claim] : in.claimed) {
    std::optional<long long> computed;
    if (key == "fiber")
      computed = rep.fiber_chi;
    else if (auto it = rep.chis.find(key); it != rep.chis.end())
      computed = it->second.value;
    if (!computed) continue;
    if (*computed != claim) {
      std::ostringstream os;
      os << "chi " << key << ": claimed " << claim << ", computed " << *computed;
      rep.disputes.push_back(os.str());
    }
  }
  return rep;
}

std::string ChiReport::to_text() const {
  std::ostringstream os;
  os << "chi audit (n=" << n << ", p=" << p << ")\n";
  for (const auto& [k, v] : chis)
    os << "  chi " << k << " = " << v.value << "  [" << v.provenance << "]\n";
  if (fiber_chi)
    os << "  chi fiber (preferred) = " << *fiber_chi << "  [" << fiber_provenance
       << "]\n";
  for (const auto& id : identities) {
    os << "  " << (id.pass ? "pass" : (id.informational ? "info" : "FAIL")) << "  "
       << id.name << ": " << id.lhs << " vs " << id.rhs << "  (" << id.inputs
       << ")\n";
  }
  for (const auto& d : disputes) os << "  dispute: " << d << "\n";
  os << "  identities " << (algebraic_pass ? "all hold" : "VIOLATED") << "\n";
  return os.str();
}

} // namespace openbook
