#include "openbook/systems.hpp"

#include <cmath>

#include "openbook/omega.hpp"

namespace openbook {

namespace {

std::uint64_t binom(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < r; ++i) v = v * (n - i) / (i + 1);
  return v;
}

// All r-column minors of a matrix given as polynomial rows (r = #rows).
std::vector<Polynomial> all_maximal_minors(const std::vector<std::vector<Polynomial>>& rows,
                                           std::size_t ncols) {
  const std::size_t r = rows.size();
  std::vector<Polynomial> minors;
  std::vector<std::size_t> cols(r);
  for (std::size_t i = 0; i < r; ++i) cols[i] = i;
  while (true) {
    std::vector<std::vector<Polynomial>> sub(r);
    for (std::size_t i = 0; i < r; ++i) {
      sub[i].reserve(r);
      for (std::size_t c : cols) sub[i].push_back(rows[i][c]);
    }
    minors.push_back(symbolic_det(sub));
    // next column combination
    std::size_t i = r;
    while (i > 0) {
      --i;
      if (cols[i] != i + ncols - r) {
        ++cols[i];
        for (std::size_t j = i + 1; j < r; ++j) cols[j] = cols[j - 1] + 1;
        break;
      }
      if (i == 0) return minors;
    }
    if (r == 0) return minors;
  }
}

void minor_guard(std::size_t rows, std::size_t ncols) {
  if (rows > 6 || ncols > 8)
    throw PolyError("minor construction refused: " + std::to_string(binom(ncols, rows)) +
                    " minors of size " + std::to_string(rows) + " over " +
                    std::to_string(ncols) + " columns exceeds the builder guard");
}

} // namespace

WorldSpec WorldSpec::sphere(std::size_t N, const Rational& r) {
  Polynomial rho(N);
  for (std::size_t i = 0; i < N; ++i) {
    Polynomial xi = Polynomial::variable(N, i);
    rho = rho + xi * xi;
  }
  WorldSpec W;
  W.constraints = {rho - Polynomial::constant(N, r * r)};
  W.radius = to_double(r);
  if (W.radius <= 0.0) throw PolyError("sphere radius must be positive");
  return W;
}

Polynomial lift(const Polynomial& f, std::size_t extra) {
  Polynomial r(f.num_vars() + extra);
  for (const auto& [e, c] : f.terms()) {
    Exponents le = e;
    le.resize(e.size() + extra, 0);
    r.add_term(le, c);
  }
  return r;
}

Polynomial symbolic_det(const std::vector<std::vector<Polynomial>>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw PolyError("determinant of empty matrix");
  for (const auto& row : m)
    if (row.size() != n) throw PolyError("determinant needs a square matrix");
  if (n == 1) return m[0][0];
  const std::size_t nv = m[0][0].num_vars();
  Polynomial acc(nv);
  for (std::size_t r = 0; r < n; ++r) {
    if (m[r][0].is_zero()) continue;
    std::vector<std::vector<Polynomial>> sub;
    sub.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r) continue;
      std::vector<Polynomial> row;
      row.reserve(n - 1);
      for (std::size_t c = 1; c < n; ++c) row.push_back(m[i][c]);
      sub.push_back(std::move(row));
    }
    Polynomial cof = m[r][0] * symbolic_det(sub);
    acc = (r % 2 == 0) ? acc + cof : acc - cof;
  }
  return acc;
}

PolyMap drop_component(const PolyMap& F, std::size_t i) {
  if (F.p() < 2) throw PolyError("cannot drop the only component");
  if (i < 1 || i > F.p()) throw PolyError("component index out of range");
  std::vector<Polynomial> comps;
  comps.reserve(F.p() - 1);
  for (std::size_t j = 0; j < F.p(); ++j)
    if (j != i - 1) comps.push_back(F.components[j]);
  return PolyMap(std::move(comps));
}

PolySystem sigma_F_W(const PolyMap& F, const WorldSpec& W) {
  const std::size_t N = F.num_vars();
  const std::size_t k = W.k();
  const std::size_t p = F.p();
  if (k + p > N)
    throw PolyError("rank condition vacuous: k + p > N");
  minor_guard(k + p, N);
  std::vector<std::vector<Polynomial>> rows;
  for (const auto& h : W.constraints) rows.push_back(h.gradient());
  for (const auto& f : F.components) rows.push_back(f.gradient());
  PolySystem sys;
  sys.ambient_vars = N;
  sys.description = "sigma_F_W";
  sys.equations = W.constraints;
  for (auto& mnr : all_maximal_minors(rows, N)) sys.equations.push_back(std::move(mnr));
  return sys;
}

PolySystem sigma_Fbar_W(const PolyMap& F, const WorldSpec& W, std::size_t chart_i) {
  const std::size_t N = F.num_vars();
  const std::size_t k = W.k();
  const std::size_t p = F.p();
  if (chart_i < 1 || chart_i > p) throw PolyError("chart index out of range");
  PolySystem sys;
  sys.ambient_vars = N;
  sys.description = "sigma_Fbar_W chart " + std::to_string(chart_i);
  sys.equations = W.constraints;
  sys.inequations.push_back({F.components[chart_i - 1], SignKind::NonZero});
  if (p >= 2) {
    const std::size_t rank_rows = k + p - 1;
    if (rank_rows <= N) {
      minor_guard(rank_rows, N);
      std::vector<std::vector<Polynomial>> rows;
      for (const auto& h : W.constraints) rows.push_back(h.gradient());
      for (std::size_t j = 1; j <= p; ++j) {
        if (j == chart_i) continue;
        rows.push_back(omega(F, chart_i, j));
      }
      for (auto& mnr : all_maximal_minors(rows, N)) sys.equations.push_back(std::move(mnr));
    } else {
      throw PolyError("rank condition vacuous: k + p - 1 > N");
    }
  }
  // p == 1: no omega rows, the rank condition is vacuous and the chart
  // system has no solutions off V(F) beyond W itself; callers treat the
  // projection to S^0 as everywhere-regular. Encode the empty system as
  // the constant 1 = 0 so the solution set is empty.
  if (p == 1) {
    sys.equations.push_back(Polynomial::constant(N, 1));
  }
  return sys;
}

std::vector<PolySystem> milnor_set(const PolyMap& F, MilnorKind which, const Rational& r) {
  if (r <= 0) throw PolyError("radius must be positive");
  WorldSpec W = WorldSpec::sphere(F.num_vars(), r);
  std::vector<PolySystem> systems;
  if (which == MilnorKind::Plain) {
    systems.push_back(sigma_F_W(F, W));
  } else {
    for (std::size_t i = 1; i <= F.p(); ++i) systems.push_back(sigma_Fbar_W(F, W, i));
  }
  return systems;
}

PolySystem lagrange_system(const std::vector<Polynomial>& constraints,
                           const Polynomial& objective) {
  if (constraints.empty()) throw PolyError("Lagrange system needs constraints");
  const std::size_t N = objective.num_vars();
  const std::size_t m = constraints.size();
  PolySystem sys;
  sys.ambient_vars = N;
  sys.aux_unknowns = m;
  sys.description = "lagrange";
  // grad l - sum lambda_i grad g_i = 0
  for (std::size_t c = 0; c < N; ++c) {
    Polynomial eq = lift(objective.derivative(c), m);
    for (std::size_t i = 0; i < m; ++i) {
      Polynomial lam = Polynomial::variable(N + m, N + i);
      eq = eq - lam * lift(constraints[i].derivative(c), m);
    }
    sys.equations.push_back(std::move(eq));
  }
  for (const auto& g : constraints) sys.equations.push_back(lift(g, m));
  return sys;
}

PolySystem carpeting_system(const PolyMap& F, const WorldSpec& W, std::size_t j,
                            double delta) {
  if (j < 1 || j > F.p()) throw PolyError("component index out of range");
  if (F.p() < 2) throw PolyError("carpeting check needs p >= 2");
  std::vector<Polynomial> constraints = W.constraints;
  for (std::size_t c = 0; c < F.p(); ++c)
    if (c != j - 1) constraints.push_back(F.components[c]);
  PolySystem sys = lagrange_system(constraints, F.components[j - 1]);
  sys.description = "carpeting f_" + std::to_string(j) + " delta " + std::to_string(delta);
  const std::size_t extra = sys.aux_unknowns;
  Polynomial fj = lift(F.components[j - 1], extra);
  sys.inequations.push_back({fj, SignKind::Positive});
  sys.inequations.push_back({fj - Polynomial::constant(fj.num_vars(), Rational(delta)),
                             SignKind::Negative});
  return sys;
}

} // namespace openbook
