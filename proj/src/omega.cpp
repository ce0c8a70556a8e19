#include "openbook/omega.hpp"

#include <cmath>

namespace openbook {

namespace {

void check_index(const PolyMap& F, std::size_t i) {
  if (i < 1 || i > F.p()) throw PolyError("component index out of range");
}

PolyVector scaled_vec(const Polynomial& f, const std::vector<Polynomial>& v) {
  PolyVector r;
  r.reserve(v.size());
  for (const auto& g : v) r.push_back(f * g);
  return r;
}

PolyVector vec_sub(const PolyVector& a, const PolyVector& b) {
  PolyVector r;
  r.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] - b[i]);
  return r;
}

PolyVector vec_add(const PolyVector& a, const PolyVector& b) {
  PolyVector r;
  r.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] + b[i]);
  return r;
}

} // namespace

PolyVector omega(const PolyMap& F, std::size_t i, std::size_t j) {
  check_index(F, i);
  check_index(F, j);
  const Polynomial& fi = F.components[i - 1];
  const Polynomial& fj = F.components[j - 1];
  return vec_sub(scaled_vec(fi, fj.gradient()), scaled_vec(fj, fi.gradient()));
}

PolyVector milnor_equality_residual(const PolyMap& F, std::size_t i, std::size_t j,
                                    std::size_t k) {
  if (F.p() < 3) throw PolyError("Milnor's equality needs p >= 3");
  if (!(i < j && j < k)) throw PolyError("indices must satisfy i < j < k");
  check_index(F, k);
  const Polynomial& fi = F.components[i - 1];
  const Polynomial& fj = F.components[j - 1];
  const Polynomial& fk = F.components[k - 1];
  PolyVector r = scaled_vec(fi, omega(F, j, k));
  r = vec_add(r, scaled_vec(fk, omega(F, i, j)));
  r = vec_add(r, scaled_vec(fj, omega(F, k, i)));
  return r;
}

PolyVector normalized_gradient_identity(const PolyMap& F, std::size_t j) {
  check_index(F, j);
  const std::size_t N = F.num_vars();
  Polynomial n2 = norm_squared(F);
  // sum_k f_k grad f_k
  PolyVector s(N, Polynomial(N));
  for (const auto& f : F.components) s = vec_add(s, scaled_vec(f, f.gradient()));
  PolyVector lhs = vec_sub(scaled_vec(n2, F.components[j - 1].gradient()),
                           scaled_vec(F.components[j - 1], s));
  PolyVector rhs(N, Polynomial(N));
  for (std::size_t k = 1; k <= F.p(); ++k) {
    if (k == j) continue;
    rhs = vec_add(rhs, scaled_vec(F.components[k - 1], omega(F, k, j)));
  }
  return vec_sub(lhs, rhs);
}

double normalized_gradient_residual(const PolyMap& F, std::size_t j,
                                    std::span<const double> point) {
  std::vector<double> vals = F.evaluate(point);
  double n2 = 0.0;
  for (double v : vals) n2 += v * v;
  if (std::sqrt(n2) <= 1e-9) throw PolyError("point lies on V(F)");
  PolyVector res = normalized_gradient_identity(F, j);
  double m = 0.0;
  for (const auto& comp : res) m = std::max(m, std::abs(comp.evaluate(point)));
  return m;
}

ChartMatrix chart_matrix(const PolyMap& F, std::size_t chart_i,
                         std::span<const double> point) {
  check_index(F, chart_i);
  const std::size_t p = F.p();
  if (p < 2) throw PolyError("chart matrix needs p >= 2");
  std::vector<double> f = F.evaluate(point);
  double fi = f[chart_i - 1];
  if (std::abs(fi) <= 1e-9) throw PolyError("chart condition violated: |f_i| <= 1e-9");
  double n2 = 0.0;
  for (double v : f) n2 += v * v;

  const std::size_t m = p - 1;
  // idx maps chart-matrix row/column to the component it represents.
  auto idx = [&](std::size_t r) { return r < chart_i - 1 ? r : r + 1; };
  Eigen::MatrixXd A(m, m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      A(r, c) = (r == c) ? (n2 - f[idx(r)] * f[idx(r)]) / fi
                         : -f[idx(r)] * f[idx(c)] / fi;
    }
  }

  ChartMatrix out;
  out.chart_index = chart_i;
  out.entries = A;
  out.point.assign(point.begin(), point.end());

  // det A = ||F||^{2(p-2)} / f_i^{p-3}; at p = 2 this reduces to f_i.
  double expected_det;
  if (p == 2) {
    expected_det = fi;
  } else {
    expected_det = std::pow(n2, static_cast<double>(p - 2)) /
                   std::pow(fi, static_cast<double>(p) - 3.0);
  }
  double det = A.determinant();
  double denom = std::max(std::abs(expected_det), 1e-300);
  out.det_rel_error = std::abs(det - expected_det) / denom;
  out.det_check = out.det_rel_error <= 1e-9;

  // Spectrum: ||F||^2/f_i with multiplicity p-2 and f_i with multiplicity 1.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  Eigen::VectorXd ev = es.eigenvalues();
  std::vector<double> expected(m, n2 / fi);
  expected[0] = fi;
  std::sort(expected.begin(), expected.end());
  double err = 0.0;
  for (std::size_t r = 0; r < m; ++r) err = std::max(err, std::abs(ev(r) - expected[r]));
  double scale = 1.0 + std::max(std::abs(n2 / fi), std::abs(fi));
  out.eigen_abs_error = err;
  out.eigen_check = err <= 1e-8 * scale;
  return out;
}

std::size_t normal_frame_rank(const PolyMap& F, std::span<const double> point) {
  std::vector<double> f = F.evaluate(point);
  double n2 = 0.0;
  for (double v : f) n2 += v * v;
  if (std::sqrt(n2) <= 1e-9) throw PolyError("point lies on V(F)");
  const std::size_t p = F.p();
  const std::size_t N = F.num_vars();
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i <= p; ++i) {
    for (std::size_t j = i + 1; j <= p; ++j) {
      PolyVector w = omega(F, i, j);
      std::vector<double> row(N);
      for (std::size_t c = 0; c < N; ++c) row[c] = w[c].evaluate(point);
      rows.push_back(std::move(row));
    }
  }
  Eigen::MatrixXd M(rows.size(), N);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < N; ++c) M(r, c) = rows[r][c];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  Eigen::VectorXd sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  double thresh = std::max(1e-9 * sv(0), 1e-12);
  std::size_t rank = 0;
  for (Eigen::Index r = 0; r < sv.size(); ++r)
    if (sv(r) > thresh) ++rank;
  return rank;
}

} // namespace openbook
