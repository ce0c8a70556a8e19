#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "openbook/polymap.hpp"

namespace openbook {

// Vector of polynomials sharing one variable set; carries omega_{i,j},
// gradients, and residual vectors of the normal-frame calculus.
using PolyVector = std::vector<Polynomial>;

// omega_{i,j} = f_i * grad f_j - f_j * grad f_i. Indices are 1-based,
// antisymmetric in (i, j); omega_{i,i} is the zero vector.
PolyVector omega(const PolyMap& F, std::size_t i, std::size_t j);

// Circular relation f_i w_{j,k} + f_k w_{i,j} + f_j w_{k,i}; identically the
// zero vector for every map. Requires p >= 3 and i < j < k.
PolyVector milnor_equality_residual(const PolyMap& F, std::size_t i, std::size_t j,
                                    std::size_t k);

// Polynomial-cleared form of the normalized-gradient identity:
// ||F||^2 grad f_j - f_j sum_k f_k grad f_k  -  sum_{k != j} f_k omega_{k,j}.
// Identically zero; exposed symbolically so tests can assert exactness.
PolyVector normalized_gradient_identity(const PolyMap& F, std::size_t j);

// Max-norm of the cleared identity evaluated at a point off V(F).
double normalized_gradient_residual(const PolyMap& F, std::size_t j,
                                    std::span<const double> point);

struct ChartMatrix {
  std::size_t chart_index;          // 1-based i with f_i(point) != 0
  Eigen::MatrixXd entries;          // (p-1) x (p-1), symmetric
  std::vector<double> point;
  bool det_check;                   // det A vs ||F||^{2(p-2)} / f_i^{p-3}
  double det_rel_error;
  bool eigen_check;                 // spectrum {||F||^2/f_i (p-2), f_i (1)}
  double eigen_abs_error;
};

// Builds the (p-1)x(p-1) chart matrix at a numeric point with f_i != 0 and
// verifies its determinant and eigenvalue structure. For p = 2 the
// determinant formula is pre-simplified to det A = f_i so no division by
// f_i^{-1} occurs.
ChartMatrix chart_matrix(const PolyMap& F, std::size_t chart_i,
                         std::span<const double> point);

// Numeric rank of the stacked matrix of all omega_{i,j}(point), i < j.
// Threshold is relative to the largest singular value with an absolute
// fallback of 1e-12. Equals p-1 exactly off the critical set of F-bar.
std::size_t normal_frame_rank(const PolyMap& F, std::span<const double> point);

} // namespace openbook
