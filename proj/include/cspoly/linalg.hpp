#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <span>
#include <stdexcept>
#include <vector>

#include "cspoly/angle.hpp"
#include "cspoly/curve.hpp"

namespace cspoly {

using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultRankTol = 1e-8;

inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

/// Number of singular values above rel_tol * sigma_max. The zero matrix has
/// rank 0 regardless of tolerance.
inline int rank_with_tolerance(const Matrix& m, double rel_tol = kDefaultRankTol) {
  if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("rank_with_tolerance: empty matrix");
  if (rel_tol <= 0.0 || rel_tol >= 1.0)
    throw std::invalid_argument("rank_with_tolerance: rel_tol must be in (0, 1)");
  require_finite(m, "rank_with_tolerance");
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return 0;
  const double cut = rel_tol * sv[0];
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++rank;
  return rank;
}

/// Orthonormal basis of the numerical null space (columns). Empty for a
/// full-column-rank matrix.
inline Matrix kernel_basis(const Matrix& m, double rel_tol = kDefaultRankTol) {
  if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("kernel_basis: empty matrix");
  require_finite(m, "kernel_basis");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  const double cut = rel_tol * smax;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (smax > 0.0 && sv[i] > cut) ++rank;
  const Eigen::Index dim = m.cols() - rank;
  return svd.matrixV().rightCols(dim);
}

struct IndependenceCheck {
  bool independent = false;
  double min_singular = 0.0;
  double max_singular = 0.0;
};

/// Whether the moment-curve images of the given angles are linearly
/// independent. Inputs must be distinct and pairwise non-antipodal; both are
/// validated exactly on the rationals before any evaluation.
inline IndependenceCheck check_moment_independence(int k, std::span<const Angle> points,
                                                   double rel_tol = kDefaultRankTol) {
  if (k < 1) throw std::invalid_argument("check_moment_independence: k must be >= 1");
  if (points.empty() || points.size() > static_cast<std::size_t>(2 * k))
    throw std::invalid_argument("check_moment_independence: need 1..2k points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i] == points[j])
        throw std::invalid_argument("check_moment_independence: duplicate points");
      if (points[i].antipode() == points[j])
        throw std::invalid_argument("check_moment_independence: antipodal points");
    }
  }
  Matrix m(points.size(), 2 * k);
  for (std::size_t i = 0; i < points.size(); ++i)
    m.row(static_cast<Eigen::Index>(i)) = eval_moment_curve(k, points[i]).transpose();
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  IndependenceCheck out;
  out.max_singular = sv[0];
  out.min_singular = sv[sv.size() - 1];
  out.independent = out.max_singular > 0.0 && out.min_singular > rel_tol * out.max_singular;
  return out;
}

}  // namespace cspoly
