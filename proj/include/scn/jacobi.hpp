#pragma once

// Cyclic Jacobi eigensolver for small dense symmetric matrices.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Jacobi>

namespace scn {

template <typename Scalar>
struct SymmetricEigen {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues;                // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;  // columns
  int sweeps = 0;
  bool converged = false;
};

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Sweeps visit (p, q) pairs in row-major order, so results are
/// deterministic. Eigenvalues are returned in ascending order; each
/// eigenvector is signed so that its largest-magnitude entry is positive.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& matrix,
                                                      int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  eigen_assert(matrix.rows() == matrix.cols());

  const Eigen::Index n = matrix.rows();
  Mat a = matrix;
  Mat v = Mat::Identity(n, n);
  SymmetricEigen<Scalar> out;

  const Scalar scale = std::max(a.norm(), std::numeric_limits<Scalar>::min());
  const Scalar tol = std::numeric_limits<Scalar>::epsilon() * scale;
  auto off_norm = [&] {
    Scalar s(0);
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
    return std::sqrt(Scalar(2) * s);
  };

  for (out.sweeps = 0; out.sweeps < max_sweeps; ++out.sweeps) {
    if (off_norm() <= tol) {
      out.converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        a(p, q) = a(q, p) = Scalar(0);
        v.applyOnTheRight(p, q, rot);
      }
    }
  }
  if (!out.converged) out.converged = off_norm() <= tol;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src);
    auto col = v.col(src);
    Eigen::Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    out.eigenvectors.col(k) = col(imax) < Scalar(0) ? Mat(-col) : Mat(col);
  }
  return out;
}

}  // namespace scn
