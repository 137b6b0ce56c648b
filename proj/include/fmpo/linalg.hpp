#pragma once

// Dense complex linear algebra helpers on top of Eigen.

#include <Eigen/Dense>
#include <vector>

#include "fmpo/graded.hpp"

namespace fmpo {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Orthonormal basis of the null space of m (columns). Singular values below
// rel_tol * max(1, sigma_max) count as zero.
Mat nullspace(const Mat& m, double rel_tol);

// Orthonormal basis of the column space of m.
Mat range_basis(const Mat& m, double rel_tol);

// Moore-Penrose pseudo-inverse with the same thresholding.
Mat pinv(const Mat& m, double rel_tol);

int numerical_rank(const Mat& m, double rel_tol);

// Two-leg tensor <-> matrix (row = leg 0).
Mat to_matrix(const GradedTensor& t);
GradedTensor from_matrix(const Mat& m, const GradedSpace& row, const GradedSpace& col, int parity);

}  // namespace fmpo
