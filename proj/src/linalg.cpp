#include "fmpo/linalg.hpp"

#include <algorithm>

namespace fmpo {

namespace {

double cutoff(const Eigen::VectorXd& sv, double rel_tol) {
  const double smax = sv.size() ? sv(0) : 0.0;
  return rel_tol * std::max(1.0, smax);
}

}  // namespace

Mat nullspace(const Mat& m, double rel_tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return Mat::Identity(n, n);
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = cutoff(sv, rel_tol);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixV().rightCols(n - r);
}

Mat range_basis(const Mat& m, double rel_tol) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cut = cutoff(sv, rel_tol);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

int numerical_rank(const Mat& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  const double cut = cutoff(sv, rel_tol);
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return r;
}

Mat pinv(const Mat& m, double rel_tol) {
  if (m.size() == 0) return Mat::Zero(m.cols(), m.rows());
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cut = cutoff(sv, rel_tol);
  Mat out = Mat::Zero(m.cols(), m.rows());
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > cut) out += svd.matrixV().col(k) * (1.0 / sv(k)) * svd.matrixU().col(k).adjoint();
  return out;
}

Mat to_matrix(const GradedTensor& t) {
  if (t.rank() != 2) throw InputError("expected a two-leg tensor");
  const int r = t.leg(0).dim(), c = t.leg(1).dim();
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = t[static_cast<std::size_t>(i) * c + j];
  return m;
}

GradedTensor from_matrix(const Mat& m, const GradedSpace& row, const GradedSpace& col, int parity) {
  if (m.rows() != row.dim() || m.cols() != col.dim()) throw InputError("matrix shape mismatch");
  std::vector<complex> v(m.size());
  for (int i = 0; i < row.dim(); ++i)
    for (int j = 0; j < col.dim(); ++j) v[static_cast<std::size_t>(i) * col.dim() + j] = m(i, j);
  return GradedTensor::projected({row, col}, parity, std::move(v));
}

}  // namespace fmpo
