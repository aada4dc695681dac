#include "plurirank/types.hpp"

#include <Eigen/SVD>

namespace plurirank {

int numerical_rank(const MatrixXcd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = rel_tol * s(0);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

MatrixXcd range_basis(const MatrixXcd& m, double rel_tol) {
  if (m.size() == 0) return MatrixXcd(m.rows(), 0);
  Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return MatrixXcd(m.rows(), 0);
  const double cut = rel_tol * s(0);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

double subspace_distance(const MatrixXcd& basis_a, const MatrixXcd& basis_b) {
  const Eigen::Index n = basis_a.rows();
  if (basis_b.rows() != n) throw DomainError("subspace_distance: ambient dimension mismatch");
  MatrixXcd pa = basis_a * basis_a.adjoint();
  MatrixXcd pb = basis_b * basis_b.adjoint();
  Eigen::JacobiSVD<MatrixXcd> svd(pa - pb);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double pairwise_sum(const double* data, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace plurirank
