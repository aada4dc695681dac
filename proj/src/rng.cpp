#include "plurirank/rng.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

namespace plurirank {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream RngStream::derived(std::uint64_t seed, std::uint64_t index) {
  return RngStream(splitmix64(seed ^ splitmix64(index + 1)));
}

double RngStream::uniform() {
  // 53 random bits -> [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex RngStream::cgaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return {re, im};
}

VectorXcd RngStream::gaussian_vector(int n) {
  VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = cgaussian();
  return v;
}

MatrixXcd RngStream::gaussian_matrix(int rows, int cols) {
  MatrixXcd m(rows, cols);
  // row-major fill order is part of the determinism contract
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cgaussian();
  return m;
}

MatrixXcd haar_unitary(int n, RngStream& rng) {
  if (n <= 0) throw DomainError("haar_unitary: n must be positive");
  MatrixXcd g = rng.gaussian_matrix(n, n);
  Eigen::HouseholderQR<MatrixXcd> qr(g);
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(n, n);
  MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    const Complex phase = (a > 0.0) ? d / a : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

VectorXcd haar_sphere_point(const MatrixXcd& basis, RngStream& rng) {
  if (basis.cols() == 0) throw DomainError("haar_sphere_point: empty basis");
  VectorXcd g = rng.gaussian_vector(static_cast<int>(basis.cols()));
  VectorXcd z = basis * g;
  const double n = z.norm();
  if (n == 0.0) throw DomainError("haar_sphere_point: degenerate draw");
  return z / n;
}

}  // namespace plurirank
