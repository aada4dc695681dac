#include "plurirank/exterior.hpp"

#include <algorithm>

namespace plurirank {

std::uint64_t binomial(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t num = 1;
  for (int i = 0; i < r; ++i) {
    num = num * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
  }
  return num;
}

MultiIndex::MultiIndex(std::vector<int> entries, int k) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] < 0 || entries_[i] >= k)
      throw DomainError("MultiIndex: entry out of range [0, k)");
    if (i > 0 && entries_[i] <= entries_[i - 1])
      throw DomainError("MultiIndex: entries must be strictly increasing");
  }
}

bool MultiIndex::contains(int v) const {
  return std::binary_search(entries_.begin(), entries_.end(), v);
}

std::vector<MultiIndex> enumerate_multiindices(int k, int p) {
  if (k < 0 || p < 0 || p > k) throw DomainError("enumerate_multiindices: need 0 <= p <= k");
  std::vector<MultiIndex> out;
  out.reserve(binomial(k, p));
  std::vector<int> cur(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) cur[static_cast<std::size_t>(i)] = i;
  if (p == 0) {
    out.emplace_back(std::vector<int>{}, k);
    return out;
  }
  while (true) {
    out.emplace_back(cur, k);
    int i = p - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == k - p + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < p; ++j)
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::size_t multiindex_position(const MultiIndex& mi, int k) {
  // lexicographic rank in the combinatorial number system
  const int p = mi.size();
  std::size_t rank = 0;
  int prev = -1;
  for (int i = 0; i < p; ++i) {
    for (int v = prev + 1; v < mi[i]; ++v) rank += binomial(k - 1 - v, p - 1 - i);
    prev = mi[i];
  }
  return rank;
}

int insertion_sign(int x, const MultiIndex& k_set) {
  int below = 0;
  for (int i = 0; i < k_set.size(); ++i) {
    if (k_set[i] == x) throw DomainError("insertion_sign: x already in multi-index");
    if (k_set[i] < x) ++below;
  }
  return (below % 2 == 0) ? 1 : -1;
}

PPMatrix PPMatrix::zero(int k, int p) {
  const auto n = static_cast<Eigen::Index>(binomial(k, p));
  return PPMatrix{k, p, MatrixXcd::Zero(n, n)};
}

namespace {

void check_hermitian(const MatrixXcd& h, const char* what) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double defect = (h - h.adjoint().eval()).cwiseAbs().maxCoeff();
  if (defect > tol::hermitian * scale)
    throw DomainError(std::string(what) + ": matrix is not Hermitian within tolerance");
}

void check_shape(int k, int p, const MatrixXcd& h, const char* what) {
  if (k < 0 || k > kMaxDim || p < 0 || p > k)
    throw DomainError(std::string(what) + ": need 0 <= p <= k <= 8");
  const auto n = static_cast<Eigen::Index>(binomial(k, p));
  if (h.rows() != n || h.cols() != n)
    throw DomainError(std::string(what) + ": coefficient matrix has wrong shape");
}

}  // namespace

PPMatrix PPMatrix::from_matrix(int k, int p, MatrixXcd h) {
  check_shape(k, p, h, "PPMatrix");
  if (h.size() > 0) check_hermitian(h, "PPMatrix");
  return PPMatrix{k, p, std::move(h)};
}

PPForm PPForm::zero(int k, int p) {
  const auto n = static_cast<Eigen::Index>(binomial(k, p));
  return PPForm{k, p, MatrixXcd::Zero(n, n)};
}

PPForm PPForm::identity(int k, int p) {
  const auto n = static_cast<Eigen::Index>(binomial(k, p));
  return PPForm{k, p, MatrixXcd::Identity(n, n)};
}

PPForm PPForm::from_matrix(int k, int p, MatrixXcd h) {
  check_shape(k, p, h, "PPForm");
  if (h.size() > 0) check_hermitian(h, "PPForm");
  return PPForm{k, p, std::move(h)};
}

PluckerVector plucker_from_frame(const MatrixXcd& frame) {
  const int k = static_cast<int>(frame.rows());
  const int p = static_cast<int>(frame.cols());
  if (k <= 0 || k > kMaxDim) throw DomainError("plucker_from_frame: ambient dimension out of range");
  if (p > k) throw DomainError("plucker_from_frame: more frame vectors than ambient dimension");
  const auto basis = enumerate_multiindices(k, p);
  VectorXcd coeffs(static_cast<Eigen::Index>(basis.size()));
  MatrixXcd minor(p, p);
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    const auto& mi = basis[idx];
    for (int r = 0; r < p; ++r) minor.row(r) = frame.row(mi[r]);
    coeffs(static_cast<Eigen::Index>(idx)) = (p == 0) ? Complex(1, 0) : minor.determinant();
  }
  return PluckerVector{k, p, std::move(coeffs)};
}

PPMatrix pp_from_plucker(const PluckerVector& w) {
  if (w.coeffs.size() != static_cast<Eigen::Index>(binomial(w.k, w.p)))
    throw DomainError("pp_from_plucker: coefficient length mismatch");
  return PPMatrix{w.k, w.p, (w.coeffs * w.coeffs.adjoint()).eval()};
}

MatrixXcd contract_beta(const PPMatrix& t) {
  if (t.p < 1) throw DomainError("contract_beta: undefined for p = 0");
  const int k = t.k;
  const int p = t.p;
  const auto k_sets = enumerate_multiindices(k, p - 1);
  MatrixXcd m = MatrixXcd::Zero(k, k);
  std::vector<int> scratch(static_cast<std::size_t>(p));
  auto join_position = [&](const MultiIndex& ks, int x) {
    // position of sort(K u {x}) in the p-basis
    scratch.clear();
    for (int i = 0; i < ks.size(); ++i) scratch.push_back(ks[i]);
    scratch.insert(std::upper_bound(scratch.begin(), scratch.end(), x), x);
    return multiindex_position(MultiIndex(scratch, k), k);
  };
  for (const auto& ks : k_sets) {
    for (int a = 0; a < k; ++a) {
      if (ks.contains(a)) continue;
      const int sa = insertion_sign(a, ks);
      const auto ia = join_position(ks, a);
      for (int b = 0; b < k; ++b) {
        if (ks.contains(b)) continue;
        const int sb = insertion_sign(b, ks);
        const auto ib = join_position(ks, b);
        m(a, b) += static_cast<double>(sa * sb) *
                   t.h(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib));
      }
    }
  }
  return m;
}

double pair(const PPMatrix& t, const PPForm& phi) {
  if (t.k != phi.k || t.p != phi.p) throw DomainError("pair: (k,p) mismatch");
  return t.h.cwiseProduct(phi.h.conjugate()).sum().real();
}

double trace(const PPMatrix& t) { return t.h.diagonal().sum().real(); }

MatrixXcd compound_matrix(const MatrixXcd& a, int p) {
  if (a.rows() != a.cols()) throw DomainError("compound_matrix: square matrix required");
  const int k = static_cast<int>(a.rows());
  if (p < 0 || p > k) throw DomainError("compound_matrix: need 0 <= p <= k");
  const auto basis = enumerate_multiindices(k, p);
  const auto n = static_cast<Eigen::Index>(basis.size());
  MatrixXcd g(n, n);
  MatrixXcd minor(p, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c)
          minor(r, c) = a(basis[static_cast<std::size_t>(i)][r],
                          basis[static_cast<std::size_t>(j)][c]);
      g(i, j) = (p == 0) ? Complex(1, 0) : minor.determinant();
    }
  }
  return g;
}

}  // namespace plurirank
