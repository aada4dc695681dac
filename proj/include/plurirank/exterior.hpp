#pragma once

#include <vector>

#include "plurirank/types.hpp"

namespace plurirank {

// Complex exterior algebra over C^k in degree (p,p), stored densely.
//
// Conventions:
//  * Multi-indices I = (i_1 < ... < i_p) enumerate the basis of the p-th
//    wedge power; enumeration is lexicographic and stable.
//  * A (p,p)-vector is stored as the Hermitian matrix H of its coefficients
//    over multi-index pairs, with the classical i^{p^2} sign factor absorbed:
//    the decomposable strongly positive vector of a frame with Plucker vector
//    w is represented by w w*, which makes strong positivity manifest and all
//    pairings real.
//  * Combinatorial constants ((p-1)! and friends) are dropped from the
//    contraction; only ranges and positivity are consumed downstream.

std::uint64_t binomial(int n, int r);

/// Strictly increasing p-tuple of integers in [0, k).
class MultiIndex {
 public:
  MultiIndex(std::vector<int> entries, int k);

  const std::vector<int>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  bool contains(int v) const;

  bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }

 private:
  std::vector<int> entries_;
};

/// All C(k,p) multi-indices in lexicographic order.
std::vector<MultiIndex> enumerate_multiindices(int k, int p);

/// Lexicographic position of a multi-index among all p-subsets of [0, k).
std::size_t multiindex_position(const MultiIndex& mi, int k);

/// Sign of the permutation that moves x into sorted position in {x} u K,
/// i.e. (-1)^(number of entries of K below x). x must not lie in K.
int insertion_sign(int x, const MultiIndex& k_set);

/// Coordinates of v_1 ^ ... ^ v_p over the multi-index basis.
struct PluckerVector {
  int k = 0;
  int p = 0;
  VectorXcd coeffs;  // length C(k,p), lexicographic order
};

/// Coefficient matrix of a (p,p)-vector. PSD whenever the vector is strongly
/// positive.
struct PPMatrix {
  int k = 0;
  int p = 0;
  MatrixXcd h;  // C(k,p) x C(k,p), Hermitian

  static PPMatrix zero(int k, int p);
  /// Validates Hermitian symmetry within tol::hermitian (relative).
  static PPMatrix from_matrix(int k, int p, MatrixXcd h);
};

/// Coefficient matrix of a (p,p) test form (cotangent side).
struct PPForm {
  int k = 0;
  int p = 0;
  MatrixXcd h;  // Hermitian

  static PPForm zero(int k, int p);
  static PPForm identity(int k, int p);
  static PPForm from_matrix(int k, int p, MatrixXcd h);
};

/// coeffs[I] = det of the p x p minor of `frame` (k x p) with rows I.
/// Multilinear and alternating in the frame columns.
PluckerVector plucker_from_frame(const MatrixXcd& frame);

/// Rank-one representation w w* of the decomposable vector with Plucker
/// coordinates w; trace equals |w|^2.
PPMatrix pp_from_plucker(const PluckerVector& w);

/// Contraction of a (p,p)-vector against the (p-1)-th power of the standard
/// Hermitian (1,1) form:
///   M[a][b] = sum over (p-1)-multi-indices K avoiding a and b of
///             sign(a,K) sign(b,K) H[K u a][K u b].
/// For strongly positive inputs M is PSD and range(M) spans the constituent
/// vectors; constant factors are dropped.
MatrixXcd contract_beta(const PPMatrix& t);

/// Real part of the Frobenius pairing sum_{I,J} H_t[I][J] conj(H_phi[I][J]).
/// Exactly real (up to roundoff) when both sides are Hermitian.
double pair(const PPMatrix& t, const PPForm& phi);

/// Sum of diagonal coefficients; equals pair(t, identity form) and |w|^2 for
/// a decomposable vector.
double trace(const PPMatrix& t);

/// p-th compound matrix: entry [I][J] = det A(I rows, J cols). This is the
/// map induced on Plucker coordinates by A, so
/// plucker_from_frame(A * F) = compound_matrix(A, p) * plucker_from_frame(F).
MatrixXcd compound_matrix(const MatrixXcd& a, int p);

}  // namespace plurirank
