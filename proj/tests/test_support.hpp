#pragma once

#include <vector>

#include "plurirank/positivity.hpp"
#include "plurirank/rng.hpp"

namespace test_support {

using plurirank::MatrixXcd;
using plurirank::RngStream;
using plurirank::SPTerm;
using plurirank::SPVector;

// Random strongly positive vector with Gaussian frames.
inline SPVector random_sp(RngStream& rng, int dim, int p, int n_terms) {
  std::vector<SPTerm> terms;
  terms.reserve(static_cast<std::size_t>(n_terms));
  for (int i = 0; i < n_terms; ++i) {
    const double lambda = std::abs(rng.gaussian()) + 0.05;
    terms.push_back(SPTerm{lambda, rng.gaussian_matrix(dim, p)});
  }
  return SPVector::from_terms(dim, p, std::move(terms));
}

// Random shape within the given envelopes (dim >= 2, 1 <= p <= min(p_max, dim)).
struct Shape {
  int dim;
  int p;
  int terms;
};

inline Shape random_shape(RngStream& rng, int dim_max, int p_max, int terms_max) {
  const int dim = 2 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(dim_max - 1));
  const int p = 1 + static_cast<int>(rng.next_u64() %
                                     static_cast<std::uint64_t>(std::min(p_max, dim)));
  const int terms = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(terms_max));
  return Shape{dim, p, terms};
}

}  // namespace test_support
