#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "plurirank/currents.hpp"

namespace plurirank {

struct DimensionEstimate {
  double value = 0.0;      // clamped to [0, 2k], the real dimension of P^k
  double std_error = 0.0;  // max of regression and batch-split standard errors
  double r_lo = 0.0;       // fit window (distance quantiles)
  double r_hi = 0.0;
  std::size_t n_points = 0;
  std::size_t n_pairs = 0;  // pairs actually used (after subsampling)
};

/// Correlation dimension of a weighted projective point cloud: slope of
/// log C(r) against log r, where C(r) is the product-weighted fraction of
/// point pairs closer than r. Pairs are subsampled deterministically (by
/// seed) to at most 2e6; the fit runs over the [q_lo, q_hi] quantile window
/// of the pair distances. Coincident points are excluded from the integral,
/// so duplicating every atom with split weights leaves the estimate
/// unchanged.
DimensionEstimate correlation_dimension(const std::vector<WeightedPoint>& points, double q_lo,
                                        double q_hi, std::uint64_t seed);

/// (r, C(r)) curve over a wide quantile span, for CSV export.
std::vector<std::pair<double, double>> correlation_curve(const std::vector<WeightedPoint>& points,
                                                         std::uint64_t seed, int n_bins = 64);

struct LipschitzImageReport {
  DimensionEstimate before;
  DimensionEstimate after;
};

/// Dimension estimates of a cloud and of its image under a projection; the
/// image of a Lipschitz map cannot gain dimension, which callers assert as
/// after.value <= before.value + 2 * max(std_error).
LipschitzImageReport lipschitz_image_check(const std::vector<WeightedPoint>& points,
                                           const Projection& pi, double q_lo, double q_hi,
                                           std::uint64_t seed, double tol_center = tol::center);

}  // namespace plurirank
