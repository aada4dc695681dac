#include "plurirank/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "plurirank/rng.hpp"

namespace plurirank {

namespace {

constexpr std::size_t kMaxPairs = 2'000'000;
constexpr int kFitBins = 32;
constexpr int kBatches = 8;

struct PairSample {
  // Pairs with strictly positive distance, sorted ascending by distance.
  std::vector<double> distance;
  std::vector<double> weight;  // product weights, same order
  std::vector<int> batch;      // deterministic batch id per pair, same order
  double total_weight = 0.0;
  std::size_t n_pairs = 0;  // pairs evaluated (including coincident ones)
};

// Pair index r in [0, n(n-1)/2) -> (i, j), lexicographic over i < j.
std::size_t pairs_before_row(std::size_t i, std::size_t n) {
  return i * (n - 1) - i * (i - 1) / 2;
}

PairSample collect_pairs(const std::vector<WeightedPoint>& points, std::uint64_t seed) {
  const std::size_t n = points.size();
  const std::size_t total = n * (n - 1) / 2;
  std::vector<std::size_t> ranks;
  if (total <= kMaxPairs) {
    ranks.resize(total);
    for (std::size_t r = 0; r < total; ++r) ranks[r] = r;
  } else {
    // Deterministic distinct subsample of pair ranks.
    std::mt19937_64 engine(splitmix64(seed ^ 0x70616972ULL));
    std::unordered_set<std::size_t> chosen;
    chosen.reserve(kMaxPairs * 2);
    while (chosen.size() < kMaxPairs) chosen.insert(engine() % total);
    ranks.assign(chosen.begin(), chosen.end());
    std::sort(ranks.begin(), ranks.end());
  }

  PairSample sample;
  sample.n_pairs = ranks.size();
  sample.distance.reserve(ranks.size());
  sample.weight.reserve(ranks.size());
  sample.batch.reserve(ranks.size());

  std::size_t i = 0;
  std::size_t next_row_start = pairs_before_row(1, n);
  std::vector<std::size_t> order;  // indices into the pair arrays, for sorting
  for (std::size_t idx = 0; idx < ranks.size(); ++idx) {
    const std::size_t r = ranks[idx];
    while (r >= next_row_start) {
      ++i;
      next_row_start = pairs_before_row(i + 1, n);
    }
    const std::size_t j = i + 1 + (r - pairs_before_row(i, n));
    const double d = fs_distance(points[i].x, points[j].x);
    if (d > 0.0) {
      sample.distance.push_back(d);
      sample.weight.push_back(points[i].weight * points[j].weight);
      sample.batch.push_back(static_cast<int>(idx % kBatches));
    }
  }
  order.resize(sample.distance.size());
  for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sample.distance[a] < sample.distance[b]; });
  PairSample sorted;
  sorted.n_pairs = sample.n_pairs;
  sorted.distance.reserve(order.size());
  sorted.weight.reserve(order.size());
  sorted.batch.reserve(order.size());
  for (std::size_t t : order) {
    sorted.distance.push_back(sample.distance[t]);
    sorted.weight.push_back(sample.weight[t]);
    sorted.batch.push_back(sample.batch[t]);
  }
  sorted.total_weight = pairwise_sum(sorted.weight);
  return sorted;
}

// Weighted quantile over the sorted sample.
double weighted_quantile(const PairSample& s, double q) {
  const double target = q * s.total_weight;
  double acc = 0.0;
  for (std::size_t t = 0; t < s.distance.size(); ++t) {
    acc += s.weight[t];
    if (acc >= target) return s.distance[t];
  }
  return s.distance.back();
}

// C(r) at each grid radius for pairs whose batch passes the filter;
// `denominator` is the total weight of those pairs.
std::vector<double> correlation_values(const PairSample& s, const std::vector<double>& grid,
                                       int batch_filter, double denominator) {
  std::vector<double> c(grid.size(), 0.0);
  double acc = 0.0;
  std::size_t t = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    while (t < s.distance.size() && s.distance[t] < grid[g]) {
      if (batch_filter < 0 || s.batch[t] == batch_filter) acc += s.weight[t];
      ++t;
    }
    c[g] = acc / denominator;
  }
  return c;
}

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  int points = 0;
};

SlopeFit fit_loglog(const std::vector<double>& grid, const std::vector<double>& c) {
  std::vector<double> xs, ys;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (c[g] > 0.0) {
      xs.push_back(std::log(grid[g]));
      ys.push_back(std::log(c[g]));
    }
  }
  SlopeFit fit;
  fit.points = static_cast<int>(xs.size());
  if (fit.points < 2) return fit;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    mx += xs[t];
    my += ys[t];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    sxx += (xs[t] - mx) * (xs[t] - mx);
    sxy += (xs[t] - mx) * (ys[t] - my);
  }
  fit.slope = sxy / sxx;
  if (fit.points > 2) {
    double sse = 0.0;
    const double b0 = my - fit.slope * mx;
    for (std::size_t t = 0; t < xs.size(); ++t) {
      const double e = ys[t] - (b0 + fit.slope * xs[t]);
      sse += e * e;
    }
    fit.std_error = std::sqrt(sse / (n - 2.0) / sxx);
  }
  return fit;
}

std::vector<double> log_grid(double lo, double hi, int bins) {
  std::vector<double> grid(static_cast<std::size_t>(bins));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int g = 0; g < bins; ++g)
    grid[static_cast<std::size_t>(g)] =
        std::exp(llo + (lhi - llo) * static_cast<double>(g) / static_cast<double>(bins - 1));
  return grid;
}

}  // namespace

DimensionEstimate correlation_dimension(const std::vector<WeightedPoint>& points, double q_lo,
                                        double q_hi, std::uint64_t seed) {
  if (points.size() < 100) throw DomainError("correlation_dimension: need at least 100 points");
  if (!(q_lo > 0.0 && q_lo < q_hi && q_hi < 1.0))
    throw DomainError("correlation_dimension: need 0 < q_lo < q_hi < 1");
  for (const auto& wp : points)
    if (!(wp.weight > 0.0)) throw DomainError("correlation_dimension: weights must be positive");

  const PairSample sample = collect_pairs(points, seed);
  if (sample.distance.empty() || !(sample.total_weight > 0.0))
    throw DomainError("correlation_dimension: all points coincide");
  const double r_lo = weighted_quantile(sample, q_lo);
  const double r_hi = weighted_quantile(sample, q_hi);
  if (!(r_lo > 0.0 && r_lo < r_hi))
    throw DomainError("correlation_dimension: degenerate distance distribution");

  const std::vector<double> grid = log_grid(r_lo, r_hi, kFitBins);
  const std::vector<double> c = correlation_values(sample, grid, -1, sample.total_weight);
  const SlopeFit pooled = fit_loglog(grid, c);
  if (pooled.points < 2)
    throw DomainError("correlation_dimension: not enough occupied radii in the fit window");

  // Batch-split slopes capture pair-sampling noise that the residual-based
  // standard error misses on a smooth curve.
  std::vector<double> batch_slopes;
  for (int b = 0; b < kBatches; ++b) {
    double denom = 0.0;
    for (std::size_t t = 0; t < sample.weight.size(); ++t)
      if (sample.batch[t] == b) denom += sample.weight[t];
    if (!(denom > 0.0)) continue;
    const std::vector<double> cb = correlation_values(sample, grid, b, denom);
    const SlopeFit fit = fit_loglog(grid, cb);
    if (fit.points >= 2) batch_slopes.push_back(fit.slope);
  }
  double batch_se = 0.0;
  if (batch_slopes.size() >= 2) {
    double mean = 0.0;
    for (double s : batch_slopes) mean += s;
    mean /= static_cast<double>(batch_slopes.size());
    double var = 0.0;
    for (double s : batch_slopes) var += (s - mean) * (s - mean);
    var /= static_cast<double>(batch_slopes.size() - 1);
    batch_se = std::sqrt(var / static_cast<double>(batch_slopes.size()));
  }

  DimensionEstimate est;
  const int k = points.front().x.ambient_dim() - 1;
  est.value = std::clamp(pooled.slope, 0.0, 2.0 * static_cast<double>(k));
  est.std_error = std::max(pooled.std_error, batch_se);
  est.r_lo = r_lo;
  est.r_hi = r_hi;
  est.n_points = points.size();
  est.n_pairs = sample.n_pairs;
  return est;
}

std::vector<std::pair<double, double>> correlation_curve(const std::vector<WeightedPoint>& points,
                                                         std::uint64_t seed, int n_bins) {
  if (points.size() < 2) throw DomainError("correlation_curve: need at least 2 points");
  if (n_bins < 2) throw DomainError("correlation_curve: need at least 2 bins");
  const PairSample sample = collect_pairs(points, seed);
  if (sample.distance.empty()) throw DomainError("correlation_curve: all points coincide");
  const double lo = weighted_quantile(sample, 0.005);
  const double hi = weighted_quantile(sample, 0.995);
  if (!(lo > 0.0 && lo < hi)) throw DomainError("correlation_curve: degenerate distances");
  const std::vector<double> grid = log_grid(lo, hi, n_bins);
  const std::vector<double> c = correlation_values(sample, grid, -1, sample.total_weight);
  std::vector<std::pair<double, double>> curve;
  curve.reserve(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) curve.emplace_back(grid[g], c[g]);
  return curve;
}

LipschitzImageReport lipschitz_image_check(const std::vector<WeightedPoint>& points,
                                           const Projection& pi, double q_lo, double q_hi,
                                           std::uint64_t seed, double tol_center) {
  std::vector<WeightedPoint> images;
  images.reserve(points.size());
  for (const auto& wp : points)
    images.push_back(WeightedPoint{project_point(pi, wp.x, tol_center), wp.weight});
  LipschitzImageReport report;
  report.before = correlation_dimension(points, q_lo, q_hi, seed);
  report.after = correlation_dimension(images, q_lo, q_hi, seed);
  return report;
}

}  // namespace plurirank
