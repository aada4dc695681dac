#include "plurirank/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "plurirank/rng.hpp"

namespace plurirank {

namespace {

// Disjoint seed lanes inside one verify run.
enum : std::uint64_t {
  kLaneDimension = 1,
  kLaneProjection = 100,
  kLaneSpotKernel = 1000,
  kLaneSpotTarget = 5000,
  kLaneTransversality = 9000,
};

}  // namespace

VerifyReport verify_current(const DiscreteCurrent& current, std::uint64_t seed,
                            const VerifyOptions& options) {
  if (current.atoms.size() < 100)
    throw DomainError("verify_current: need at least 100 atoms for the dimension estimate");

  VerifyReport report;
  report.seed = seed;

  const auto cloud = trace_measure(current);
  report.dim_estimate = correlation_dimension(cloud, options.q_lo, options.q_hi,
                                              splitmix64(seed ^ kLaneDimension));
  const double half_dim = report.dim_estimate.value / 2.0;
  report.ell = static_cast<int>(std::floor(half_dim)) + 1;
  report.ell_used = std::min(report.ell, current.k);
  report.ell_unstable =
      std::abs(report.dim_estimate.value - std::round(report.dim_estimate.value)) <
      2.0 * report.dim_estimate.std_error;

  // Sample a projection whose center misses every atom; resample on
  // incidence (bounded).
  std::optional<Projection> pi;
  for (int attempt = 0; attempt < 16 && !pi; ++attempt) {
    Projection candidate = random_projection(
        current.k, report.ell_used, splitmix64(seed ^ (kLaneProjection + attempt)));
    const bool clear = std::all_of(current.atoms.begin(), current.atoms.end(), [&](const Atom& a) {
      return (candidate.projector() * a.x.z()).norm() > options.tol_center;
    });
    if (clear)
      pi = std::move(candidate);
    else
      ++report.projection_resamples;
  }
  if (!pi)
    throw CenterIncidenceError(
        "verify_current: could not find a projection clear of all atoms in 16 draws");

  // Rank statistics before and after.
  std::vector<int> ranks(current.atoms.size());
  const int bound = static_cast<int>(std::floor(half_dim));
  bool all_ok = true;
  for (std::size_t i = 0; i < current.atoms.size(); ++i) {
    ranks[i] = rank_via_span(current.atoms[i].t);
    ++report.per_atom_ranks[ranks[i]];
    if (ranks[i] < current.p || ranks[i] > bound) {
      all_ok = false;
      if (report.violations.size() < 8)
        report.violations.push_back("atom " + std::to_string(i) + ": rank " +
                                    std::to_string(ranks[i]) + " outside [p, floor(dim/2)] = [" +
                                    std::to_string(current.p) + ", " + std::to_string(bound) +
                                    "]");
    }
  }
  report.rank_bound_satisfied = all_ok;

  for (std::size_t i = 0; i < current.atoms.size(); ++i) {
    const SPVector pushed =
        pushforward_sp(*pi, current.atoms[i].x, current.atoms[i].t, options.tol_center);
    ++report.pushed_ranks[rank_via_span(pushed)];
  }

  // Absolute continuity pair on the clustered pushforward.
  const PushforwardResult pushed = pushforward_current(current, *pi, options.delta,
                                                       options.tol_center);
  report.degenerate_clusters = pushed.degenerate_clusters.size();
  std::vector<WeightedPoint> image_points;
  image_points.reserve(current.atoms.size());
  for (const auto& atom : current.atoms)
    image_points.push_back(
        WeightedPoint{project_point(*pi, atom.x, options.tol_center), atom.weight});
  const auto output_points = trace_measure(pushed.current);
  report.ac_forward = check_ac(output_points, image_points, options.ac_tol).absolutely_continuous;
  report.ac_reverse = check_ac(image_points, output_points, options.ac_tol).absolutely_continuous;

  // Restriction to atoms of rank >= ell, and both branches of the rank
  // statistics on it.
  std::vector<std::size_t> restricted;
  for (std::size_t i = 0; i < current.atoms.size(); ++i)
    if (ranks[i] >= report.ell) restricted.push_back(i);
  report.restricted_atoms = restricted.size();
  if (!restricted.empty()) {
    DiscreteCurrent s{current.k, current.p, {}};
    for (std::size_t i : restricted) s.atoms.push_back(current.atoms[i]);
    report.restricted_transversality = transversality_montecarlo(
        s, report.ell_used, options.transversality_trials, splitmix64(seed ^ kLaneTransversality),
        std::nullopt, options.tol_center);
    for (std::size_t i : restricted) {
      const SPVector p_i =
          pushforward_sp(*pi, current.atoms[i].x, current.atoms[i].t, options.tol_center);
      if (rank_via_span(p_i) < report.ell) ++report.pushed_below_ell;
    }
    // Generic-kernel spot checks in the ambient linear space.
    const int dim_v = current.k + 1;
    if (current.p < report.ell && report.ell < dim_v) {
      const std::size_t limit =
          std::min<std::size_t>(restricted.size(), static_cast<std::size_t>(options.spot_check_atoms));
      for (std::size_t a = 0; a < limit; ++a) {
        const SPVector& t = current.atoms[restricted[a]].t;
        for (int c = 0; c < options.spot_checks_per_atom; ++c) {
          RngStream rng = RngStream::derived(splitmix64(seed ^ kLaneSpotTarget), a * 97 + c);
          const MatrixXcd target = haar_unitary(dim_v, rng).leftCols(report.ell);
          const KernelSample kernel = haar_kernel(
              dim_v, report.ell, target, splitmix64(seed ^ (kLaneSpotKernel + a * 131 + c)));
          const int r = projected_rank_trial(t, kernel, target);
          ++report.spot_checks;
          if (r == report.ell)
            ++report.spot_rank_equals_ell;
          else
            ++report.spot_rank_below_ell;
        }
      }
    }
  }
  return report;
}

SingularityReport singularity_experiment(const DiscreteCurrent& current, int ell,
                                         std::int64_t trials, std::uint64_t seed,
                                         const SingularityOptions& options) {
  if (trials < 0) throw DomainError("singularity_experiment: negative trial count");
  if (trials > 0 && current.atoms.size() < 100)
    throw DomainError("singularity_experiment: need at least 100 atoms");
  SingularityReport report;
  report.ell = ell;
  report.trials = trials;
  report.margin = options.margin;
  report.seed = seed;
  std::int64_t deficient = 0;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    const Projection pi =
        random_projection(current.k, ell, splitmix64(seed ^ static_cast<std::uint64_t>(trial)));
    std::vector<WeightedPoint> images;
    images.reserve(current.atoms.size());
    for (const auto& atom : current.atoms)
      images.push_back(WeightedPoint{project_point(pi, atom.x, options.tol_center), atom.weight});
    const DimensionEstimate est = correlation_dimension(
        images, options.q_lo, options.q_hi,
        splitmix64(seed ^ (0x5A5A5A5AULL + static_cast<std::uint64_t>(trial))));
    report.estimates.push_back(est.value);
    if (est.value < 2.0 * static_cast<double>(ell) - options.margin) ++deficient;
  }
  report.fraction_deficient =
      trials > 0 ? static_cast<double>(deficient) / static_cast<double>(trials) : 0.0;
  return report;
}

// ---------------------------------------------------------------------------
// Report envelope
// ---------------------------------------------------------------------------

std::string digest_bytes(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file for digest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return digest_bytes(buf.str());
}

Json make_report(const std::string& op, const std::string& inputs_digest, std::uint64_t seed,
                 Json metrics, std::vector<std::string> violations) {
  Json root;
  root["schema"] = kReportSchema;
  root["op"] = op;
  root["inputs_digest"] = inputs_digest;
  root["seed"] = seed;
  root["metrics"] = std::move(metrics);
  root["violations"] = violations;
  return root;
}

void write_json_atomic(const Json& j, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write report file: " + tmp);
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

Json to_json(const DimensionEstimate& est) {
  Json j;
  j["value"] = est.value;
  j["std_error"] = est.std_error;
  j["fit_range"] = Json::array({est.r_lo, est.r_hi});
  j["n_points"] = est.n_points;
  j["n_pairs"] = est.n_pairs;
  return j;
}

Json to_json(const TrialReport& report) {
  Json j;
  j["trials"] = report.trials;
  j["failures"] = report.failures;
  j["failure_indices"] = report.failure_indices;
  j["total_atom_failures"] = report.total_atom_failures;
  j["seed"] = report.seed;
  return j;
}

namespace {

Json histogram_json(const std::map<int, std::int64_t>& hist) {
  Json j = Json::object();
  for (const auto& [rank, count] : hist) j[std::to_string(rank)] = count;
  return j;
}

}  // namespace

Json to_json(const VerifyReport& report) {
  Json j;
  j["dim_estimate"] = to_json(report.dim_estimate);
  j["ell"] = report.ell;
  j["ell_used"] = report.ell_used;
  j["ell_unstable"] = report.ell_unstable;
  j["per_atom_ranks"] = histogram_json(report.per_atom_ranks);
  j["pushed_ranks"] = histogram_json(report.pushed_ranks);
  j["rank_bound_satisfied"] = report.rank_bound_satisfied;
  j["ac_checks"] = Json::array({report.ac_forward, report.ac_reverse});
  j["degenerate_clusters"] = report.degenerate_clusters;
  j["projection_resamples"] = report.projection_resamples;
  j["restricted_atoms"] = report.restricted_atoms;
  j["domination_assumed"] = report.domination_assumed;
  if (report.restricted_transversality)
    j["restricted_transversality"] = to_json(*report.restricted_transversality);
  j["pushed_below_ell"] = report.pushed_below_ell;
  j["spot_checks"] = report.spot_checks;
  j["spot_rank_equals_ell"] = report.spot_rank_equals_ell;
  j["spot_rank_below_ell"] = report.spot_rank_below_ell;
  j["seed"] = report.seed;
  j["tolerances"] = Json{{"rank_rel", tol::rank_rel}, {"center", tol::center},
                         {"cluster_delta", tol::cluster_delta}};
  return j;
}

Json to_json(const SingularityReport& report) {
  Json j;
  j["ell"] = report.ell;
  j["trials"] = report.trials;
  j["margin"] = report.margin;
  j["estimates"] = report.estimates;
  j["fraction_deficient"] = report.fraction_deficient;
  j["seed"] = report.seed;
  return j;
}

}  // namespace plurirank
