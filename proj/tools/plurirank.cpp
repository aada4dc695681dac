// plurirank command-line harness: dataset generators, projections, rank and
// dimension statistics, genericity experiments, and the end-to-end
// verification pipeline. Every subcommand emits a JSON report (stdout or
// --report) and uses explicit seeds, so runs are byte-for-byte reproducible.
//
// Exit codes: 0 success, 1 usage error, 2 validation error, 3 property
// violation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plurirank/harness.hpp"
#include "plurirank/rng.hpp"

namespace {

using plurirank::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitViolation = 3;

void emit_report(const Json& report, const std::string& report_path) {
  if (report_path.empty())
    std::cout << report.dump(2) << "\n";
  else
    plurirank::write_json_atomic(report, report_path);
}

std::string params_digest(const std::string& tag) { return plurirank::digest_bytes(tag); }

struct GenArgs {
  std::string kind;
  int k = 2, p = 1, n = 1000, m = 2, fibers = 16, per_fiber = 4, ell = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string report_path;
};

int run_gen(const GenArgs& args) {
  plurirank::DiscreteCurrent current;
  std::ostringstream tag;
  if (args.kind == "plane") {
    current = plurirank::generate_plane_current(args.k, args.p, args.n, args.seed);
    tag << "plane k=" << args.k << " p=" << args.p << " n=" << args.n << " seed=" << args.seed;
  } else if (args.kind == "union") {
    current = plurirank::generate_union_current(args.k, args.p, args.m, args.n, args.seed);
    tag << "union k=" << args.k << " p=" << args.p << " m=" << args.m << " n=" << args.n
        << " seed=" << args.seed;
  } else {
    current = plurirank::generate_fibered_family(args.k, args.p, args.ell, args.fibers,
                                                 args.per_fiber, args.seed);
    tag << "fibered k=" << args.k << " p=" << args.p << " ell=" << args.ell
        << " fibers=" << args.fibers << " per_fiber=" << args.per_fiber << " seed=" << args.seed;
  }
  plurirank::save_current(current, args.out);
  Json metrics;
  metrics["generator"] = args.kind;
  metrics["k"] = current.k;
  metrics["p"] = current.p;
  metrics["atoms"] = current.atoms.size();
  metrics["mass"] = current.mass();
  metrics["dataset"] = args.out;
  metrics["dataset_digest"] = plurirank::digest_file(args.out);
  emit_report(plurirank::make_report("gen", params_digest(tag.str()), args.seed, metrics, {}),
              args.report_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plurirank: discrete positive currents, ranks, projections, dimension"};
  app.require_subcommand(1);

  // ---- gen ----------------------------------------------------------------
  GenArgs gen;
  auto* cmd_gen = app.add_subcommand("gen", "generate a synthetic dataset");
  cmd_gen->add_option("kind", gen.kind, "plane | union | fibered")
      ->check(CLI::IsMember({"plane", "union", "fibered"}))
      ->required();
  cmd_gen->add_option("--k", gen.k, "ambient projective dimension")->required();
  cmd_gen->add_option("--p", gen.p, "bidimension")->required();
  cmd_gen->add_option("--n", gen.n, "number of atoms (plane, union)");
  cmd_gen->add_option("--m,--planes", gen.m, "number of planes (union)");
  cmd_gen->add_option("--fibers", gen.fibers, "number of fibers (fibered)");
  cmd_gen->add_option("--per-fiber", gen.per_fiber, "atoms per fiber (fibered)");
  cmd_gen->add_option("--ell", gen.ell, "projection target dimension (fibered)");
  cmd_gen->add_option("--seed", gen.seed, "random seed")->required();
  cmd_gen->add_option("-o,--out", gen.out, "dataset output path")->required();
  cmd_gen->add_option("--report", gen.report_path, "report output path (default: stdout)");

  // ---- rank ---------------------------------------------------------------
  std::string rank_in, rank_report;
  auto* cmd_rank = app.add_subcommand("rank", "per-atom rank statistics of a dataset");
  cmd_rank->add_option("--in", rank_in, "dataset path")->required();
  cmd_rank->add_option("--report", rank_report, "report output path (default: stdout)");

  // ---- dim ----------------------------------------------------------------
  std::string dim_in, dim_report, dim_csv;
  double dim_qlo = 0.05, dim_qhi = 0.25;
  std::uint64_t dim_seed = 0;
  auto* cmd_dim = app.add_subcommand("dim", "correlation dimension of the trace measure");
  cmd_dim->add_option("--in", dim_in, "dataset path")->required();
  cmd_dim->add_option("--seed", dim_seed, "random seed")->required();
  cmd_dim->add_option("--q-lo", dim_qlo, "lower fit quantile");
  cmd_dim->add_option("--q-hi", dim_qhi, "upper fit quantile");
  cmd_dim->add_option("--csv", dim_csv, "write the (r, C(r)) curve as CSV");
  cmd_dim->add_option("--report", dim_report, "report output path (default: stdout)");

  // ---- project ------------------------------------------------------------
  std::string proj_in, proj_out, proj_report;
  int proj_ell = 1;
  double proj_delta = plurirank::tol::cluster_delta;
  double proj_tol_center = plurirank::tol::center;
  std::uint64_t proj_seed = 0;
  auto* cmd_project = app.add_subcommand("project", "pushforward under a seeded random projection");
  cmd_project->add_option("--in", proj_in, "dataset path")->required();
  cmd_project->add_option("--ell", proj_ell, "projection target dimension")->required();
  cmd_project->add_option("--seed", proj_seed, "random seed")->required();
  cmd_project->add_option("--delta", proj_delta, "fiber clustering radius");
  cmd_project->add_option("--tol-center", proj_tol_center, "center incidence cutoff");
  cmd_project->add_option("-o,--out", proj_out, "output dataset path")->required();
  cmd_project->add_option("--report", proj_report, "report output path (default: stdout)");

  // ---- verify ---------------------------------------------------------------
  std::string verify_in, verify_report_path;
  std::uint64_t verify_seed = 0;
  plurirank::VerifyOptions verify_options;
  auto* cmd_verify = app.add_subcommand("verify", "end-to-end rank/dimension bound check");
  cmd_verify->add_option("--in", verify_in, "dataset path")->required();
  cmd_verify->add_option("--seed", verify_seed, "random seed")->required();
  cmd_verify->add_option("--q-lo", verify_options.q_lo, "lower fit quantile");
  cmd_verify->add_option("--q-hi", verify_options.q_hi, "upper fit quantile");
  cmd_verify->add_option("--delta", verify_options.delta, "fiber clustering radius");
  cmd_verify->add_option("--tol-center", verify_options.tol_center, "center incidence cutoff");
  cmd_verify->add_option("--trials", verify_options.transversality_trials,
                         "transversality trials on the restricted current");
  cmd_verify->add_option("--report", verify_report_path, "report output path (default: stdout)");

  // ---- genericity -----------------------------------------------------------
  std::vector<int> gen_shape;
  std::int64_t gen_trials = 10000;
  int gen_adversarial = 100;
  std::uint64_t gen_seed = 0;
  std::string gen_report_path;
  auto* cmd_genericity =
      app.add_subcommand("genericity", "Haar-kernel rank preservation and injectivity trials");
  cmd_genericity
      ->add_option("--shape", gen_shape, "dimV,p,ell,rank of the test vector (4 integers)")
      ->expected(4)
      ->delimiter(',')
      ->required();
  cmd_genericity->add_option("--trials", gen_trials, "Haar trials per experiment");
  cmd_genericity->add_option("--adversarial", gen_adversarial,
                             "number of adversarial certifications");
  cmd_genericity->add_option("--seed", gen_seed, "random seed")->required();
  cmd_genericity->add_option("--report", gen_report_path, "report output path (default: stdout)");

  // ---- singularity ----------------------------------------------------------
  std::string sing_in, sing_report_path;
  int sing_ell = 1;
  std::int64_t sing_trials = 50;
  std::uint64_t sing_seed = 0;
  auto* cmd_singularity =
      app.add_subcommand("singularity", "projected-dimension survey over random projections");
  cmd_singularity->add_option("--in", sing_in, "dataset path")->required();
  cmd_singularity->add_option("--ell", sing_ell, "projection target dimension")->required();
  cmd_singularity->add_option("--trials", sing_trials, "number of projections");
  cmd_singularity->add_option("--seed", sing_seed, "random seed")->required();
  cmd_singularity->add_option("--report", sing_report_path,
                              "report output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_gen->parsed()) return run_gen(gen);

    if (cmd_rank->parsed()) {
      const auto current = plurirank::load_current(rank_in);
      Json hist = Json::object();
      std::map<int, std::int64_t> ranks;
      bool agree = true;
      int min_rank = 1 << 20, max_rank = 0;
      for (const auto& atom : current.atoms) {
        const int r_span = plurirank::rank_via_span(atom.t);
        if (current.p >= 1 && plurirank::rank_via_contraction(atom.t) != r_span) agree = false;
        ++ranks[r_span];
        min_rank = std::min(min_rank, r_span);
        max_rank = std::max(max_rank, r_span);
      }
      for (const auto& [r, c] : ranks) hist[std::to_string(r)] = c;
      Json metrics;
      metrics["k"] = current.k;
      metrics["p"] = current.p;
      metrics["atoms"] = current.atoms.size();
      metrics["per_atom_ranks"] = hist;
      metrics["min_rank"] = min_rank;
      metrics["max_rank"] = max_rank;
      metrics["rank_algorithms_agree"] = agree;
      std::vector<std::string> violations;
      if (!agree) violations.push_back("span and contraction rank algorithms disagree");
      emit_report(plurirank::make_report("rank", plurirank::digest_file(rank_in), 0, metrics,
                                         violations),
                  rank_report);
      return agree ? kExitOk : kExitViolation;
    }

    if (cmd_dim->parsed()) {
      const auto current = plurirank::load_current(dim_in);
      const auto cloud = plurirank::trace_measure(current);
      const auto est = plurirank::correlation_dimension(cloud, dim_qlo, dim_qhi, dim_seed);
      if (!dim_csv.empty()) {
        const auto curve = plurirank::correlation_curve(cloud, dim_seed);
        std::ofstream out(dim_csv, std::ios::trunc);
        if (!out) throw plurirank::ValidationError("cannot write CSV file: " + dim_csv);
        out << "r,C\n";
        for (const auto& [r, c] : curve) out << r << "," << c << "\n";
      }
      emit_report(plurirank::make_report("dim", plurirank::digest_file(dim_in), dim_seed,
                                         plurirank::to_json(est), {}),
                  dim_report);
      return kExitOk;
    }

    if (cmd_project->parsed()) {
      const auto current = plurirank::load_current(proj_in);
      const auto pi = plurirank::random_projection(current.k, proj_ell, proj_seed);
      const auto pushed =
          plurirank::pushforward_current(current, pi, proj_delta, proj_tol_center);
      if (pushed.current.empty())
        throw plurirank::ValidationError(
            "pushforward produced no atoms (every cluster degenerate)");
      plurirank::save_current(pushed.current, proj_out);
      Json metrics;
      metrics["ell"] = proj_ell;
      metrics["delta"] = proj_delta;
      metrics["clusters"] = pushed.clusters.size();
      metrics["output_atoms"] = pushed.current.atoms.size();
      metrics["degenerate_clusters"] = pushed.degenerate_clusters;
      metrics["mass_in"] = current.mass();
      metrics["mass_out"] = pushed.current.mass();
      metrics["h"] = pushed.h;
      double max_diameter = 0.0;
      for (const auto& c : pushed.clusters) max_diameter = std::max(max_diameter, c.diameter);
      metrics["max_cluster_diameter"] = max_diameter;
      metrics["dataset"] = proj_out;
      metrics["dataset_digest"] = plurirank::digest_file(proj_out);
      emit_report(plurirank::make_report("project", plurirank::digest_file(proj_in), proj_seed,
                                         metrics, {}),
                  proj_report);
      return kExitOk;
    }

    if (cmd_verify->parsed()) {
      const auto current = plurirank::load_current(verify_in);
      const auto report = plurirank::verify_current(current, verify_seed, verify_options);
      emit_report(plurirank::make_report("verify", plurirank::digest_file(verify_in), verify_seed,
                                         plurirank::to_json(report), report.violations),
                  verify_report_path);
      return report.rank_bound_satisfied ? kExitOk : kExitViolation;
    }

    if (cmd_genericity->parsed()) {
      const int dim_v = gen_shape[0], p = gen_shape[1], ell = gen_shape[2], r = gen_shape[3];
      plurirank::RngStream rng(gen_seed);
      const plurirank::MatrixXcd target = plurirank::haar_unitary(dim_v, rng).leftCols(ell);

      // Test vector of rank exactly r: sliding p-windows over r orthonormal
      // directions.
      const plurirank::MatrixXcd span = plurirank::haar_unitary(dim_v, rng).leftCols(r);
      std::vector<plurirank::SPTerm> terms;
      for (int i = 0; i < r; ++i) {
        plurirank::MatrixXcd frame(dim_v, p);
        for (int j = 0; j < p; ++j) frame.col(j) = span.col((i + j) % r);
        terms.push_back(plurirank::SPTerm{1.0, std::move(frame)});
      }
      const auto t = plurirank::normalize_trace(
          plurirank::SPVector::from_terms(dim_v, p, std::move(terms)));
      if (plurirank::rank_via_span(t) != r)
        throw plurirank::ValidationError("genericity: test vector construction lost rank");

      plurirank::TrialReport rank_trials;
      rank_trials.seed = gen_seed;
      rank_trials.trials = gen_trials;
      for (std::int64_t trial = 0; trial < gen_trials; ++trial) {
        const auto kernel = plurirank::haar_kernel(
            dim_v, ell, target, plurirank::splitmix64(gen_seed ^ static_cast<std::uint64_t>(trial)));
        if (plurirank::projected_rank_trial(t, kernel, target) != ell) {
          ++rank_trials.failures;
          rank_trials.failure_indices.push_back(trial);
        }
      }

      plurirank::TrialReport injectivity;
      injectivity.seed = gen_seed;
      injectivity.trials = gen_trials;
      for (std::int64_t trial = 0; trial < gen_trials; ++trial) {
        plurirank::RngStream trial_rng =
            plurirank::RngStream::derived(gen_seed, 0xA000000ULL + static_cast<std::uint64_t>(trial));
        const plurirank::MatrixXcd w = trial_rng.gaussian_matrix(dim_v, p);
        const auto kernel = plurirank::haar_kernel(
            dim_v, ell, target,
            plurirank::splitmix64(gen_seed ^ (0xB000000ULL + static_cast<std::uint64_t>(trial))));
        if (!plurirank::injectivity_trial(w, kernel, target)) {
          ++injectivity.failures;
          injectivity.failure_indices.push_back(trial);
        }
      }

      int certified = 0, via_rank = 0, via_injectivity = 0;
      for (int i = 0; i < gen_adversarial; ++i) {
        plurirank::RngStream t_rng =
            plurirank::RngStream::derived(gen_seed, 0xC000000ULL + static_cast<std::uint64_t>(i));
        const plurirank::MatrixXcd rnd_span = plurirank::haar_unitary(dim_v, t_rng).leftCols(r);
        std::vector<plurirank::SPTerm> rnd_terms;
        for (int s = 0; s < r; ++s) {
          plurirank::MatrixXcd frame(dim_v, p);
          for (int j = 0; j < p; ++j) frame.col(j) = rnd_span.col((s + j) % r);
          rnd_terms.push_back(plurirank::SPTerm{1.0, std::move(frame)});
        }
        const auto rnd_t = plurirank::normalize_trace(
            plurirank::SPVector::from_terms(dim_v, p, std::move(rnd_terms)));
        const auto cert = plurirank::adversarial_kernel(
            rnd_t, ell, target,
            plurirank::splitmix64(gen_seed ^ (0xD000000ULL + static_cast<std::uint64_t>(i))));
        ++certified;
        if (cert.route == plurirank::ExceptionalRoute::kRankDrop)
          ++via_rank;
        else
          ++via_injectivity;
      }

      Json metrics;
      metrics["shape"] = gen_shape;
      metrics["rank_preservation"] = plurirank::to_json(rank_trials);
      metrics["injectivity"] = plurirank::to_json(injectivity);
      metrics["adversarial"] = Json{{"requested", gen_adversarial},
                                    {"certified", certified},
                                    {"via_rank_drop", via_rank},
                                    {"via_injectivity_failure", via_injectivity}};
      std::vector<std::string> violations;
      if (rank_trials.failures > 0)
        violations.push_back("rank preservation failures: " +
                             std::to_string(rank_trials.failures));
      if (injectivity.failures > 0)
        violations.push_back("injectivity failures: " + std::to_string(injectivity.failures));
      if (certified != gen_adversarial)
        violations.push_back("adversarial certification incomplete");
      std::ostringstream tag;
      tag << "genericity shape=" << dim_v << "," << p << "," << ell << "," << r
          << " trials=" << gen_trials << " seed=" << gen_seed;
      emit_report(plurirank::make_report("genericity", params_digest(tag.str()), gen_seed,
                                         metrics, violations),
                  gen_report_path);
      return violations.empty() ? kExitOk : kExitViolation;
    }

    if (cmd_singularity->parsed()) {
      const auto current = plurirank::load_current(sing_in);
      const auto report =
          plurirank::singularity_experiment(current, sing_ell, sing_trials, sing_seed);
      emit_report(plurirank::make_report("singularity", plurirank::digest_file(sing_in),
                                         sing_seed, plurirank::to_json(report), {}),
                  sing_report_path);
      return kExitOk;
    }
  } catch (const plurirank::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const plurirank::CenterIncidenceError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const plurirank::DomainError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
