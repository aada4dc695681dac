#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plurirank/projective.hpp"

namespace plurirank {

/// One atom of a discretized bidimension-(p,p) current: a point of P^k, a
/// positive mass, and a trace-1 strongly positive vector on the tangent
/// space at that point.
struct Atom {
  ProjPoint x;
  double weight = 0.0;
  SPVector t;
};

/// Validates the atom invariants (positive weight, trace 1, tangency) and
/// throws DomainError otherwise.
Atom make_atom(ProjPoint x, double weight, SPVector t);

/// Atomic discretization of a positive current of bidimension (p,p) on P^k.
/// The trace measure is the weighted point cloud of the atoms.
struct DiscreteCurrent {
  int k = 0;
  int p = 0;
  std::vector<Atom> atoms;

  double mass() const;
  bool empty() const { return atoms.empty(); }
};

/// Atoms sharing a fiber of a projection, with conditional weights
/// normalized to sum to 1.
struct FiberCluster {
  ProjPoint z;                           // image point on the target
  std::vector<std::size_t> members;      // atom indices in the source current
  std::vector<double> conditional_weights;
  double total_weight = 0.0;             // sum of member weights
  double diameter = 0.0;                 // max fs distance of member images to z
};

// ---------------------------------------------------------------------------
// Dataset I/O. Schema "plurirank-current/1"; complex numbers as [re, im]
// pairs; numbers serialized as shortest round-trip decimals so that
// save-then-load reproduces every float bit-exactly.
// ---------------------------------------------------------------------------

DiscreteCurrent load_current(const std::string& path);
DiscreteCurrent parse_current(const std::string& json_text);
void save_current(const DiscreteCurrent& current, const std::string& path);
std::string serialize_current(const DiscreteCurrent& current);

/// Atoms satisfying the predicate; weights unchanged. May return an empty
/// current.
DiscreteCurrent restrict(const DiscreteCurrent& current,
                         const std::function<bool(const Atom&)>& predicate);

/// <T, phi> = sum_i weight_i * pair(t_i, phi(i)) for a per-atom form field.
double pair_current(const DiscreteCurrent& current,
                    const std::function<PPForm(std::size_t)>& form_field);
double pair_current(const DiscreteCurrent& current, const std::vector<PPForm>& forms);

struct PushforwardResult {
  DiscreteCurrent current;               // output atoms on the target
  std::vector<FiberCluster> clusters;    // all clusters, in deterministic order
  std::vector<double> h;                 // per output atom: 1 / trace of the fiber average
  std::vector<std::size_t> atom_cluster; // output atom -> cluster index
  std::vector<std::size_t> degenerate_clusters;  // clusters whose pushed vector vanished
};

/// Pushforward under a projection via fiber grouping: images are clustered
/// within fs distance delta (single linkage, deterministic order); per
/// cluster the pushed tangent vectors are averaged with the conditional
/// weights; the trace of the average is split off into the output weight and
/// recorded as 1/h. Clusters whose pushed average vanishes produce no atom
/// and are reported. Throws CenterIncidenceError listing all offending atoms.
PushforwardResult pushforward_current(const DiscreteCurrent& current, const Projection& pi,
                                      double delta = tol::cluster_delta,
                                      double tol_center = tol::center);

struct AdjunctionReport {
  double max_rel_error = 0.0;
  double max_cluster_diameter = 0.0;
  bool exact_fiber = true;  // all cluster diameters within 1e-9
  int forms_checked = 0;
};

/// Compares <pushforward(T), phi> against the disaggregated sum
/// sum_i w_i <pushforward(t_i), phi(pi(x_i))> for seeded random form fields.
/// The identity is exact for exact-fiber clusters; otherwise the cluster
/// diameter is reported alongside.
AdjunctionReport check_pairing_adjunction(const DiscreteCurrent& current, const Projection& pi,
                                          double delta, int n_forms, std::uint64_t seed,
                                          double tol_center = tol::center);

struct WeightedPoint {
  ProjPoint x;
  double weight = 0.0;
};

std::vector<WeightedPoint> trace_measure(const DiscreteCurrent& current);

struct AbsContinuityResult {
  bool absolutely_continuous = true;
  std::optional<std::size_t> witness;  // first sigma atom with no nu atom within tol
};

/// Atomic absolute continuity sigma << nu: every sigma atom has a nu atom
/// within fs distance tol.
AbsContinuityResult check_ac(const std::vector<WeightedPoint>& sigma,
                             const std::vector<WeightedPoint>& nu, double tol);

// ---------------------------------------------------------------------------
// Synthetic generators (ground-truth model currents).
// ---------------------------------------------------------------------------

/// Integration current over a Haar-random projective p-plane: n Haar points
/// on the plane, each carrying the decomposable trace-1 vector of the
/// plane's tangent frame. Per-atom rank is exactly p.
DiscreteCurrent generate_plane_current(int k, int p, int n, std::uint64_t seed);

/// Atoms drawn from m independent Haar p-planes (round-robin), uniform
/// weights.
DiscreteCurrent generate_union_current(int k, int p, int m, int n, std::uint64_t seed);

/// Places per_fiber atoms on each of n_fibers common fibers of the
/// projection random_projection(k, ell, seed), with varied tangent frames;
/// guarantees exact fiber collisions for pushforward tests.
DiscreteCurrent generate_fibered_family(int k, int p, int ell, int n_fibers, int per_fiber,
                                        std::uint64_t seed);

}  // namespace plurirank
