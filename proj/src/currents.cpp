#include "plurirank/currents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plurirank/rng.hpp"

namespace plurirank {

Atom make_atom(ProjPoint x, double weight, SPVector t) {
  if (!(weight > 0.0) || !std::isfinite(weight))
    throw DomainError("Atom: weight must be a positive finite real");
  if (t.dim() != x.ambient_dim()) throw DomainError("Atom: tangent vector dimension mismatch");
  if (std::abs(t.trace() - 1.0) > tol::trace_one)
    throw DomainError("Atom: tangent vector must have trace 1");
  for (const auto& term : t.terms())
    for (Eigen::Index c = 0; c < term.frame.cols(); ++c)
      if (std::abs(term.frame.col(c).dot(x.z())) >
          tol::ortho * std::max(1.0, term.frame.col(c).norm()))
        throw DomainError("Atom: frame vectors must be orthogonal to the base point");
  return Atom{std::move(x), weight, std::move(t)};
}

double DiscreteCurrent::mass() const {
  std::vector<double> w;
  w.reserve(atoms.size());
  for (const auto& a : atoms) w.push_back(a.weight);
  return pairwise_sum(w);
}

DiscreteCurrent restrict(const DiscreteCurrent& current,
                         const std::function<bool(const Atom&)>& predicate) {
  DiscreteCurrent out{current.k, current.p, {}};
  for (const auto& atom : current.atoms)
    if (predicate(atom)) out.atoms.push_back(atom);
  return out;
}

double pair_current(const DiscreteCurrent& current,
                    const std::function<PPForm(std::size_t)>& form_field) {
  std::vector<double> contributions;
  contributions.reserve(current.atoms.size());
  for (std::size_t i = 0; i < current.atoms.size(); ++i) {
    const PPForm phi = form_field(i);
    contributions.push_back(current.atoms[i].weight * pair(current.atoms[i].t.cached(), phi));
  }
  return pairwise_sum(contributions);
}

double pair_current(const DiscreteCurrent& current, const std::vector<PPForm>& forms) {
  if (forms.size() != current.atoms.size())
    throw DomainError("pair_current: form field must cover every atom");
  return pair_current(current, [&](std::size_t i) { return forms[i]; });
}

namespace {

// Deterministic single-linkage grouping of image points within delta.
std::vector<std::vector<std::size_t>> single_linkage(const std::vector<ProjPoint>& pts,
                                                     double delta) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (fs_distance(pts[i], pts[j]) <= delta) {
        const std::size_t ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
  // Clusters ordered by their lowest member index; members in index order.
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::ptrdiff_t> cluster_of_root(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (cluster_of_root[r] < 0) {
      cluster_of_root[r] = static_cast<std::ptrdiff_t>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<std::size_t>(cluster_of_root[r])].push_back(i);
  }
  return clusters;
}

}  // namespace

PushforwardResult pushforward_current(const DiscreteCurrent& current, const Projection& pi,
                                      double delta, double tol_center) {
  if (delta < 0.0) throw DomainError("pushforward_current: delta must be nonnegative");
  if (current.k != pi.k()) throw DomainError("pushforward_current: ambient dimension mismatch");

  // The trace measure must not charge the center.
  std::vector<std::size_t> incident;
  std::vector<ProjPoint> images;
  images.reserve(current.atoms.size());
  for (std::size_t i = 0; i < current.atoms.size(); ++i) {
    const VectorXcd y = pi.projector() * current.atoms[i].x.z();
    if (y.norm() <= tol_center) {
      incident.push_back(i);
      images.push_back(current.atoms[i].x);  // placeholder, unused on error
    } else {
      images.push_back(ProjPoint::from(y));
    }
  }
  if (!incident.empty()) {
    std::string msg = "pushforward_current: atoms on or near the center:";
    for (std::size_t i : incident) msg += " " + std::to_string(i);
    throw CenterIncidenceError(msg, incident);
  }

  PushforwardResult result;
  result.current.k = current.k;
  result.current.p = current.p;

  const auto groups = single_linkage(images, delta);
  result.clusters.reserve(groups.size());
  for (const auto& members : groups) {
    FiberCluster cluster{images[members.front()], members, {}, 0.0, 0.0};
    std::vector<double> weights;
    weights.reserve(members.size());
    for (std::size_t i : members) weights.push_back(current.atoms[i].weight);
    cluster.total_weight = pairwise_sum(weights);
    cluster.conditional_weights.reserve(members.size());
    for (double w : weights) cluster.conditional_weights.push_back(w / cluster.total_weight);
    for (std::size_t i : members)
      cluster.diameter = std::max(cluster.diameter, fs_distance(images[i], cluster.z));

    // Inner average over the fiber: sum of conditional-weighted pushforwards.
    std::vector<SPTerm> terms;
    for (std::size_t m = 0; m < members.size(); ++m) {
      const Atom& atom = current.atoms[members[m]];
      const SPVector pushed = pushforward_sp(pi, atom.x, atom.t, tol_center);
      for (const auto& term : pushed.terms()) {
        MatrixXcd frame = term.frame;
        // Members of a near-exact fiber share the cluster representative up
        // to phase; re-project so the output atom's tangency is exact.
        for (Eigen::Index c = 0; c < frame.cols(); ++c)
          frame.col(c) -= cluster.z.z() * cluster.z.z().dot(frame.col(c));
        terms.push_back(SPTerm{cluster.conditional_weights[m] * term.lambda, std::move(frame)});
      }
    }
    SPVector averaged = SPVector::from_terms(current.k + 1, current.p, std::move(terms));
    const double tr = averaged.trace();
    const std::size_t cluster_index = result.clusters.size();
    if (tr <= tol::degenerate_trace) {
      result.degenerate_clusters.push_back(cluster_index);
    } else {
      Atom out = make_atom(cluster.z, cluster.total_weight * tr, normalize_trace(averaged));
      result.current.atoms.push_back(std::move(out));
      result.h.push_back(1.0 / tr);
      result.atom_cluster.push_back(cluster_index);
    }
    result.clusters.push_back(std::move(cluster));
  }
  return result;
}

namespace {

// Phase-invariant random form field on the target: a fixed Hermitian matrix
// plus a position-modulated Hermitian matrix.
struct FormField {
  PPForm base;
  PPForm bump;
  VectorXcd probe;

  PPForm at(const ProjPoint& z) const {
    const double s = std::norm(probe.dot(z.z()));
    return PPForm{base.k, base.p, (base.h + s * bump.h).eval()};
  }
};

FormField random_form_field(int dim, int p, RngStream& rng) {
  const auto n = static_cast<Eigen::Index>(binomial(dim, p));
  MatrixXcd a = rng.gaussian_matrix(static_cast<int>(n), static_cast<int>(n));
  MatrixXcd b = rng.gaussian_matrix(static_cast<int>(n), static_cast<int>(n));
  FormField field{PPForm{dim, p, ((a + a.adjoint()) / 2.0).eval()},
                  PPForm{dim, p, ((b + b.adjoint()) / 2.0).eval()},
                  rng.gaussian_vector(dim)};
  return field;
}

}  // namespace

AdjunctionReport check_pairing_adjunction(const DiscreteCurrent& current, const Projection& pi,
                                          double delta, int n_forms, std::uint64_t seed,
                                          double tol_center) {
  const PushforwardResult pushed = pushforward_current(current, pi, delta, tol_center);
  AdjunctionReport report;
  report.forms_checked = n_forms;
  for (const auto& cluster : pushed.clusters) {
    report.max_cluster_diameter = std::max(report.max_cluster_diameter, cluster.diameter);
  }
  report.exact_fiber = report.max_cluster_diameter <= 1e-9;

  // Disaggregated side: per-atom pushforwards evaluated at per-atom images.
  std::vector<SPVector> atom_pushed;
  std::vector<ProjPoint> atom_images;
  atom_pushed.reserve(current.atoms.size());
  atom_images.reserve(current.atoms.size());
  for (const auto& atom : current.atoms) {
    atom_images.push_back(project_point(pi, atom.x, tol_center));
    atom_pushed.push_back(pushforward_sp(pi, atom.x, atom.t, tol_center));
  }

  for (int f = 0; f < n_forms; ++f) {
    RngStream rng = RngStream::derived(seed, static_cast<std::uint64_t>(f));
    const FormField field = random_form_field(current.k + 1, current.p, rng);
    const double lhs = pair_current(pushed.current, [&](std::size_t i) {
      return field.at(pushed.current.atoms[i].x);
    });
    std::vector<double> contributions;
    contributions.reserve(current.atoms.size());
    for (std::size_t i = 0; i < current.atoms.size(); ++i) {
      contributions.push_back(current.atoms[i].weight *
                              pair(atom_pushed[i].cached(), field.at(atom_images[i])));
    }
    const double rhs = pairwise_sum(contributions);
    const double denom = std::max(std::abs(lhs), std::abs(rhs));
    if (denom < 1e-12) continue;  // degenerate form, excluded from the stats
    report.max_rel_error = std::max(report.max_rel_error, std::abs(lhs - rhs) / denom);
  }
  return report;
}

std::vector<WeightedPoint> trace_measure(const DiscreteCurrent& current) {
  std::vector<WeightedPoint> out;
  out.reserve(current.atoms.size());
  for (const auto& atom : current.atoms) out.push_back(WeightedPoint{atom.x, atom.weight});
  return out;
}

AbsContinuityResult check_ac(const std::vector<WeightedPoint>& sigma,
                             const std::vector<WeightedPoint>& nu, double tol) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    bool covered = false;
    for (const auto& atom : nu) {
      if (fs_distance(sigma[i].x, atom.x) <= tol) {
        covered = true;
        break;
      }
    }
    if (!covered) return AbsContinuityResult{false, i};
  }
  return AbsContinuityResult{true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

// Orthonormal tangent frame of the plane spanned by `plane_basis` at the
// plane point x: project the basis off x and keep the p orthonormal
// directions. Deterministic via SVD.
MatrixXcd plane_tangent_frame(const MatrixXcd& plane_basis, const VectorXcd& x) {
  const Eigen::Index p = plane_basis.cols() - 1;
  MatrixXcd shifted = plane_basis;
  for (Eigen::Index c = 0; c < shifted.cols(); ++c)
    shifted.col(c) -= x * x.dot(shifted.col(c));
  Eigen::JacobiSVD<MatrixXcd> svd(shifted, Eigen::ComputeThinU);
  MatrixXcd frame = svd.matrixU().leftCols(p);
  // Clean the roundoff component along x so atom validation is exact.
  for (Eigen::Index c = 0; c < frame.cols(); ++c) frame.col(c) -= x * x.dot(frame.col(c));
  return frame;
}

}  // namespace

DiscreteCurrent generate_plane_current(int k, int p, int n, std::uint64_t seed) {
  if (k < 1 || k > kMaxDim - 1 || p < 1 || p > k - 1)
    throw DomainError("generate_plane_current: need 1 <= p <= k-1");
  if (n < 1) throw DomainError("generate_plane_current: need n >= 1");
  RngStream rng(seed);
  const MatrixXcd u = haar_unitary(k + 1, rng);
  const MatrixXcd plane = u.leftCols(p + 1);
  DiscreteCurrent current{k, p, {}};
  current.atoms.reserve(static_cast<std::size_t>(n));
  const double w = 1.0 / static_cast<double>(n);
  for (int i = 0; i < n; ++i) {
    const VectorXcd z = haar_sphere_point(plane, rng);
    const MatrixXcd frame = plane_tangent_frame(plane, z);
    SPVector t = normalize_trace(SPVector::decomposable(frame));
    current.atoms.push_back(make_atom(ProjPoint::from(z), w, std::move(t)));
  }
  return current;
}

DiscreteCurrent generate_union_current(int k, int p, int m, int n, std::uint64_t seed) {
  if (m < 1) throw DomainError("generate_union_current: need m >= 1");
  if (k < 1 || k > kMaxDim - 1 || p < 1 || p > k - 1)
    throw DomainError("generate_union_current: need 1 <= p <= k-1");
  if (n < 1) throw DomainError("generate_union_current: need n >= 1");
  RngStream rng(seed);
  std::vector<MatrixXcd> planes;
  planes.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) planes.push_back(haar_unitary(k + 1, rng).leftCols(p + 1));
  DiscreteCurrent current{k, p, {}};
  current.atoms.reserve(static_cast<std::size_t>(n));
  const double w = 1.0 / static_cast<double>(n);
  for (int i = 0; i < n; ++i) {
    const MatrixXcd& plane = planes[static_cast<std::size_t>(i % m)];
    const VectorXcd z = haar_sphere_point(plane, rng);
    const MatrixXcd frame = plane_tangent_frame(plane, z);
    SPVector t = normalize_trace(SPVector::decomposable(frame));
    current.atoms.push_back(make_atom(ProjPoint::from(z), w, std::move(t)));
  }
  return current;
}

DiscreteCurrent generate_fibered_family(int k, int p, int ell, int n_fibers, int per_fiber,
                                        std::uint64_t seed) {
  if (n_fibers < 1 || per_fiber < 1)
    throw DomainError("generate_fibered_family: need n_fibers, per_fiber >= 1");
  if (ell >= k + 1 || ell < 1) throw DomainError("generate_fibered_family: need 1 <= ell <= k");
  if (p < 1 || p > k) throw DomainError("generate_fibered_family: need 1 <= p <= k");
  const Projection pi = random_projection(k, ell, seed);
  RngStream rng = RngStream::derived(seed, 0x66696265u /* fiber stream */);
  DiscreteCurrent current{k, p, {}};
  current.atoms.reserve(static_cast<std::size_t>(n_fibers) * static_cast<std::size_t>(per_fiber));
  const double w = 1.0 / static_cast<double>(n_fibers * per_fiber);
  for (int f = 0; f < n_fibers; ++f) {
    const VectorXcd z = haar_sphere_point(pi.target_basis(), rng);
    for (int a = 0; a < per_fiber; ++a) {
      // Point on the fiber over z: combination of z and center directions,
      // kept safely away from the center.
      VectorXcd x;
      while (true) {
        const Complex alpha = rng.cgaussian();
        VectorXcd cand = alpha * z;
        if (pi.k() > pi.ell()) cand += pi.center_basis() * rng.gaussian_vector(pi.k() - pi.ell());
        const double norm = cand.norm();
        if (norm > 1e-12 && std::abs(alpha) / norm > 0.1) {
          x = cand / norm;
          break;
        }
      }
      // Varied tangent frame: random directions projected off x.
      MatrixXcd frame = rng.gaussian_matrix(k + 1, p);
      for (Eigen::Index c = 0; c < frame.cols(); ++c) {
        frame.col(c) -= x * x.dot(frame.col(c));
        frame.col(c) -= x * x.dot(frame.col(c));  // second pass removes roundoff
      }
      SPVector t = normalize_trace(SPVector::decomposable(frame));
      current.atoms.push_back(make_atom(ProjPoint::from(x), w, std::move(t)));
    }
  }
  return current;
}

}  // namespace plurirank
