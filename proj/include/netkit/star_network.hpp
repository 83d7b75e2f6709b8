#pragma once
//
// star_network.hpp - conditional states of the Bobs after the relay's
// multipartite Bell detection.
//
// N users each hold the B half of a TMSV whose A half travels to the relay
// through an identical thermal-loss link. The relay runs the A modes through
// the beam-splitter cascade of cascade_interferometer(N), homodynes output 1
// in p and outputs 2..N in q, and broadcasts the outcome. The Bobs are left in
// a permutation-symmetric N-mode Gaussian state with
//
//   Delta = diag(y - (N-1) kappa, y - kappa),  Gamma = kappa Z,
//   kappa = z^2 / (N x).
//
// Closed forms are provided together with two brute-force conditioning
// oracles that build the full 2N-mode state and measure it.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "netkit/gaussian.hpp"

namespace netkit {

struct NetworkConfig {
  int n_users = 2;
  LinkParams link;
};

inline NetworkConfig make_network(int n_users, const LinkParams& link) {
  if (n_users < 2) throw DomainError("a star network needs at least two users");
  return NetworkConfig{n_users, link};
}

struct SplitConfig {
  int n_a = 1;
  int n_b = 1;
  NetworkConfig parent;

  int n_users() const { return parent.n_users; }
  bool full_house() const { return n_a + n_b == parent.n_users; }
  int n_other() const { return parent.n_users - n_a - n_b; }
};

inline SplitConfig make_split(int n_a, int n_b, const NetworkConfig& parent) {
  if (n_a < 1 || n_b < 1) throw SplitError("both ensembles need at least one member");
  if (n_a + n_b > parent.n_users) {
    throw SplitError("split " + std::to_string(n_a) + "+" + std::to_string(n_b) +
                     " exceeds " + std::to_string(parent.n_users) + " users");
  }
  return SplitConfig{n_a, n_b, parent};
}

// kappa = z^2 / (N x): the magnitude of every inter-user correlation.
inline double correlation_kappa(const NetworkConfig& cfg) {
  return cfg.link.z2_over_x() / cfg.n_users;
}

// Symplectic eigenvalue shared by every user mode: sqrt(y (y - z^2/x)).
inline double conditional_nu(const LinkParams& link) {
  return std::sqrt(link.y * link.conditional_variance());
}

namespace detail {

inline void require_physical_link(const LinkParams& link) {
  if (conditional_nu(link) < 1.0 - kUnphysicalTolerance) {
    throw UnphysicalState("link parameters give an unphysical conditional state");
  }
}

// Block-ordered CM with q-block a I + c J and p-block b I - c J (J = all ones),
// which is the shape of every symmetric conditional state built here.
inline Matrix symmetric_blocks(int n, double q_diag, double p_diag, double q_off, double p_off) {
  Matrix v = Matrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      v(i, j) = i == j ? q_diag : q_off;
      v(n + i, n + j) = i == j ? p_diag : p_off;
    }
  }
  return v;
}

}  // namespace detail

inline CovMatrix network_conditional_cm(const NetworkConfig& cfg) {
  detail::require_physical_link(cfg.link);
  const double kappa = correlation_kappa(cfg);
  const double a = cfg.link.conditional_variance();
  const double y = cfg.link.y;
  const int n = cfg.n_users;
  // diag: a + kappa = y - (N-1) kappa on q, y - kappa on p
  return CovMatrix::from_block(detail::symmetric_blocks(n, a + kappa, y - kappa, kappa, -kappa));
}

enum class OraclePath { dual, direct };

// Full 2N-mode state of all links, modes ordered (A1..AN, B1..BN).
inline CovMatrix network_link_cm(const NetworkConfig& cfg) {
  const int n = cfg.n_users;
  const auto& l = cfg.link;
  Matrix v = Matrix::Zero(4 * n, 4 * n);
  const int q0 = 0;
  const int p0 = 2 * n;
  for (int k = 0; k < n; ++k) {
    v(q0 + k, q0 + k) = l.x;
    v(q0 + n + k, q0 + n + k) = l.y;
    v(q0 + k, q0 + n + k) = v(q0 + n + k, q0 + k) = l.z;
    v(p0 + k, p0 + k) = l.x;
    v(p0 + n + k, p0 + n + k) = l.y;
    v(p0 + k, p0 + n + k) = v(p0 + n + k, p0 + k) = -l.z;
  }
  return CovMatrix::from_block(std::move(v));
}

// Brute-force conditional CM. `order` lists the relay outputs (0-based) in
// the order they are measured; output 0 is always measured in p, the others
// in q. An empty order means 0, 1, ..., N-1.
inline CovMatrix network_conditional_cm_oracle(const NetworkConfig& cfg, OraclePath path,
                                               std::span<const int> order = {}) {
  const int n = cfg.n_users;
  std::vector<int> sequence(order.begin(), order.end());
  if (sequence.empty()) {
    for (int k = 0; k < n; ++k) sequence.push_back(k);
  }
  if (static_cast<int>(sequence.size()) != n) {
    throw DimensionMismatch("measurement order must list every relay output once");
  }
  const Matrix r = cascade_interferometer(n).r_matrix;

  CovMatrix state = network_link_cm(cfg);
  if (path == OraclePath::direct) {
    Matrix passive = Matrix::Identity(2 * n, 2 * n);
    passive.topLeftCorner(n, n) = r;
    state = apply_symplectic(state, SymplecticMatrix::passive(passive));
  }

  // Track which original A index sits at each current position.
  std::vector<int> alive(n);
  for (int k = 0; k < n; ++k) alive[k] = k;
  for (int target : sequence) {
    auto it = std::find(alive.begin(), alive.end(), target);
    if (it == alive.end()) throw DimensionMismatch("measurement order repeats a relay output");
    const int pos = static_cast<int>(it - alive.begin());
    state = homodyne_condition(state, pos, target == 0 ? Quadrature::p : Quadrature::q);
    alive.erase(it);
  }

  if (path == OraclePath::dual) {
    // Measuring the A modes first and passing the B modes through R^T gives
    // the same state.
    state = apply_symplectic(state, SymplecticMatrix::passive(r.transpose()));
  }
  return state;
}

// Two-user marginal (Delta, Gamma; Gamma, Delta).
inline CovMatrix pair_conditional_cm(const NetworkConfig& cfg) {
  detail::require_physical_link(cfg.link);
  const double kappa = correlation_kappa(cfg);
  const double a = cfg.link.conditional_variance();
  return CovMatrix::from_block(
      detail::symmetric_blocks(2, a + kappa, cfg.link.y - kappa, kappa, -kappa));
}

// State of the symmetric combination modes (1/sqrt(n_g)) sum_{k in g} of
// consecutive groups of users with the given sizes. The remaining modes of
// each group are thermal with eigenvalue conditional_nu() and decouple:
//   q-block: a I + kappa v v^T,  p-block: y I - kappa v v^T,  v_g = sqrt(n_g).
inline CovMatrix concentrated_cm(const NetworkConfig& cfg, std::span<const int> group_sizes) {
  detail::require_physical_link(cfg.link);
  const int g = static_cast<int>(group_sizes.size());
  if (g == 0) throw DimensionMismatch("need at least one group");
  int total = 0;
  for (int s : group_sizes) {
    if (s < 1) throw SplitError("groups need at least one member");
    total += s;
  }
  if (total > cfg.n_users) throw SplitError("groups exceed the number of users");
  const double kappa = correlation_kappa(cfg);
  const double a = cfg.link.conditional_variance();
  Matrix v = Matrix::Zero(2 * g, 2 * g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const double c = kappa * std::sqrt(static_cast<double>(group_sizes[i]) * group_sizes[j]);
      v(i, j) = (i == j ? a : 0.0) + c;
      v(g + i, g + j) = (i == j ? cfg.link.y : 0.0) - c;
    }
  }
  return CovMatrix::from_block(std::move(v));
}

// Effective two-mode state (a, b) of the two ensembles.
inline CovMatrix secret_sharing_cm(const SplitConfig& split) {
  const int sizes[] = {split.n_a, split.n_b};
  return concentrated_cm(split.parent, sizes);
}

struct SqueezedParams {
  double kappa = 0.0;
  double s = 1.0;        // local squeezing for conferencing
  double s_tilde = 1.0;  // product of the two ensemble squeezings
};

// q-gain g of the local squeezer that equalizes a mode with variances
// (vq, vp): g^4 = vp / vq.
inline double equalizing_gain(double vq, double vp) { return std::pow(vp / vq, 0.25); }

inline SqueezedParams squeezed_params(const NetworkConfig& cfg) {
  SqueezedParams sp;
  sp.kappa = correlation_kappa(cfg);
  const double y = cfg.link.y;
  sp.s = std::sqrt((y - sp.kappa) / (y - sp.kappa * (cfg.n_users - 1)));
  return sp;
}

inline SqueezedParams squeezed_params(const SplitConfig& split) {
  SqueezedParams sp = squeezed_params(split.parent);
  const double y = split.parent.link.y;
  const double k = sp.kappa;
  const int n = split.n_users();
  const double num = (y - split.n_a * k) * (y - split.n_b * k);
  const double den = (y - (n - split.n_a) * k) * (y - (n - split.n_b) * k);
  sp.s_tilde = std::pow(num / den, 0.25);
  return sp;
}

// Pair state after each Bob's equalizing squeezer: alpha I on the diagonal,
// kappa diag(s, -1/s) off the diagonal.
inline CovMatrix squeezed_pair_cm(const NetworkConfig& cfg) {
  detail::require_physical_link(cfg.link);
  const auto sp = squeezed_params(cfg);
  const double y = cfg.link.y;
  const double alpha = std::sqrt((y - sp.kappa) * (y - sp.kappa * (cfg.n_users - 1)));
  return CovMatrix::from_block(
      detail::symmetric_blocks(2, alpha, alpha, sp.kappa * sp.s, -sp.kappa / sp.s));
}

// All N users squeezed: the N-mode analogue of squeezed_pair_cm.
inline CovMatrix squeezed_network_cm(const NetworkConfig& cfg) {
  detail::require_physical_link(cfg.link);
  const auto sp = squeezed_params(cfg);
  const double y = cfg.link.y;
  const double alpha = std::sqrt((y - sp.kappa) * (y - sp.kappa * (cfg.n_users - 1)));
  return CovMatrix::from_block(
      detail::symmetric_blocks(cfg.n_users, alpha, alpha, sp.kappa * sp.s, -sp.kappa / sp.s));
}

// Ensemble state after equalizing squeezers on a and b. Full house gives
// alpha_bar I blocks and kappa sqrt(NaNb) Z; otherwise alpha_a I, alpha_b I
// and sqrt(NaNb) kappa diag(s_tilde, -1/s_tilde).
inline CovMatrix squeezed_ss_cm(const SplitConfig& split) {
  detail::require_physical_link(split.parent.link);
  const auto sp = squeezed_params(split);
  const double y = split.parent.link.y;
  const double k = sp.kappa;
  const int n = split.n_users();
  const double c = std::sqrt(static_cast<double>(split.n_a) * split.n_b) * k;
  Matrix v = Matrix::Zero(4, 4);
  double alpha_a = 0.0;
  double alpha_b = 0.0;
  double cq = c;
  double cp = -c;
  if (split.full_house()) {
    alpha_a = alpha_b = std::sqrt((y - split.n_a * k) * (y - split.n_b * k));
  } else {
    alpha_a = std::sqrt((y - (n - split.n_a) * k) * (y - split.n_a * k));
    alpha_b = std::sqrt((y - (n - split.n_b) * k) * (y - split.n_b * k));
    cq = c * sp.s_tilde;
    cp = -c / sp.s_tilde;
  }
  v(0, 0) = v(2, 2) = alpha_a;
  v(1, 1) = v(3, 3) = alpha_b;
  v(0, 1) = v(1, 0) = cq;
  v(2, 3) = v(3, 2) = cp;
  return CovMatrix::from_block(std::move(v));
}

}  // namespace netkit
