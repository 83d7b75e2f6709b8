#pragma once
//
// rates.hpp - secret-key rates of the star network.
//
// Conferencing: one Bob reconciles, R = I(beta_i:beta_j) - chi(beta_i:E).
// Secret sharing: two ensembles (N_a, N_b) concentrate their modes and
// R = I(alpha:beta) - chi(alpha:E), reconciling on ensemble a.
// Both have a squeezed variant in which the Bobs equalize their local modes
// before heterodyning.
//
// All quantities are in bits per channel use.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netkit/gaussian.hpp"
#include "netkit/star_network.hpp"

namespace netkit {

enum class Protocol { conference, secret_sharing, squeezed_conference, squeezed_secret_sharing };

inline std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::conference: return "conference";
    case Protocol::secret_sharing: return "secret-sharing";
    case Protocol::squeezed_conference: return "squeezed-conference";
    case Protocol::squeezed_secret_sharing: return "squeezed-secret-sharing";
  }
  return "unknown";
}

inline std::optional<Protocol> parse_protocol(std::string_view s) {
  for (auto p : {Protocol::conference, Protocol::secret_sharing, Protocol::squeezed_conference,
                 Protocol::squeezed_secret_sharing}) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

inline bool is_secret_sharing(Protocol p) {
  return p == Protocol::secret_sharing || p == Protocol::squeezed_secret_sharing;
}

struct ConferencingSpectrum {
  double nu = 1.0;    // N-fold eigenvalue of the Bobs' conditional state
  double nu_n = 1.0;  // extra eigenvalue left after one Bob heterodynes
  double lambda = 0.0;
  double lambda_bar = 0.0;
  double tau = 0.0;
  double tau_bar = 0.0;
};

struct RateReport {
  Protocol protocol = Protocol::conference;
  int n_users = 2;
  int n_a = 0;
  int n_b = 0;
  double eta = 1.0;
  double nbar = 0.0;
  double mu_used = 1.0;
  double mutual_info = 0.0;
  double holevo = 0.0;
  double rate = 0.0;
};

// Heterodyne signal/noise terms sigma = 1 + det V + Tr V of a single user's
// mode before and after conditioning on the partner's outcome.
struct SigmaTerms {
  double sigma_s = 1.0;
  double sigma_n = 1.0;

  double mutual_info() const { return 0.5 * std::log2(sigma_s / sigma_n); }
};

namespace detail {

// 1 + det + Tr of diag(d1, d2).
inline double sigma_of_diag(double d1, double d2) { return (1.0 + d1) * (1.0 + d2); }

inline double sigma_of(const Eigen::Matrix2d& v) { return 1.0 + v.determinant() + v.trace(); }

inline RateReport make_report(Protocol protocol, const NetworkConfig& cfg, double info,
                              double chi) {
  RateReport r;
  r.protocol = protocol;
  r.n_users = cfg.n_users;
  r.eta = cfg.link.eta;
  r.nbar = cfg.link.nbar;
  r.mu_used = cfg.link.mu;
  r.mutual_info = info;
  r.holevo = chi;
  r.rate = info - chi;
  return r;
}

// With mu = 1 nothing is modulated: both information terms vanish exactly.
inline bool unmodulated(const LinkParams& link) { return link.z == 0.0; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Conferencing, coherent states

inline ConferencingSpectrum conferencing_spectrum(const NetworkConfig& cfg) {
  const auto& l = cfg.link;
  const double n = cfg.n_users;
  const double w = l.omega;
  const double mu = l.mu;
  const double eta = l.eta;
  ConferencingSpectrum sp;
  sp.nu = conditional_nu(l);
  // Same expressions as lambda = N w mu + eta [1 + (N - 1 - N w) mu] etc.,
  // regrouped into sums of non-negative terms.
  const double leak = n * w * (1.0 - eta);
  sp.lambda = leak * mu + eta + eta * (n - 1.0) * mu;
  sp.lambda_bar = leak * mu + eta * mu + eta * (n - 1.0);
  sp.tau = leak + eta * (n - 1.0 + mu);
  sp.tau_bar = leak + eta * ((n - 1.0) * mu + 1.0);
  sp.nu_n = std::sqrt((sp.lambda * sp.lambda_bar) / (sp.tau * sp.tau_bar));
  return sp;
}

// chi = 2 h(nu) - h(nu_N).
inline double conferencing_holevo(const NetworkConfig& cfg) {
  if (detail::unmodulated(cfg.link)) return 0.0;
  const auto sp = conferencing_spectrum(cfg);
  return 2.0 * entropy_h(sp.nu) - entropy_h(sp.nu_n);
}

inline SigmaTerms conferencing_sigmas(const NetworkConfig& cfg) {
  const double k = correlation_kappa(cfg);
  const double a = cfg.link.conditional_variance();
  const double n = cfg.n_users;
  const double dq = a + k;
  const double dp = a + (n - 1.0) * k;
  // Delta - Gamma (Delta + I)^-1 Gamma, entry by entry, written so that the
  // differences Delta^2 - kappa^2 never cancel.
  const double cq = (a * (a + 2.0 * k) + dq) / (dq + 1.0);
  const double cp = ((a + (n - 2.0) * k) * (a + n * k) + dp) / (dp + 1.0);
  return SigmaTerms{detail::sigma_of_diag(dq, dp), detail::sigma_of_diag(cq, cp)};
}

inline double conferencing_mi(const NetworkConfig& cfg) {
  if (detail::unmodulated(cfg.link)) return 0.0;
  return conferencing_sigmas(cfg).mutual_info();
}

inline RateReport conferencing_rate(const NetworkConfig& cfg) {
  return detail::make_report(Protocol::conference, cfg, conferencing_mi(cfg),
                             conferencing_holevo(cfg));
}

// ---------------------------------------------------------------------------
// Conferencing, squeezed

// Extra eigenvalue of the squeezed state after one heterodyne:
// (mu (mu - N kappa) + alpha) / (1 + alpha).
inline double squeezed_conferencing_nu_n(const NetworkConfig& cfg) {
  const double k = correlation_kappa(cfg);
  const double a = cfg.link.conditional_variance();
  const double n = cfg.n_users;
  const double alpha = std::sqrt((a + (n - 1.0) * k) * (a + k));
  return (cfg.link.y * a + alpha) / (1.0 + alpha);
}

inline SigmaTerms squeezed_conferencing_sigmas(const NetworkConfig& cfg) {
  const double k = correlation_kappa(cfg);
  const double a = cfg.link.conditional_variance();
  const double n = cfg.n_users;
  const double hi = a + (n - 1.0) * k;  // y - kappa
  const double lo = a + k;              // y - (N-1) kappa
  const double alpha = std::sqrt(hi * lo);
  // alpha^2 - kappa^2 s^2 and alpha^2 - kappa^2 / s^2 in factored form.
  const double det_q = hi * a * (a + 2.0 * k) / lo;
  const double det_p = lo * (a + (n - 2.0) * k) * (a + n * k) / hi;
  const double cq = (det_q + alpha) / (alpha + 1.0);
  const double cp = (det_p + alpha) / (alpha + 1.0);
  return SigmaTerms{detail::sigma_of_diag(alpha, alpha), detail::sigma_of_diag(cq, cp)};
}

inline double squeezed_conferencing_holevo(const NetworkConfig& cfg) {
  if (detail::unmodulated(cfg.link)) return 0.0;
  return 2.0 * entropy_h(conditional_nu(cfg.link)) - entropy_h(squeezed_conferencing_nu_n(cfg));
}

inline RateReport squeezed_conferencing_rate(const NetworkConfig& cfg) {
  const bool zero = detail::unmodulated(cfg.link);
  const double info = zero ? 0.0 : squeezed_conferencing_sigmas(cfg).mutual_info();
  return detail::make_report(Protocol::squeezed_conference, cfg, info,
                             squeezed_conferencing_holevo(cfg));
}

// ---------------------------------------------------------------------------
// Secret sharing

// Conditional CM of ensemble `target` after the other ensemble heterodynes.
// With N_t the target size, N_o the measured ensemble's size and
// D = N x (1 + a) + N_o z^2 (using x y - z^2 = x a):
//   V_qq = a + N_t z^2 (1 + a) / D
//   V_pp = (N x y (1 + a) + (N - N_t - N_o) y z^2 - N_t z^2) / (N x (1 + a) + (N - N_o) z^2)
inline Eigen::Matrix2d ss_conditional_closed_form(const SplitConfig& split, bool target_is_a) {
  const auto& l = split.parent.link;
  const double n = split.n_users();
  const double nt = target_is_a ? split.n_a : split.n_b;
  const double no = target_is_a ? split.n_b : split.n_a;
  const double a = l.conditional_variance();
  const double x1a = l.x * (1.0 + a);
  const double z2 = l.z * l.z;
  Eigen::Matrix2d v = Eigen::Matrix2d::Zero();
  v(0, 0) = a + nt * z2 * (1.0 + a) / (n * x1a + no * z2);
  v(1, 1) = (n * l.y * x1a + (n - nt - no) * l.y * z2 - nt * z2) / (n * x1a + (n - no) * z2);
  return v;
}

namespace detail {

// Holevo information on the reconciling ensemble a by entropy difference.
// Eve purifies all N users. After concentration the users decouple into
// thermal modes of eigenvalue nu, which cancel, and the modes (a, b[, o]),
// where o collects the users outside both ensembles. `gain_a`, `gain_b` are the equalizing
// squeezers of the squeezed protocol (1 for coherent states).
inline double ss_holevo_by_entropy(const SplitConfig& split, double gain_a, double gain_b) {
  std::vector<int> sizes = {split.n_a, split.n_b};
  if (split.n_other() > 0) sizes.push_back(split.n_other());
  const int groups = static_cast<int>(sizes.size());
  CovMatrix state = concentrated_cm(split.parent, sizes);
  state = apply_symplectic(state, SymplecticMatrix::squeezer(groups, 0, gain_a));
  state = apply_symplectic(state, SymplecticMatrix::squeezer(groups, 1, gain_b));
  const double before = von_neumann_entropy(state);
  const double after = von_neumann_entropy(heterodyne_condition(state, 0));
  return before - after;
}

inline double ss_mutual_info(const CovMatrix& ab) {
  const Eigen::Matrix2d da = ab.mode_block(0, 0);
  const Eigen::Matrix2d a_given_b = heterodyne_condition(ab, 1).mode_block(0, 0);
  return 0.5 * std::log2(sigma_of(da) / sigma_of(a_given_b));
}

}  // namespace detail

inline SigmaTerms secret_sharing_sigmas(const SplitConfig& split) {
  const double k = correlation_kappa(split.parent);
  const double a = split.parent.link.conditional_variance();
  const double n = split.n_users();
  const double na = split.n_a;
  const double nb = split.n_b;
  const double aq = a + na * k;
  const double ap = a + (n - na) * k;
  const double bq = a + nb * k;
  const double bp = a + (n - nb) * k;
  // Delta_a - Gamma' (Delta_b + I)^-1 Gamma' with the products
  // Delta_a Delta_b - Gamma'^2 expanded.
  const double det_q = a * a + a * (na + nb) * k;
  const double det_p = a * a + a * (2.0 * n - na - nb) * k + n * (n - na - nb) * k * k;
  const double cq = (det_q + aq) / (bq + 1.0);
  const double cp = (det_p + ap) / (bp + 1.0);
  return SigmaTerms{detail::sigma_of_diag(aq, ap), detail::sigma_of_diag(cq, cp)};
}

// chi(alpha:E). Full house: 2 h(nu) - h(sqrt(det V_{b|alpha})). Otherwise the
// users outside both ensembles enter Eve's purification and the bound is an
// entropy difference over the concentrated modes.
inline double secret_sharing_holevo(const SplitConfig& split) {
  if (detail::unmodulated(split.parent.link)) return 0.0;
  if (split.full_house()) {
    const double nu_ss = std::sqrt(ss_conditional_closed_form(split, false).determinant());
    return 2.0 * entropy_h(conditional_nu(split.parent.link)) - entropy_h(nu_ss);
  }
  return detail::ss_holevo_by_entropy(split, 1.0, 1.0);
}

inline RateReport secret_sharing_rate(const SplitConfig& split) {
  const bool zero = detail::unmodulated(split.parent.link);
  const double info = zero ? 0.0 : secret_sharing_sigmas(split).mutual_info();
  auto r = detail::make_report(Protocol::secret_sharing, split.parent, info,
                               secret_sharing_holevo(split));
  r.n_a = split.n_a;
  r.n_b = split.n_b;
  return r;
}

// Full-house squeezed sharing: the doubly conditional state is nu' I with
// nu' = (y (y - N kappa) + alpha_bar) / (1 + alpha_bar).
inline double squeezed_ss_nu_prime(const SplitConfig& split) {
  const double k = correlation_kappa(split.parent);
  const double a = split.parent.link.conditional_variance();
  const double alpha_bar = std::sqrt((a + split.n_b * k) * (a + split.n_a * k));
  return (split.parent.link.y * a + alpha_bar) / (1.0 + alpha_bar);
}

// Full house: I = -log2(1 - (sqrt(NaNb) kappa / (1 + alpha_bar))^2).
inline double squeezed_ss_mi_closed_form(const SplitConfig& split) {
  const double k = correlation_kappa(split.parent);
  const double y = split.parent.link.y;
  const double alpha_bar = std::sqrt((y - split.n_a * k) * (y - split.n_b * k));
  const double ratio = std::sqrt(static_cast<double>(split.n_a) * split.n_b) * k / (1.0 + alpha_bar);
  return -std::log2(1.0 - ratio * ratio);
}

inline RateReport squeezed_ss_rate(const SplitConfig& split) {
  double info = 0.0;
  double chi = 0.0;
  if (!detail::unmodulated(split.parent.link)) {
    if (split.full_house()) {
      info = squeezed_ss_mi_closed_form(split);
      chi = 2.0 * entropy_h(conditional_nu(split.parent.link)) -
            entropy_h(squeezed_ss_nu_prime(split));
    } else {
      info = detail::ss_mutual_info(squeezed_ss_cm(split));
      const auto ab = secret_sharing_cm(split);
      const double ga = equalizing_gain(ab.cov(0, Quadrature::q, 0, Quadrature::q),
                                        ab.cov(0, Quadrature::p, 0, Quadrature::p));
      const double gb = equalizing_gain(ab.cov(1, Quadrature::q, 1, Quadrature::q),
                                        ab.cov(1, Quadrature::p, 1, Quadrature::p));
      chi = detail::ss_holevo_by_entropy(split, ga, gb);
    }
  }
  auto r = detail::make_report(Protocol::squeezed_secret_sharing, split.parent, info, chi);
  r.n_a = split.n_a;
  r.n_b = split.n_b;
  return r;
}

// ---------------------------------------------------------------------------
// Problem description, modulation optimization and distances

// Everything a rate needs except the modulation mu.
struct RateProblem {
  Protocol protocol = Protocol::conference;
  int n_users = 2;
  int n_a = 0;  // secret sharing only
  int n_b = 0;
  double eta = 1.0;
  double nbar = 0.0;
  double xi = 1.0;  // reconciliation efficiency applied to I
};

inline void validate(const RateProblem& p) {
  if (p.n_users < 2) throw DomainError("a star network needs at least two users");
  if (!(p.eta > 0.0 && p.eta <= 1.0)) throw DomainError("transmissivity eta must be in (0, 1]");
  if (!(p.nbar >= 0.0)) throw DomainError("thermal photon number must be >= 0");
  if (!(p.xi > 0.0 && p.xi <= 1.0)) throw DomainError("reconciliation efficiency must be in (0, 1]");
  if (is_secret_sharing(p.protocol)) {
    if (p.n_a < 1 || p.n_b < 1 || p.n_a + p.n_b > p.n_users) {
      throw SplitError("invalid split for secret sharing");
    }
  }
}

namespace detail {

inline RateReport dispatch_rate(const RateProblem& p, double mu) {
  const auto cfg = make_network(p.n_users, link_params(mu, p.eta, p.nbar));
  switch (p.protocol) {
    case Protocol::conference: return conferencing_rate(cfg);
    case Protocol::squeezed_conference: return squeezed_conferencing_rate(cfg);
    case Protocol::secret_sharing: return secret_sharing_rate(make_split(p.n_a, p.n_b, cfg));
    case Protocol::squeezed_secret_sharing: return squeezed_ss_rate(make_split(p.n_a, p.n_b, cfg));
  }
  throw DomainError("unknown protocol");
}

}  // namespace detail

// Rate xi I - chi at modulation mu.
inline RateReport evaluate_rate(const RateProblem& p, double mu) {
  auto r = detail::dispatch_rate(p, mu);
  if (p.xi != 1.0) r.rate = p.xi * r.mutual_info - r.holevo;
  return r;
}

struct MuRange {
  double lo = 1.0;
  double hi = 1e6;
};

inline constexpr MuRange kDefaultMuRange{};
inline constexpr int kMuPrescanPoints = 200;
inline constexpr double kMuRelativeTolerance = 1e-6;

struct MuOptimum {
  double mu_star = 1.0;
  RateReport report;
};

// Maximizes the rate over mu: a log-spaced pre-scan picks the best grid
// point, then golden-section search on log(mu) refines inside the bracket of
// its two neighbours.
inline MuOptimum optimize_mu(const RateProblem& p, MuRange range = kDefaultMuRange) {
  if (!(range.lo >= 1.0) || !(range.hi <= 1e6) || !(range.lo <= range.hi)) {
    throw DomainError("mu range must be a non-empty subset of [1, 1e6]");
  }
  validate(p);
  auto rate_at = [&](double t) { return evaluate_rate(p, std::exp(t)); };

  const double t_lo = std::log(range.lo);
  const double t_hi = std::log(range.hi);
  MuOptimum best{range.lo, rate_at(t_lo)};
  if (range.lo == range.hi) return best;

  const int points = kMuPrescanPoints;
  std::vector<double> grid(points);
  int best_index = 0;
  for (int i = 0; i < points; ++i) {
    grid[i] = i == points - 1 ? t_hi : t_lo + (t_hi - t_lo) * i / (points - 1);
    const auto r = rate_at(grid[i]);
    if (r.rate > best.report.rate) {
      best = {std::exp(grid[i]), r};
      best_index = i;
    }
  }

  double a = grid[std::max(best_index - 1, 0)];
  double b = grid[std::min(best_index + 1, points - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  auto rc = rate_at(c);
  auto rd = rate_at(d);
  while (b - a > kMuRelativeTolerance) {
    if (rc.rate >= rd.rate) {
      b = d;
      d = c;
      rd = rc;
      c = b - inv_phi * (b - a);
      rc = rate_at(c);
    } else {
      a = c;
      c = d;
      rc = rd;
      d = a + inv_phi * (b - a);
      rd = rate_at(d);
    }
  }
  for (const auto& [t, r] : {std::pair{c, rc}, std::pair{d, rd}}) {
    if (r.rate > best.report.rate) best = {std::exp(t), r};
  }
  return best;
}

struct DistanceMap {
  double distance_km = 0.0;
  double attenuation_db_per_km = 0.2;
};

inline double eta_from_distance(const DistanceMap& map) {
  if (!(map.distance_km >= 0.0)) throw DomainError("distance must be >= 0");
  if (!(map.attenuation_db_per_km >= 0.0)) throw DomainError("attenuation must be >= 0");
  return std::pow(10.0, -map.attenuation_db_per_km * map.distance_km / 10.0);
}

inline double eta_from_distance(double distance_km) {
  return eta_from_distance(DistanceMap{distance_km});
}

inline constexpr double kMaxDistanceBracketKm = 500.0;
inline constexpr double kDistanceToleranceKm = 1e-5;
// A mu-optimized rate counts as positive above this level.
inline constexpr double kPositiveRate = 1e-12;

// Largest fiber distance with a positive mu-optimized rate, by bisection on
// [0, 500] km. `problem.eta` is ignored. Returns 0 when even d = 0 gives no key.
inline double max_distance(RateProblem problem, double attenuation_db_per_km = 0.2,
                           MuRange range = kDefaultMuRange) {
  auto positive = [&](double d) {
    problem.eta = eta_from_distance(DistanceMap{d, attenuation_db_per_km});
    return optimize_mu(problem, range).report.rate > kPositiveRate;
  };
  if (!positive(0.0)) return 0.0;
  double lo = 0.0;
  double hi = kMaxDistanceBracketKm;
  if (positive(hi)) return hi;
  while (hi - lo > kDistanceToleranceKm) {
    const double mid = 0.5 * (lo + hi);
    (positive(mid) ? lo : hi) = mid;
  }
  return lo;
}

// -log2(1 - eta); nullopt marks the unbounded lossless case.
inline std::optional<double> plob_bound(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("transmissivity eta must be in (0, 1]");
  if (eta == 1.0) return std::nullopt;
  return -std::log2(1.0 - eta);
}

inline double throughput(double rate_bits_per_use, double clock_hz) {
  if (!(clock_hz >= 0.0)) throw DomainError("clock rate must be >= 0");
  return rate_bits_per_use * clock_hz;
}

// Worst case of an asymmetric star: minimum transmissivity combined with the
// maximum thermal noise, at the common modulation.
inline LinkParams worst_case_link(std::span<const LinkParams> links) {
  if (links.empty()) throw DomainError("need at least one link");
  double eta = links.front().eta;
  double nbar = links.front().nbar;
  const double mu = links.front().mu;
  for (const auto& l : links) {
    if (l.mu != mu) throw DomainError("links must share the same modulation");
    eta = std::min(eta, l.eta);
    nbar = std::max(nbar, l.nbar);
  }
  return link_params(mu, eta, nbar);
}

// Pessimistic link for finite-size estimates: transmissivity lowered and
// thermal noise raised by the given confidence offsets.
inline LinkParams widen_link(const LinkParams& link, double eta_offset, double nbar_offset) {
  if (!(eta_offset >= 0.0) || !(nbar_offset >= 0.0)) {
    throw DomainError("confidence offsets must be >= 0");
  }
  if (!(link.eta - eta_offset > 0.0)) throw DomainError("eta offset leaves no transmissivity");
  return link_params(link.mu, link.eta - eta_offset, link.nbar + nbar_offset);
}

// ---------------------------------------------------------------------------
// Finite-size composable rate

enum class LogBase { two, natural };

struct FiniteSizeParams {
  double ec_efficiency = 0.95;
  double block_size = 1e9;
  int bits_per_quadrature = 5;
  double delta_s = 4.3e-10;
  double delta_ec = 4.3e-10;
  double delta_pe = 4.3e-10;
  double success_prob = 0.9;
  LogBase aep_log_base = LogBase::two;

  double delta() const { return delta_s + delta_ec + delta_pe; }

  void validate() const {
    if (!(ec_efficiency > 0.0 && ec_efficiency <= 1.0)) {
      throw DomainError("error-correction efficiency must be in (0, 1]");
    }
    if (!(block_size >= 1.0)) throw DomainError("block size must be >= 1");
    if (bits_per_quadrature < 1) throw DomainError("discretization needs at least one bit");
    if (!(delta_s > 0.0 && delta_ec > 0.0 && delta_pe > 0.0)) {
      throw DomainError("security parameters must be positive");
    }
    if (!(delta() < 1.0)) throw DomainError("total security parameter must be below 1");
    if (!(success_prob > 0.0 && success_prob <= 1.0)) {
      throw DomainError("success probability must be in (0, 1]");
    }
  }
};

// Delta_AEP(eps, d) taken at its upper bound 4 (d + 1) sqrt(log(2 / eps^2)).
inline double aep_correction(double eps, int bits, LogBase base = LogBase::two) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("smoothing parameter must be in (0, 1)");
  const double arg = 2.0 / (eps * eps);
  const double lg = base == LogBase::two ? std::log2(arg) : std::log(arg);
  return 4.0 * (bits + 1.0) * std::sqrt(lg);
}

// r_n = xi I - chi_worst - Delta_AEP(2 p delta_s / 3, d) / sqrt(n). May be
// negative; callers report it as is.
inline double finite_size_rate(double mutual_info, double chi_worst, const FiniteSizeParams& fs) {
  fs.validate();
  const double eps = 2.0 * fs.success_prob * fs.delta_s / 3.0;
  return fs.ec_efficiency * mutual_info - chi_worst -
         aep_correction(eps, fs.bits_per_quadrature, fs.aep_log_base) / std::sqrt(fs.block_size);
}

}  // namespace netkit
