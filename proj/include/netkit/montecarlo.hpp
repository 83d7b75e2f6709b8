#pragma once
//
// montecarlo.hpp - outcome-level simulation of the star network.
//
// Every measurement in the protocol is Gaussian, so the joint outcome
// distribution is multivariate normal and can be sampled classically from
// Wigner-function values: TMSV pairs, beam-splitter mixing with a thermal
// environment, the relay cascade, and unit vacuum noise per heterodyne
// quadrature. Residual covariances of the Bob outcomes after linear
// regression on the broadcast gamma are then compared with V_B|gamma + I.
//
// Shots are split into fixed-size chunks. Chunk c draws from its own
// mt19937_64 seeded by seed_seq(seed_lo, seed_hi, c), and per-chunk sums are
// merged in chunk order, so results do not depend on the thread count.

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/seed_seq.hpp>
#include <boost/version.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "netkit/parallel.hpp"
#include "netkit/rates.hpp"
#include "netkit/star_network.hpp"

namespace netkit {

inline constexpr int kRngSchemeVersion = 1;
inline const std::string kRngAlgorithm =
    "boost::random::mt19937_64+normal_distribution(ziggurat);seed_seq(seed_lo,seed_hi,chunk);boost-" +
    std::to_string(BOOST_VERSION);
inline constexpr std::size_t kChunkShots = 16384;

struct SimOptions {
  // Off: record the Bobs' Wigner quadratures without the heterodyne vacuum
  // unit. Useful for checks whose signal is far below one shot-noise unit.
  bool heterodyne = true;
};

// Per-shot outcomes, one row per shot. gamma = (q2', ..., qN', p1') of the
// relay outputs; beta = (q_B1..q_BN, p_B1..p_BN).
struct SimRun {
  NetworkConfig config;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  SimOptions options;
  Matrix gamma;
  Matrix beta;
};

namespace detail {

inline std::size_t chunk_count(std::size_t shots) { return (shots + kChunkShots - 1) / kChunkShots; }

inline std::size_t chunk_size(std::size_t shots, std::size_t chunk) {
  return std::min(kChunkShots, shots - chunk * kChunkShots);
}

inline void validate_sim(const NetworkConfig& cfg, std::size_t shots) {
  if (shots < 1) throw DomainError("need at least one shot");
  if (cfg.n_users < 2) throw DomainError("a star network needs at least two users");
  if (!(cfg.link.mu >= 1.0)) throw InvalidModulation("mu must be >= 1");
}

// Rows of (gamma, beta) for one chunk: N + 2N columns.
inline Matrix simulate_chunk(const NetworkConfig& cfg, std::uint64_t seed, std::size_t chunk,
                             std::size_t count, const SimOptions& opt) {
  const int n = cfg.n_users;
  const auto& l = cfg.link;
  boost::random::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                              static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(chunk)};
  boost::random::mt19937_64 engine(seq);
  boost::random::normal_distribution<double> normal;

  const Matrix r = cascade_interferometer(n).r_matrix;
  const double sqrt_mu = std::sqrt(l.mu);
  // TMSV: q_A = sqrt(mu) g1, q_B = (c g1 + g2) / sqrt(mu), c = sqrt(mu^2 - 1);
  // the p pair has the opposite correlation.
  const double c = std::sqrt(l.mu * l.mu - 1.0);
  const double t = std::sqrt(l.eta);
  const double leak = std::sqrt((1.0 - l.eta) * l.omega);

  Matrix rows(static_cast<Eigen::Index>(count), 3 * n);
  Vector qa(n), pa(n), qb(n), pb(n);
  for (std::size_t s = 0; s < count; ++s) {
    for (int k = 0; k < n; ++k) {
      const double g1 = normal(engine);
      const double g2 = normal(engine);
      const double h1 = normal(engine);
      const double h2 = normal(engine);
      qa(k) = sqrt_mu * g1;
      qb(k) = (c * g1 + g2) / sqrt_mu;
      pa(k) = sqrt_mu * h1;
      pb(k) = (-c * h1 + h2) / sqrt_mu;
      // thermal-loss channel on A
      qa(k) = t * qa(k) + leak * normal(engine);
      pa(k) = t * pa(k) + leak * normal(engine);
    }
    const Vector qo = r * qa;
    const Vector po = r * pa;
    auto row = rows.row(static_cast<Eigen::Index>(s));
    for (int k = 1; k < n; ++k) row(k - 1) = qo(k);
    row(n - 1) = po(0);
    for (int k = 0; k < n; ++k) {
      row(n + k) = qb(k);
      row(2 * n + k) = pb(k);
    }
    if (opt.heterodyne) {
      for (int k = 0; k < 2 * n; ++k) row(n + k) += normal(engine);
    }
  }
  return rows;
}

}  // namespace detail

inline SimRun sample_protocol(const NetworkConfig& cfg, std::size_t shots, std::uint64_t seed,
                              SimOptions opt = {}) {
  detail::validate_sim(cfg, shots);
  const int n = cfg.n_users;
  SimRun run{cfg, shots, seed, opt, Matrix(shots, n), Matrix(shots, 2 * n)};
  const std::size_t chunks = detail::chunk_count(shots);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t count = detail::chunk_size(shots, c);
    const Matrix rows = detail::simulate_chunk(cfg, seed, c, count, opt);
    const auto first = static_cast<Eigen::Index>(c * kChunkShots);
    const auto len = static_cast<Eigen::Index>(count);
    run.gamma.middleRows(first, len) = rows.leftCols(n);
    run.beta.middleRows(first, len) = rows.rightCols(2 * n);
  });
  return run;
}

// Sufficient statistics of a stream of row vectors.
struct MomentSums {
  std::size_t n = 0;
  Vector sum;
  Matrix outer;

  explicit MomentSums(int dim = 0) : sum(Vector::Zero(dim)), outer(Matrix::Zero(dim, dim)) {}

  void add_rows(const Matrix& rows) {
    n += static_cast<std::size_t>(rows.rows());
    sum += rows.colwise().sum().transpose();
    outer.noalias() += rows.transpose() * rows;
  }

  void merge(const MomentSums& other) {
    n += other.n;
    sum += other.sum;
    outer += other.outer;
  }

  Vector mean() const { return sum / static_cast<double>(n); }

  Matrix covariance() const {
    const Vector m = mean();
    return (outer - static_cast<double>(n) * m * m.transpose()) / static_cast<double>(n - 1);
  }
};

// beta = intercept + gain gamma + residual, fitted by least squares.
struct Regression {
  std::size_t shots = 0;
  Matrix gain;
  Vector intercept;
  Matrix residual_cov;  // unbiased: RSS / (n - p - 1)
};

inline Regression regress(const MomentSums& m, int n_gamma) {
  const int dim = static_cast<int>(m.sum.size());
  const int n_beta = dim - n_gamma;
  if (m.n < static_cast<std::size_t>(n_gamma + 2)) {
    throw DomainError("too few shots for the regression");
  }
  const Matrix s = m.covariance();
  const Matrix sgg = s.topLeftCorner(n_gamma, n_gamma);
  const Matrix sbg = s.bottomLeftCorner(n_beta, n_gamma);
  const Matrix sbb = s.bottomRightCorner(n_beta, n_beta);
  Regression reg;
  reg.shots = m.n;
  reg.gain = sgg.ldlt().solve(sbg.transpose()).transpose();
  const Vector mu = m.mean();
  reg.intercept = mu.tail(n_beta) - reg.gain * mu.head(n_gamma);
  const double dof_scale =
      static_cast<double>(m.n - 1) / static_cast<double>(m.n - static_cast<std::size_t>(n_gamma) - 1);
  reg.residual_cov = detail::symmetrized(sbb - reg.gain * sbg.transpose()) * dof_scale;
  return reg;
}

// Moments of the (gamma, beta) rows, accumulated per chunk and merged in
// chunk order. `per_chunk`, if given, receives the individual chunk sums.
inline MomentSums simulate_moments(const NetworkConfig& cfg, std::size_t shots, std::uint64_t seed,
                                   SimOptions opt = {}, std::vector<MomentSums>* per_chunk = nullptr) {
  detail::validate_sim(cfg, shots);
  const int dim = 3 * cfg.n_users;
  const std::size_t chunks = detail::chunk_count(shots);
  std::vector<MomentSums> parts(chunks, MomentSums(dim));
  parallel_for(chunks, [&](std::size_t c) {
    parts[c].add_rows(detail::simulate_chunk(cfg, seed, c, detail::chunk_size(shots, c), opt));
  });
  MomentSums total(dim);
  for (const auto& p : parts) total.merge(p);
  if (per_chunk) *per_chunk = std::move(parts);
  return total;
}

struct EmpiricalStats {
  std::size_t shots = 0;
  Matrix empirical_cov;
  Matrix analytic_cov;
  Matrix standard_errors;
  Matrix gain;  // fitted gamma -> beta map, reported for inspection
  double max_abs_dev = 0.0;
  double max_dev_in_se = 0.0;
  // max |emp - ana| / sqrt(ana_ii ana_jj)
  double max_rel_dev = 0.0;
  double fraction_within_5se = 0.0;
};

inline Matrix analytic_outcome_cov(const NetworkConfig& cfg, const SimOptions& opt) {
  Matrix v = network_conditional_cm(cfg).block();
  if (opt.heterodyne) v += Matrix::Identity(v.rows(), v.cols());
  return v;
}

// Entry-wise comparison of an empirical covariance with its target.
inline EmpiricalStats compare_covariances(const Matrix& empirical, const Matrix& analytic,
                                          std::size_t shots) {
  EmpiricalStats st;
  st.shots = shots;
  st.empirical_cov = empirical;
  st.analytic_cov = analytic;
  const auto dim = analytic.rows();
  st.standard_errors = Matrix::Zero(dim, dim);
  const double n = static_cast<double>(shots);
  int within = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double a = analytic(i, j);
      const double aii = analytic(i, i);
      const double ajj = analytic(j, j);
      // Var of a Gaussian sample covariance entry: (S_ii S_jj + S_ij^2) / n.
      const double se = std::sqrt((aii * ajj + a * a) / n);
      st.standard_errors(i, j) = se;
      const double dev = std::abs(empirical(i, j) - a);
      st.max_abs_dev = std::max(st.max_abs_dev, dev);
      st.max_dev_in_se = std::max(st.max_dev_in_se, dev / se);
      st.max_rel_dev = std::max(st.max_rel_dev, dev / std::sqrt(aii * ajj));
      if (dev <= 5.0 * se) ++within;
    }
  }
  st.fraction_within_5se = static_cast<double>(within) / static_cast<double>(dim * dim);
  return st;
}

inline EmpiricalStats compare_to_analytic(const NetworkConfig& cfg, const Regression& reg,
                                          const SimOptions& opt = {}) {
  auto st = compare_covariances(reg.residual_cov, analytic_outcome_cov(cfg, opt), reg.shots);
  st.gain = reg.gain;
  return st;
}

inline EmpiricalStats verify_conditional_cm(const NetworkConfig& cfg, std::size_t shots,
                                            std::uint64_t seed, SimOptions opt = {}) {
  if (shots < 10 * static_cast<std::size_t>(cfg.n_users)) {
    throw DomainError("need at least 10 N shots for the regression");
  }
  const auto moments = simulate_moments(cfg, shots, seed, opt);
  return compare_to_analytic(cfg, regress(moments, cfg.n_users), opt);
}

// Relative tolerance on max_rel_dev: 1% at 10^6 shots, scaled as shots^-1/2.
inline double relative_tolerance(std::size_t shots) {
  return 0.01 * std::sqrt(1e6 / static_cast<double>(shots));
}

// Cross-covariance of the residuals beta - gain gamma with gamma on fresh
// moments. Zero up to sampling noise when the conditional mean is linear.
inline Matrix residual_gamma_cov(const Regression& fit, const MomentSums& fresh, int n_gamma) {
  const Matrix s = fresh.covariance();
  const Matrix sgg = s.topLeftCorner(n_gamma, n_gamma);
  const Matrix sbg = s.bottomLeftCorner(s.rows() - n_gamma, n_gamma);
  return sbg - fit.gain * sgg;
}

struct MiEstimate {
  double bits = 0.0;
  double standard_error = 0.0;
  std::size_t batches = 0;
};

namespace detail {

// Gaussian mutual information between the heterodyne outcomes of users i
// and j given the residual covariance of all beta (block ordering).
inline double pair_mi_from_cov(const Matrix& cov, int n, int i, int j) {
  const std::vector<int> idx = {i, n + i, j, n + j};
  const Matrix c = cov(idx, idx);
  const Eigen::Matrix2d ii = c.topLeftCorner(2, 2);
  const Eigen::Matrix2d ij = c.topRightCorner(2, 2);
  const Eigen::Matrix2d jj = c.bottomRightCorner(2, 2);
  const Eigen::Matrix2d cond = ii - ij * jj.inverse() * ij.transpose();
  return 0.5 * std::log2(ii.determinant() / cond.determinant());
}

// Large-sample standard error of the Gaussian estimate, for runs too short
// for batch means. With canonical correlations rho_k the estimate has
// variance sum rho_k^2 / (n ln^2 2); the second term is the spread of the
// chi-square law that takes over as the correlations vanish.
inline double pair_mi_asymptotic_se(const Matrix& cov, int n, int i, int j, std::size_t shots) {
  const std::vector<int> idx = {i, n + i, j, n + j};
  const Matrix c = cov(idx, idx);
  const Eigen::Matrix2d ii = c.topLeftCorner(2, 2);
  const Eigen::Matrix2d ij = c.topRightCorner(2, 2);
  const Eigen::Matrix2d jj = c.bottomRightCorner(2, 2);
  const double rho2 = (ii.inverse() * ij * jj.inverse() * ij.transpose()).trace();
  const double ln2 = std::log(2.0);
  const double m = static_cast<double>(shots);
  const double null_spread = std::sqrt(8.0) / (2.0 * m * ln2);
  return std::sqrt(rho2 / (m * ln2 * ln2) + null_spread * null_spread);
}

}  // namespace detail

// Mutual information between beta_i and beta_j given gamma. The standard
// error comes from batch means over the simulation chunks, or from the
// large-sample formula when fewer than two full chunks were drawn.
inline MiEstimate estimate_pair_mi(const NetworkConfig& cfg, std::size_t shots, std::uint64_t seed,
                                   int i = 0, int j = 1) {
  const int n = cfg.n_users;
  if (shots < 10 * static_cast<std::size_t>(n)) {
    throw DomainError("need at least 10 N shots for the regression");
  }
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) throw DimensionMismatch("invalid user pair");
  std::vector<MomentSums> chunks;
  const auto total = simulate_moments(cfg, shots, seed, {}, &chunks);
  MiEstimate est;
  est.bits = detail::pair_mi_from_cov(regress(total, n).residual_cov, n, i, j);

  // Batch means: only full chunks, so all batches carry equal weight.
  std::vector<double> values;
  for (const auto& c : chunks) {
    if (c.n == kChunkShots) values.push_back(detail::pair_mi_from_cov(regress(c, n).residual_cov, n, i, j));
  }
  est.batches = values.size();
  if (values.size() < 2) {
    est.standard_error = detail::pair_mi_asymptotic_se(regress(total, n).residual_cov, n, i, j, shots);
  } else {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double batch_var = ss / static_cast<double>(values.size() - 1);
    // Each batch holds kChunkShots shots; rescale to the full run.
    est.standard_error = std::sqrt(batch_var * static_cast<double>(kChunkShots) / static_cast<double>(shots));
  }
  return est;
}

struct ConvergencePoint {
  std::size_t shots = 0;
  double mean_max_abs_dev = 0.0;
};

struct ConvergenceFit {
  std::vector<ConvergencePoint> points;
  double slope = 0.0;  // d log(dev) / d log(shots)
};

// Mean max-abs deviation over `replicates` seeds per shot count, and the
// least-squares slope of log(dev) against log(shots).
inline ConvergenceFit convergence_slope(const NetworkConfig& cfg, const std::vector<std::size_t>& shot_counts,
                                        int replicates, std::uint64_t seed) {
  if (shot_counts.size() < 2) throw DomainError("need at least two shot counts");
  if (replicates < 1) throw DomainError("need at least one replicate");
  ConvergenceFit fit;
  for (std::size_t s = 0; s < shot_counts.size(); ++s) {
    double acc = 0.0;
    for (int r = 0; r < replicates; ++r) {
      const std::uint64_t sub = seed + 1000003ull * (s + 1) + static_cast<std::uint64_t>(r);
      acc += verify_conditional_cm(cfg, shot_counts[s], sub).max_abs_dev;
    }
    fit.points.push_back({shot_counts[s], acc / replicates});
  }
  double mx = 0.0, my = 0.0;
  for (const auto& p : fit.points) {
    mx += std::log(static_cast<double>(p.shots));
    my += std::log(p.mean_max_abs_dev);
  }
  const double k = static_cast<double>(fit.points.size());
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : fit.points) {
    const double dx = std::log(static_cast<double>(p.shots)) - mx;
    sxy += dx * (std::log(p.mean_max_abs_dev) - my);
    sxx += dx * dx;
  }
  fit.slope = sxy / sxx;
  return fit;
}

}  // namespace netkit
