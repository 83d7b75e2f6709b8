#pragma once
//
// gaussian.hpp - covariance-matrix toolkit for zero-mean Gaussian states.
//
// Conventions used throughout netkit:
//   * vacuum quadrature variance is 1 (shot-noise units);
//   * an m-mode covariance matrix is stored in block ordering
//     (q1, ..., qm, p1, ..., pm). from_interleaved()/interleaved() convert
//     from/to the (q1, p1, ..., qm, pm) ordering at the boundaries;
//   * entropies are in bits.
//
// Every function here is pure; values are immutable once built.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "netkit/error.hpp"

namespace netkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Quadrature { q, p };

inline constexpr std::string_view kQuadratureOrdering = "q1..qm,p1..pm";

// Symplectic eigenvalues within this distance below 1 are clamped to 1.
inline constexpr double kClampTolerance = 1e-9;
// Below 1 - kUnphysicalTolerance a spectrum is rejected outright.
inline constexpr double kUnphysicalTolerance = 1e-6;
inline constexpr double kSymmetryTolerance = 1e-12;

namespace detail {

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Index of quadrature `quad` of `mode` inside a block-ordered vector.
inline int quad_index(int modes, int mode, Quadrature quad) {
  return quad == Quadrature::q ? mode : modes + mode;
}

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace detail

// Standard symplectic form for the block ordering: [[0, I], [-I, 0]].
inline Matrix symplectic_form(int modes) {
  Matrix omega = Matrix::Zero(2 * modes, 2 * modes);
  omega.topRightCorner(modes, modes).setIdentity();
  omega.bottomLeftCorner(modes, modes) = -Matrix::Identity(modes, modes);
  return omega;
}

// Permutation P with v_block = P * v_interleaved.
inline Matrix interleaved_to_block_permutation(int modes) {
  Matrix perm = Matrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    perm(k, 2 * k) = 1.0;
    perm(modes + k, 2 * k + 1) = 1.0;
  }
  return perm;
}

class CovMatrix {
 public:
  // Takes a block-ordered matrix. Throws DimensionMismatch for a non-square
  // or odd-sized input and DomainError when it is not symmetric.
  static CovMatrix from_block(Matrix v) {
    if (v.rows() != v.cols() || v.rows() == 0 || v.rows() % 2 != 0) {
      throw DimensionMismatch("covariance matrix must be square with even, nonzero size");
    }
    const double scale = std::max(1.0, detail::max_abs(v));
    if (detail::max_abs(v - v.transpose()) > kSymmetryTolerance * scale) {
      throw DomainError("covariance matrix is not symmetric");
    }
    return CovMatrix(detail::symmetrized(v));
  }

  static CovMatrix from_interleaved(const Matrix& v) {
    if (v.rows() != v.cols() || v.rows() == 0 || v.rows() % 2 != 0) {
      throw DimensionMismatch("covariance matrix must be square with even, nonzero size");
    }
    const Matrix perm = interleaved_to_block_permutation(static_cast<int>(v.rows() / 2));
    return from_block(perm * v * perm.transpose());
  }

  int modes() const { return static_cast<int>(v_.rows() / 2); }
  const Matrix& block() const { return v_; }

  Matrix interleaved() const {
    const Matrix perm = interleaved_to_block_permutation(modes());
    return perm.transpose() * v_ * perm;
  }

  double operator()(int row, int col) const { return v_(row, col); }

  // Covariance between quadrature `qa` of mode a and `qb` of mode b.
  double cov(int a, Quadrature qa, int b, Quadrature qb) const {
    return v_(detail::quad_index(modes(), a, qa), detail::quad_index(modes(), b, qb));
  }

  // 2x2 block (q, p) x (q, p) between modes a and b.
  Eigen::Matrix2d mode_block(int a, int b) const {
    Eigen::Matrix2d out;
    out << cov(a, Quadrature::q, b, Quadrature::q), cov(a, Quadrature::q, b, Quadrature::p),
        cov(a, Quadrature::p, b, Quadrature::q), cov(a, Quadrature::p, b, Quadrature::p);
    return out;
  }

  // Reduced state of the listed modes, in the listed order.
  CovMatrix reduced(std::span<const int> keep) const {
    const int m = modes();
    const int k = static_cast<int>(keep.size());
    if (k == 0) throw DimensionMismatch("reduced state needs at least one mode");
    std::vector<int> idx(2 * k);
    for (int i = 0; i < k; ++i) {
      if (keep[i] < 0 || keep[i] >= m) throw DimensionMismatch("mode index out of range");
      idx[i] = keep[i];
      idx[k + i] = m + keep[i];
    }
    return CovMatrix(v_(idx, idx));
  }

 private:
  explicit CovMatrix(Matrix v) : v_(std::move(v)) {}

  Matrix v_;
};

class SymplecticMatrix {
 public:
  // Validates S Omega S^T = Omega to 1e-10.
  static SymplecticMatrix from_block(Matrix s) {
    if (s.rows() != s.cols() || s.rows() == 0 || s.rows() % 2 != 0) {
      throw DimensionMismatch("symplectic matrix must be square with even, nonzero size");
    }
    const Matrix omega = symplectic_form(static_cast<int>(s.rows() / 2));
    if (detail::max_abs(s * omega * s.transpose() - omega) > 1e-10) {
      throw DomainError("matrix is not symplectic");
    }
    return SymplecticMatrix(std::move(s));
  }

  static SymplecticMatrix identity(int modes) {
    return SymplecticMatrix(Matrix::Identity(2 * modes, 2 * modes));
  }

  // Passive linear optics: the same orthogonal matrix on q and on p.
  static SymplecticMatrix passive(const Matrix& orthogonal) {
    if (orthogonal.rows() != orthogonal.cols()) {
      throw DimensionMismatch("passive transform needs a square matrix");
    }
    const auto n = orthogonal.rows();
    if (detail::max_abs(orthogonal * orthogonal.transpose() - Matrix::Identity(n, n)) > 1e-10) {
      throw DomainError("passive transform needs an orthogonal matrix");
    }
    Matrix s = Matrix::Zero(2 * n, 2 * n);
    s.topLeftCorner(n, n) = orthogonal;
    s.bottomRightCorner(n, n) = orthogonal;
    return SymplecticMatrix(std::move(s));
  }

  // Beam splitter of transmissivity t between modes i and j:
  // q_i -> sqrt(t) q_i + sqrt(1-t) q_j, q_j -> -sqrt(1-t) q_i + sqrt(t) q_j.
  static SymplecticMatrix beam_splitter(int modes, int i, int j, double t) {
    if (i == j || i < 0 || j < 0 || i >= modes || j >= modes) {
      throw DimensionMismatch("beam splitter needs two distinct valid modes");
    }
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("transmissivity must be in [0, 1]");
    Matrix o = Matrix::Identity(modes, modes);
    const double c = std::sqrt(t);
    const double s = std::sqrt(1.0 - t);
    o(i, i) = c;
    o(i, j) = s;
    o(j, i) = -s;
    o(j, j) = c;
    return passive(o);
  }

  // Local squeezing of one mode: q -> g q, p -> p / g.
  static SymplecticMatrix squeezer(int modes, int mode, double gain) {
    if (mode < 0 || mode >= modes) throw DimensionMismatch("mode index out of range");
    if (!(gain > 0.0)) throw DomainError("squeezing gain must be positive");
    Matrix s = Matrix::Identity(2 * modes, 2 * modes);
    s(mode, mode) = gain;
    s(modes + mode, modes + mode) = 1.0 / gain;
    return SymplecticMatrix(std::move(s));
  }

  int modes() const { return static_cast<int>(s_.rows() / 2); }
  const Matrix& block() const { return s_; }

  SymplecticMatrix then(const SymplecticMatrix& next) const {
    if (next.modes() != modes()) throw DimensionMismatch("symplectic dimensions differ");
    return SymplecticMatrix(next.s_ * s_);
  }

 private:
  explicit SymplecticMatrix(Matrix s) : s_(std::move(s)) {}

  Matrix s_;
};

// Cascade of N-1 beam splitters with T_k = 1 - 1/k feeding N homodynes.
struct InterferometerSpec {
  int n_modes = 0;
  Matrix r_matrix;                    // N x N, acts identically on q and p
  std::vector<double> transmissivities;  // T_2 .. T_N
};

inline InterferometerSpec cascade_interferometer(int n) {
  if (n < 2) throw DomainError("interferometer needs at least two modes");
  InterferometerSpec spec;
  spec.n_modes = n;
  spec.r_matrix = Matrix::Zero(n, n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) spec.r_matrix(0, j) = inv_sqrt_n;
  // Row k (1-based) holds the k-th difference mode; the rule applies for
  // every k = 2..N and all j < k.
  for (int k = 2; k <= n; ++k) {
    const double kd = k;
    for (int j = 1; j < k; ++j) spec.r_matrix(k - 1, j - 1) = -1.0 / std::sqrt(kd * (kd - 1.0));
    spec.r_matrix(k - 1, k - 1) = std::sqrt(1.0 - 1.0 / kd);
    spec.transmissivities.push_back(1.0 - 1.0 / kd);
  }
  return spec;
}

inline CovMatrix make_tmsv(double mu) {
  if (!(mu >= 1.0)) throw InvalidModulation("modulation variance mu must be >= 1");
  const double c = std::sqrt(mu * mu - 1.0);
  Matrix v = Matrix::Zero(4, 4);
  // block ordering (qA, qB, pA, pB)
  v(0, 0) = v(1, 1) = v(2, 2) = v(3, 3) = mu;
  v(0, 1) = v(1, 0) = c;
  v(2, 3) = v(3, 2) = -c;
  return CovMatrix::from_block(std::move(v));
}

// Thermal-loss link of one user: TMSV with its A mode sent through a beam
// splitter of transmissivity eta that mixes in a thermal state of variance
// omega = 2 nbar + 1.
struct LinkParams {
  double mu = 1.0;
  double eta = 1.0;
  double nbar = 0.0;
  double omega = 1.0;
  double x = 1.0;
  double y = 1.0;
  double z = 0.0;

  // z^2 / x, from eta (mu^2 - 1) / x.
  double z2_over_x() const { return eta * (mu * mu - 1.0) / x; }

  // y - z^2/x without cancellation: ((1 - eta) omega mu + eta) / x.
  double conditional_variance() const { return ((1.0 - eta) * omega * mu + eta) / x; }
};

inline LinkParams link_params(double mu, double eta, double nbar) {
  if (!(mu >= 1.0)) throw InvalidModulation("modulation variance mu must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("transmissivity eta must be in (0, 1]");
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw DomainError("thermal photon number must be >= 0");
  LinkParams link;
  link.mu = mu;
  link.eta = eta;
  link.nbar = nbar;
  link.omega = 2.0 * nbar + 1.0;
  link.x = eta * mu + (1.0 - eta) * link.omega;
  link.y = mu;
  link.z = std::sqrt(eta * (mu * mu - 1.0));
  return link;
}

// Two-mode CM (A, B) of one link after the channel: [[x I, z Z], [z Z, y I]].
inline CovMatrix link_cm(const LinkParams& link) {
  Matrix v = Matrix::Zero(4, 4);
  v(0, 0) = v(2, 2) = link.x;
  v(1, 1) = v(3, 3) = link.y;
  v(0, 1) = v(1, 0) = link.z;
  v(2, 3) = v(3, 2) = -link.z;
  return CovMatrix::from_block(std::move(v));
}

inline CovMatrix apply_symplectic(const CovMatrix& cm, const SymplecticMatrix& s) {
  if (cm.modes() != s.modes()) throw DimensionMismatch("symplectic and covariance dimensions differ");
  const Matrix& sm = s.block();
  return CovMatrix::from_block(detail::symmetrized(sm * cm.block() * sm.transpose()));
}

namespace detail {

struct Partition {
  std::vector<int> rest;      // indices of the unmeasured quadratures
  std::vector<int> measured;  // (q, p) of the measured mode
};

inline Partition partition_out(int modes, int mode) {
  if (mode < 0 || mode >= modes) throw DimensionMismatch("mode index out of range");
  if (modes < 2) throw DimensionMismatch("conditioning needs at least two modes");
  Partition part;
  for (int k = 0; k < modes; ++k) {
    if (k != mode) part.rest.push_back(k);
  }
  for (int k = 0; k < modes; ++k) {
    if (k != mode) part.rest.push_back(modes + k);
  }
  part.measured = {mode, modes + mode};
  return part;
}

// V_rest - C M C^T, with M a 2x2 (pseudo-)inverse for the measured mode.
inline CovMatrix schur_update(const CovMatrix& cm, const Partition& part, const Eigen::Matrix2d& m) {
  const Matrix& v = cm.block();
  const Matrix a = v(part.rest, part.rest);
  const Matrix c = v(part.rest, part.measured);
  return CovMatrix::from_block(symmetrized(a - c * m * c.transpose()));
}

}  // namespace detail

// Conditional state of the other modes after homodyning `mode` in `quad`.
// Uses the pseudo-inverse of the projected 2x2 block, so a single formula
// covers q and p.
inline CovMatrix homodyne_condition(const CovMatrix& cm, int mode, Quadrature quad) {
  const auto part = detail::partition_out(cm.modes(), mode);
  const Eigen::Matrix2d block = cm.mode_block(mode, mode);
  Eigen::Matrix2d projector = Eigen::Matrix2d::Zero();
  const int i = quad == Quadrature::q ? 0 : 1;
  projector(i, i) = 1.0;
  const Eigen::Matrix2d projected = projector * block * projector;
  const Eigen::Matrix2d pinv =
      projected.completeOrthogonalDecomposition().pseudoInverse();
  return detail::schur_update(cm, part, pinv);
}

// Conditional state of the other modes after heterodyning `mode`:
// V_rest - C (V_mode + I)^-1 C^T.
inline CovMatrix heterodyne_condition(const CovMatrix& cm, int mode) {
  const auto part = detail::partition_out(cm.modes(), mode);
  const Eigen::Matrix2d block = cm.mode_block(mode, mode) + Eigen::Matrix2d::Identity();
  return detail::schur_update(cm, part, block.inverse());
}

// Williamson spectrum, ascending. Computed from the eigenvalues of
// (V^1/2 Omega V^1/2)^T (V^1/2 Omega V^1/2), which come in equal pairs nu^2.
inline std::vector<double> symplectic_spectrum(const CovMatrix& cm) {
  const int m = cm.modes();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cm.block());
  if (eig.info() != Eigen::Success) throw UnphysicalState("eigen-decomposition failed");
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw UnphysicalState("covariance matrix is not positive definite");
  }
  const Matrix root = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() *
                      eig.eigenvectors().transpose();
  const Matrix inner = root * symplectic_form(m) * root;
  Eigen::SelfAdjointEigenSolver<Matrix> sq(detail::symmetrized(inner.transpose() * inner),
                                           Eigen::EigenvaluesOnly);
  const Vector& ev = sq.eigenvalues();
  // Rounding in the square root grows with the condition number of V, which
  // for strongly modulated near-pure states reaches ~mu^2.
  const double cond = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
  const double rounding = 100.0 * std::numeric_limits<double>::epsilon() * cond;
  const double clamp = std::max(kClampTolerance, rounding);
  const double reject = std::max(kUnphysicalTolerance, rounding);
  std::vector<double> nus(m);
  for (int k = 0; k < m; ++k) {
    const double nu2 = 0.5 * (ev(2 * k) + ev(2 * k + 1));
    double nu = std::sqrt(std::max(nu2, 0.0));
    if (nu < 1.0 - reject) {
      throw UnphysicalState("symplectic eigenvalue " + std::to_string(nu) + " below vacuum");
    }
    if (nu < 1.0 && nu >= 1.0 - clamp) nu = 1.0;
    nus[k] = nu;
  }
  std::sort(nus.begin(), nus.end());
  return nus;
}

// h(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2).
inline double entropy_h(double x) {
  if (!(x >= 1.0 - kClampTolerance)) throw DomainError("entropy_h needs x >= 1");
  if (x <= 1.0) return 0.0;
  const double plus = 0.5 * (x + 1.0);
  const double minus = 0.5 * (x - 1.0);
  return plus * std::log2(plus) - minus * std::log2(minus);
}

inline double von_neumann_entropy(const CovMatrix& cm) {
  double s = 0.0;
  for (double nu : symplectic_spectrum(cm)) s += entropy_h(nu);
  return s;
}

inline double min_symplectic_eigenvalue(const CovMatrix& cm) {
  return symplectic_spectrum(cm).front();
}

}  // namespace netkit
