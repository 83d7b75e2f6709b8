#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "netkit/star_network.hpp"

using namespace netkit;

namespace {

double max_diff(const CovMatrix& a, const CovMatrix& b) { return detail::max_abs(a.block() - b.block()); }

// Orthogonal matrix whose first rows are the normalized indicators of
// consecutive groups, completed by Gram-Schmidt on the unit vectors.
Matrix group_concentrator(int n, const std::vector<int>& sizes) {
  Matrix rows = Matrix::Zero(n, n);
  int filled = 0, offset = 0;
  for (int s : sizes) {
    for (int k = 0; k < s; ++k) rows(filled, offset + k) = 1.0 / std::sqrt(static_cast<double>(s));
    offset += s;
    ++filled;
  }
  for (int e = 0; e < n && filled < n; ++e) {
    Vector v = Vector::Unit(n, e);
    for (int r = 0; r < filled; ++r) v -= rows.row(r).dot(v) * rows.row(r).transpose();
    if (v.norm() > 1e-8) rows.row(filled++) = v.normalized().transpose();
  }
  return rows;
}

CovMatrix permute(const CovMatrix& cm, const std::vector<int>& perm) {
  const int n = cm.modes();
  Matrix p = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) p(k, perm[k]) = 1.0;
  return apply_symplectic(cm, SymplecticMatrix::passive(p));
}

}  // namespace

TEST(Network, RequiresTwoUsers) {
  EXPECT_THROW(make_network(1, link_params(2.0, 0.5, 0.0)), DomainError);
}

TEST(Split, Validation) {
  const auto cfg = make_network(10, link_params(2.0, 0.5, 0.0));
  EXPECT_THROW(make_split(0, 5, cfg), SplitError);
  EXPECT_THROW(make_split(6, 5, cfg), SplitError);
  EXPECT_NO_THROW(make_split(5, 5, cfg));
  EXPECT_TRUE(make_split(5, 5, cfg).full_house());
  EXPECT_EQ(make_split(3, 4, cfg).n_other(), 3);
}

TEST(ConditionalCm, NoModulationGivesThermalProduct) {
  const auto cfg = make_network(4, link_params(1.0, 0.7, 0.3));
  const Matrix expected = Matrix::Identity(8, 8) * cfg.link.y;
  EXPECT_LT(detail::max_abs(network_conditional_cm(cfg).block() - expected), 1e-15);
}

TEST(ConditionalCm, EntriesFromLinkParameters) {
  const auto cfg = make_network(5, link_params(10.0, 0.4, 0.05));
  const auto cm = network_conditional_cm(cfg);
  const auto& l = cfg.link;
  const double kappa = l.z * l.z / (5.0 * l.x);
  EXPECT_NEAR(cm.cov(0, Quadrature::q, 0, Quadrature::q), l.y - 4.0 * kappa, 1e-12);
  EXPECT_NEAR(cm.cov(0, Quadrature::p, 0, Quadrature::p), l.y - kappa, 1e-12);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      EXPECT_NEAR(cm.cov(i, Quadrature::q, j, Quadrature::q), kappa, 1e-14);
      EXPECT_NEAR(cm.cov(i, Quadrature::p, j, Quadrature::p), -kappa, 1e-14);
      EXPECT_EQ(cm.cov(i, Quadrature::q, j, Quadrature::p), 0.0);
    }
  }
}

TEST(ConditionalCm, MatchesOracleSpotCheck) {
  const auto cfg = make_network(4, link_params(10.0, 0.4, 0.05));
  const auto closed = network_conditional_cm(cfg);
  EXPECT_LE(max_diff(closed, network_conditional_cm_oracle(cfg, OraclePath::dual)), 1e-9);
  EXPECT_LE(max_diff(closed, network_conditional_cm_oracle(cfg, OraclePath::direct)), 1e-9);
}

// The full equivalence grid between the closed form and both oracles.
TEST(ConditionalCm, OracleEquivalenceGrid) {
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n) {
    for (double mu : {1.0, 2.0, 10.0, 100.0}) {
      for (double eta : {0.1, 0.5, 0.9, 1.0}) {
        for (double nbar : {0.0, 0.05, 1.0}) {
          const auto cfg = make_network(n, link_params(mu, eta, nbar));
          const auto closed = network_conditional_cm(cfg);
          const auto dual = network_conditional_cm_oracle(cfg, OraclePath::dual);
          const auto direct = network_conditional_cm_oracle(cfg, OraclePath::direct);
          worst = std::max({worst, max_diff(closed, dual), max_diff(closed, direct), max_diff(dual, direct)});
        }
      }
    }
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(ConditionalCm, MeasurementOrderIrrelevant) {
  const auto cfg = make_network(3, link_params(15.0, 0.7, 0.1));
  const auto ref = network_conditional_cm_oracle(cfg, OraclePath::direct);
  std::vector<int> order = {0, 1, 2};
  do {
    for (auto path : {OraclePath::dual, OraclePath::direct}) {
      EXPECT_LE(max_diff(network_conditional_cm_oracle(cfg, path, order), ref), 1e-10);
    }
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST(ConditionalCm, OracleRejectsBadOrder) {
  const auto cfg = make_network(3, link_params(5.0, 0.7, 0.1));
  const int short_order[] = {0, 1};
  const int repeated[] = {0, 1, 1};
  EXPECT_THROW(network_conditional_cm_oracle(cfg, OraclePath::dual, short_order), DimensionMismatch);
  EXPECT_THROW(network_conditional_cm_oracle(cfg, OraclePath::dual, repeated), DimensionMismatch);
}

TEST(ConditionalCm, PermutationSymmetric) {
  const auto cm = network_conditional_cm(make_network(5, link_params(8.0, 0.6, 0.02)));
  std::vector<int> perm = {3, 0, 4, 1, 2};
  EXPECT_LT(max_diff(permute(cm, perm), cm), 1e-14);
  perm = {1, 0, 2, 3, 4};
  EXPECT_LT(max_diff(permute(cm, perm), cm), 1e-14);
}

TEST(ConditionalCm, CorrelationScalesAsInverseN) {
  const auto link = link_params(25.0, 0.8, 0.0);
  for (int n : {2, 4, 16, 64}) {
    const auto cm = network_conditional_cm(make_network(n, link));
    EXPECT_DOUBLE_EQ(cm.cov(0, Quadrature::q, 1, Quadrature::q), link.z * link.z / (n * link.x)) << n;
  }
}

TEST(ConditionalCm, SpectrumIsNFoldNu) {
  const auto cfg = make_network(3, link_params(5.0, 0.6, 0.0));
  const double nu = std::sqrt(cfg.link.y * (cfg.link.y - cfg.link.z * cfg.link.z / cfg.link.x));
  for (double s : symplectic_spectrum(network_conditional_cm(cfg))) EXPECT_NEAR(s, nu, 1e-9);
  EXPECT_NEAR(von_neumann_entropy(network_conditional_cm(cfg)), 3.0 * entropy_h(nu), 1e-9);
  EXPECT_NEAR(conditional_nu(cfg.link), nu, 1e-12);
}

TEST(ConditionalCm, EprLimit) {
  for (double mu : {1e2, 1e4, 1e6}) {
    for (int n : {2, 3, 6}) {
      const auto cm = network_conditional_cm(make_network(n, link_params(mu, 1.0, 0.0)));
      // entries are O(mu), so the differences below lose ~mu * eps each
      const double tol = 4.0 * n * n * mu * mu * 1e-16 + 1e-9;
      // Var(q_i - q_j) = 2 (y - z^2/x) = 2 / mu
      const double vq = cm(0, 0) + cm(1, 1) - 2.0 * cm(0, 1);
      EXPECT_NEAR(vq * mu, 2.0, tol) << mu;
      // Var(sum p) = N (y - z^2/x) = N / mu
      double vp = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) vp += cm(n + i, n + j);
      }
      EXPECT_NEAR(vp * mu, n, tol) << mu;
    }
  }
}

TEST(PairCm, TraceDown) {
  const auto cfg = make_network(5, link_params(12.0, 0.5, 0.1));
  const int keep[] = {1, 3};
  EXPECT_LT(max_diff(network_conditional_cm(cfg).reduced(keep), pair_conditional_cm(cfg)), 1e-15);
}

TEST(PairCm, TwoUsersIsTheWholeState) {
  const auto cfg = make_network(2, link_params(5.0, 0.6, 0.0));
  EXPECT_LT(max_diff(pair_conditional_cm(cfg), network_conditional_cm(cfg)), 1e-15);
}

TEST(PairCm, UncorrelatedWithoutModulation) {
  const auto cm = pair_conditional_cm(make_network(7, link_params(1.0, 0.5, 0.1)));
  EXPECT_EQ(cm.cov(0, Quadrature::q, 1, Quadrature::q), 0.0);
  EXPECT_EQ(cm.cov(0, Quadrature::p, 1, Quadrature::p), 0.0);
}

TEST(SecretSharingCm, DegenerateSplitIsPair) {
  const auto cfg = make_network(2, link_params(9.0, 0.7, 0.05));
  EXPECT_LT(max_diff(secret_sharing_cm(make_split(1, 1, cfg)), pair_conditional_cm(cfg)), 1e-15);
}

TEST(SecretSharingCm, FullHouseIndependentOfN) {
  const auto link = link_params(9.0, 0.7, 0.05);
  const auto ref = secret_sharing_cm(make_split(1, 1, make_network(2, link)));
  for (int n : {4, 10, 100}) {
    EXPECT_LT(max_diff(secret_sharing_cm(make_split(n / 2, n / 2, make_network(n, link))), ref), 1e-12) << n;
  }
}

TEST(SecretSharingCm, FullHouseSpectrumIsDoubleNu) {
  const auto cfg = make_network(100, link_params(10.0, 0.8, 0.0));
  const auto spec = symplectic_spectrum(secret_sharing_cm(make_split(5, 95, cfg)));
  EXPECT_NEAR(spec[0], conditional_nu(cfg.link), 1e-9);
  EXPECT_NEAR(spec[1], conditional_nu(cfg.link), 1e-9);
}

TEST(SecretSharingCm, EntriesFromGroupSizes) {
  const auto cfg = make_network(12, link_params(6.0, 0.5, 0.2));
  const auto cm = secret_sharing_cm(make_split(3, 5, cfg));
  const auto& l = cfg.link;
  const double k = l.z * l.z / (12.0 * l.x);
  EXPECT_NEAR(cm.cov(0, Quadrature::q, 0, Quadrature::q), l.y - 9.0 * k, 1e-12);
  EXPECT_NEAR(cm.cov(0, Quadrature::p, 0, Quadrature::p), l.y - 3.0 * k, 1e-12);
  EXPECT_NEAR(cm.cov(1, Quadrature::q, 1, Quadrature::q), l.y - 7.0 * k, 1e-12);
  EXPECT_NEAR(cm.cov(1, Quadrature::p, 1, Quadrature::p), l.y - 5.0 * k, 1e-12);
  EXPECT_NEAR(cm.cov(0, Quadrature::q, 1, Quadrature::q), std::sqrt(15.0) * k, 1e-14);
  EXPECT_NEAR(cm.cov(0, Quadrature::p, 1, Quadrature::p), -std::sqrt(15.0) * k, 1e-14);
}

// Concentration by an explicit orthogonal transform of the N-mode state.
TEST(ConcentratedCm, MatchesExplicitPassiveTransform) {
  const auto cfg = make_network(9, link_params(14.0, 0.65, 0.05));
  const std::vector<int> sizes = {2, 4, 3};
  const Matrix o = group_concentrator(9, sizes);
  const auto rotated = apply_symplectic(network_conditional_cm(cfg), SymplecticMatrix::passive(o));
  const int keep[] = {0, 1, 2};
  EXPECT_LT(max_diff(rotated.reduced(keep), concentrated_cm(cfg, sizes)), 1e-12);
  // the remaining modes are thermal with eigenvalue nu and uncorrelated
  const double nu = conditional_nu(cfg.link);
  for (int k = 3; k < 9; ++k) {
    EXPECT_NEAR(rotated.cov(k, Quadrature::q, k, Quadrature::q) * rotated.cov(k, Quadrature::p, k, Quadrature::p),
                nu * nu, 1e-9);
    for (int j = 0; j < 9; ++j) {
      if (j == k) continue;
      EXPECT_NEAR(rotated.cov(k, Quadrature::q, j, Quadrature::q), 0.0, 1e-12);
    }
  }
}

TEST(ConcentratedCm, RejectsOversizedGroups) {
  const auto cfg = make_network(4, link_params(3.0, 0.5, 0.0));
  const std::vector<int> too_many = {3, 2};
  const std::vector<int> empty_group = {0, 2};
  EXPECT_THROW(concentrated_cm(cfg, too_many), SplitError);
  EXPECT_THROW(concentrated_cm(cfg, empty_group), SplitError);
}

TEST(SqueezedParams, Basics) {
  const auto flat = squeezed_params(make_network(6, link_params(1.0, 0.5, 0.1)));
  EXPECT_EQ(flat.kappa, 0.0);
  EXPECT_DOUBLE_EQ(flat.s, 1.0);
  for (int n : {2, 3, 10}) {
    const auto sp = squeezed_params(make_network(n, link_params(20.0, 0.5, 0.05)));
    EXPECT_GE(sp.s, 1.0) << n;
  }
  EXPECT_DOUBLE_EQ(squeezed_params(make_network(2, link_params(20.0, 0.5, 0.05))).s, 1.0);
}

TEST(SqueezedPairCm, FlatWithoutModulation) {
  const auto cfg = make_network(4, link_params(1.0, 0.5, 0.1));
  const Matrix expected = Matrix::Identity(4, 4) * cfg.link.y;
  EXPECT_LT(detail::max_abs(squeezed_pair_cm(cfg).block() - expected), 1e-15);
}

TEST(SqueezedPairCm, SameSpectrumAsPair) {
  const auto cfg = make_network(10, link_params(20.0, 0.5, 0.05));
  const auto a = symplectic_spectrum(squeezed_pair_cm(cfg));
  const auto b = symplectic_spectrum(pair_conditional_cm(cfg));
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-9);
}

TEST(SqueezedPairCm, EqualLocalVariancesAndExplicitSqueezers) {
  const auto cfg = make_network(10, link_params(20.0, 0.5, 0.05));
  const auto sq = squeezed_pair_cm(cfg);
  EXPECT_NEAR(sq.cov(0, Quadrature::q, 0, Quadrature::q), sq.cov(0, Quadrature::p, 0, Quadrature::p), 1e-12);
  const auto pair = pair_conditional_cm(cfg);
  const double g = equalizing_gain(pair(0, 0), pair(2, 2));
  const auto s = SymplecticMatrix::squeezer(2, 0, g).then(SymplecticMatrix::squeezer(2, 1, g));
  EXPECT_LT(max_diff(apply_symplectic(pair, s), sq), 1e-12);
}

TEST(SqueezedNetworkCm, SameSpectrumAsNetwork) {
  const auto cfg = make_network(6, link_params(30.0, 0.7, 0.02));
  const auto a = symplectic_spectrum(squeezed_network_cm(cfg));
  const auto b = symplectic_spectrum(network_conditional_cm(cfg));
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-9);
}

TEST(SqueezedSsCm, FullHouseIsSymmetric) {
  const auto cm = squeezed_ss_cm(make_split(5, 5, make_network(10, link_params(20.0, 0.6, 0.0))));
  EXPECT_NEAR(cm(0, 0), cm(1, 1), 1e-14);
  EXPECT_NEAR(cm(0, 0), cm(2, 2), 1e-14);
  EXPECT_NEAR(cm(0, 1), -cm(2, 3), 1e-14);
}

TEST(SqueezedSsCm, SameSpectrumAsUnsqueezed) {
  const auto cfg = make_network(100, link_params(20.0, 0.6, 0.05));
  for (auto [a, b] : {std::pair{30, 60}, {50, 50}, {1, 99}, {10, 20}}) {
    const auto split = make_split(a, b, cfg);
    const auto s1 = symplectic_spectrum(squeezed_ss_cm(split));
    const auto s2 = symplectic_spectrum(secret_sharing_cm(split));
    for (std::size_t k = 0; k < s1.size(); ++k) EXPECT_NEAR(s1[k], s2[k], 1e-9) << a << "," << b;
  }
}

// The squeezed ensemble state is the unsqueezed one after local squeezers.
TEST(SqueezedSsCm, MatchesExplicitSqueezers) {
  const auto cfg = make_network(40, link_params(25.0, 0.75, 0.01));
  for (auto [a, b] : {std::pair{20, 20}, {5, 30}, {12, 12}}) {
    const auto split = make_split(a, b, cfg);
    const auto plain = secret_sharing_cm(split);
    const double ga = equalizing_gain(plain(0, 0), plain(2, 2));
    const double gb = equalizing_gain(plain(1, 1), plain(3, 3));
    const auto s = SymplecticMatrix::squeezer(2, 0, ga).then(SymplecticMatrix::squeezer(2, 1, gb));
    EXPECT_LT(max_diff(apply_symplectic(plain, s), squeezed_ss_cm(split)), 1e-12) << a << "," << b;
  }
}

TEST(SqueezedSsCm, ThermalProductWithoutModulation) {
  const auto cfg = make_network(8, link_params(1.0, 0.6, 0.2));
  const Matrix expected = Matrix::Identity(4, 4) * cfg.link.y;
  EXPECT_LT(detail::max_abs(squeezed_ss_cm(make_split(2, 3, cfg)).block() - expected), 1e-15);
}
