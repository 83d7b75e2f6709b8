// How the division of users into two ensembles affects the secret-sharing
// rate. The symmetric full-house split behaves like a two-party link no
// matter how many users share it; leaving users out costs rate.

#include <cstdio>

#include "netkit/rates.hpp"

int main() {
  using namespace netkit;
  const int n = 10;
  const double nbar = 0.01;
  const double eta = eta_from_distance(0.05);
  std::printf("N = %d, d = 50 m, nbar = %.2f\n\n", n, nbar);
  std::printf("%4s %4s %12s %12s %10s\n", "n_a", "n_b", "coherent", "squeezed", "mu*");
  const int splits[][2] = {{5, 5}, {4, 6}, {3, 7}, {1, 9}, {4, 5}, {3, 5}, {2, 2}};
  for (const auto& s : splits) {
    const auto coh = optimize_mu({Protocol::secret_sharing, n, s[0], s[1], eta, nbar});
    const auto sq = optimize_mu({Protocol::squeezed_secret_sharing, n, s[0], s[1], eta, nbar});
    std::printf("%4d %4d %12.5f %12.5f %10.4g\n", s[0], s[1], coh.report.rate, sq.report.rate, coh.mu_star);
  }

  const auto pair = optimize_mu({Protocol::conference, 2, 0, 0, eta, nbar});
  std::printf("\ntwo-user conferencing at the same distance: %.5f\n", pair.report.rate);
  return 0;
}
