// Optimized conferencing rates against fiber distance for a few network sizes,
// with the coherent and squeezed protocols side by side.

#include <cstdio>

#include "netkit/rates.hpp"

int main() {
  using namespace netkit;
  const double nbar = 0.01;
  std::printf("nbar = %.2f, attenuation 0.2 dB/km\n\n", nbar);
  std::printf("%6s %8s %12s %12s %10s\n", "N", "d [m]", "coherent", "squeezed", "mu*");
  for (int n : {2, 5, 10, 50}) {
    for (double d_m : {0.0, 10.0, 20.0, 40.0, 80.0}) {
      const double eta = eta_from_distance(d_m / 1000.0);
      const auto coh = optimize_mu({Protocol::conference, n, 0, 0, eta, nbar});
      const auto sq = optimize_mu({Protocol::squeezed_conference, n, 0, 0, eta, nbar});
      std::printf("%6d %8.0f %12.5f %12.5f %10.4g\n", n, d_m, coh.report.rate, sq.report.rate, coh.mu_star);
    }
  }

  std::printf("\nmaximum distance with a positive coherent rate:\n");
  for (int n : {2, 5, 10, 20, 50}) {
    const double d = max_distance({Protocol::conference, n, 0, 0, 1.0, nbar});
    std::printf("  N = %-3d %8.2f m\n", n, d * 1000.0);
  }
  return 0;
}
