#include <algorithm>
#include <cmath>

#include "wildknot/necklace.hpp"

namespace wildknot {

double partition_root(const std::vector<double>& diameters, double upper) {
  if (diameters.size() < 2) throw EstimationFailure("partition sum needs at least two covering sets");
  for (double d : diameters)
    if (!(d > 0.0) || !(d < 1.0))
      throw EstimationFailure("normalized diameters must lie in (0, 1) for a monotone partition sum");
  auto f = [&](double s) {
    double sum = 0.0;
    for (double d : diameters) sum += std::pow(d, s);
    return sum - 1.0;
  };
  double lo = 0.0, hi = upper;
  if (!(f(lo) > 0.0) || !(f(hi) < 0.0)) throw EstimationFailure("partition sum does not bracket a root on [0, d]");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

DimensionEstimate dimension_estimate(const Necklace& neck0, const std::vector<int>& depths, double convergence) {
  if (neck0.k() < 3) throw EstimationFailure("a beaded necklace needs k >= 3 beads");
  if (depths.size() < 2) throw EstimationFailure("dimension estimate needs at least two depths");
  double d0 = 0.0;
  for (const auto& g : neck0.generators) d0 = std::max(d0, 2.0 * g.radius);
  const double upper = static_cast<double>(neck0.dim());

  DimensionEstimate est;
  for (int m : depths) {
    std::vector<double> diam;
    for (const Bead& b : stage_beads(neck0, m)) diam.push_back(2.0 * b.ball.radius / d0);
    est.per_depth.emplace_back(m, partition_root(diam, upper));
  }
  est.s_hat = est.per_depth.back().second;
  const double prev = est.per_depth[est.per_depth.size() - 2].second;
  est.converged = std::abs(est.s_hat - prev) < convergence;
  return est;
}

}  // namespace wildknot
