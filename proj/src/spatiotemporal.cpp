#include "camnet/spatiotemporal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace camnet {

double travel_time_likelihood(const TravelTimeModel& m, Timestamp t_en, Timestamp t_le,
                              bool renormalize_truncation) {
  if (!(m.var > 0.0)) throw ConfigError("travel-time variance must be positive");
  const double gap = t_en - t_le;
  if (gap <= m.min_travel) return 0.0;
  const double z = gap - m.mean;
  double density =
      std::exp(-0.5 * z * z / m.var) / std::sqrt(2.0 * std::numbers::pi * m.var);
  if (renormalize_truncation) {
    const double admissible =
        0.5 * std::erfc((m.min_travel - m.mean) / std::sqrt(2.0 * m.var));
    if (admissible > 0.0) density /= admissible;
  }
  return density;
}

double border_likelihood(const Eigen::MatrixXd& border_matrix, BorderId e_le, BorderId e_en) {
  if (e_le < 0 || e_le >= border_matrix.rows() || e_en < 0 || e_en >= border_matrix.cols()) {
    throw ConfigError("border index outside the declared border range");
  }
  return border_matrix(e_le, e_en);
}

TravelTimeModel path_travel_model(const Topology& topo, const Path& path) {
  TravelTimeModel m{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k + 1 < path.nodes.size(); ++k) {
    const EdgeParams& e = topo.edge(path.nodes[k], path.nodes[k + 1]);
    m.min_travel += e.min_travel;
    m.mean += e.mean_travel;
    m.var += e.travel_var;
  }
  return m;
}

double st_likelihood_order0(const Topology& topo, CameraId u, const SpatioTemporalObs& cur,
                            CameraId u_prev, const SpatioTemporalObs& prev,
                            bool renormalize_truncation) {
  if (u_prev == u || !topo.has_edge(u_prev, u)) return 0.0;
  const EdgeParams& e = topo.edge(u_prev, u);
  const double travel =
      travel_time_likelihood(TravelTimeModel{e.min_travel, e.mean_travel, e.travel_var},
                             cur.t_en, prev.t_le, renormalize_truncation);
  if (travel == 0.0) return 0.0;
  return travel * border_likelihood(e.border_matrix, prev.e_le, cur.e_en);
}

double st_likelihood_orderq(const Topology& topo, CameraId u, const SpatioTemporalObs& cur,
                            CameraId u_prev, const SpatioTemporalObs& prev, int q,
                            bool renormalize_truncation) {
  if (q < 0) throw ConfigError("neighborhood order must be >= 0");
  // No self-edges, so a same-camera predecessor has no admissible path.
  if (u_prev == u) return 0.0;
  const std::vector<Path> paths = enumerate_paths(topo, u_prev, u, q);
  if (paths.empty()) return 0.0;
  std::vector<double> weights;
  try {
    weights = path_weights(topo, paths);
  } catch (const ConfigError&) {
    // Every path product is zero: the pair is unreachable under the
    // configured transition probabilities.
    return 0.0;
  }
  double mix = 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const double travel = travel_time_likelihood(path_travel_model(topo, paths[i]),
                                                 cur.t_en, prev.t_le, renormalize_truncation);
    if (travel == 0.0) continue;
    const Eigen::MatrixXd chain = chain_border_matrix(topo, paths[i]);
    mix += weights[i] * travel * border_likelihood(chain, prev.e_le, cur.e_en);
  }
  return mix;
}

TravelTimeModel fit_travel_model(const std::vector<double>& samples) {
  if (samples.size() < 2) throw DataError("insufficient training data");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double var = std::max(ss / (n - 1.0), kTravelVarianceFloor);
  const double lo = *std::min_element(samples.begin(), samples.end());
  return TravelTimeModel{std::max(0.0, lo - 3.0 * std::sqrt(var)), mean, var};
}

}  // namespace camnet
