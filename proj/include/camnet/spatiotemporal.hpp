#pragma once

#include <vector>

#include "camnet/observation.hpp"
#include "camnet/topology.hpp"

namespace camnet {

// Truncated-Gaussian travel-time model for a directed edge or a whole path.
struct TravelTimeModel {
  double min_travel = 0.0;  // admissibility bound
  double mean = 0.0;
  double var = 1.0;
};

inline constexpr double kTravelVarianceFloor = 1e-6;

// Gaussian density of the gap t_en - t_le, exactly zero when the gap does not
// exceed the minimum travel time. The truncated mass is not renormalized
// unless renormalize_truncation is set.
double travel_time_likelihood(const TravelTimeModel& m, Timestamp t_en, Timestamp t_le,
                              bool renormalize_truncation = false);

// p(entry border e_en | departure border e_le) looked up in a border matrix.
double border_likelihood(const Eigen::MatrixXd& border_matrix, BorderId e_le, BorderId e_en);

// Travel parameters of a path: min travel, mean and variance each sum over
// the path's directed edges.
TravelTimeModel path_travel_model(const Topology& topo, const Path& path);

// Direct-edge spatio-temporal likelihood; zero when no edge links the pair.
double st_likelihood_order0(const Topology& topo, CameraId u, const SpatioTemporalObs& cur,
                            CameraId u_prev, const SpatioTemporalObs& prev,
                            bool renormalize_truncation = false);

// Mixture over all paths with at most q intermediate cameras, weighted by
// normalized transition-probability products. Reduces to the direct-edge
// likelihood for q = 0.
double st_likelihood_orderq(const Topology& topo, CameraId u, const SpatioTemporalObs& cur,
                            CameraId u_prev, const SpatioTemporalObs& prev, int q,
                            bool renormalize_truncation = false);

// Fits (mean, variance) from observed transit durations; the admissibility
// bound is set to max(0, min sample - 3 sigma) and the variance is floored.
TravelTimeModel fit_travel_model(const std::vector<double>& samples);

}  // namespace camnet
