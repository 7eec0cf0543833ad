#pragma once

#include <map>
#include <utility>
#include <vector>

#include "camnet/observation.hpp"

namespace camnet {

// Monotone per-channel bin mapping between two camera sites, learned by
// cumulative histogram matching. map(c, b) is the target bin of source bin b
// in channel c.
struct TransferFunction {
  Eigen::MatrixXi map;  // channels x bins

  int channels() const { return static_cast<int>(map.rows()); }
  int bins() const { return static_cast<int>(map.cols()); }
};

bool transfer_monotone(const TransferFunction& f);

TransferFunction identity_transfer(int channels, int bins);

// Moves each source bin's mass to its mapped bin.
Eigen::MatrixXd apply_transfer(const TransferFunction& f, const Eigen::MatrixXd& histogram);

// Learns the source-to-target mapping from paired observations of the same
// objects at the two sites. Throws DataError("untrained pair") on an empty
// training set. The reverse direction is learned by swapping the pair roles.
TransferFunction learn_transfer(
    const std::vector<std::pair<AppearanceObs, AppearanceObs>>& pairs);

struct AppearanceModel {
  // Keyed (from, to); both directions present for every trained pair.
  std::map<std::pair<CameraId, CameraId>, TransferFunction> transfer;
  double bandwidth = 4.0;  // similarity kernel scale, > 0 unless deliberately flat
  double lambda0 = 0.02;   // new-object likelihood constant, > 0

  void validate() const;
};

// exp(-bandwidth * mean-per-channel L1 distance) after mapping the previous
// observation into the current camera's brightness space. Untrained pairs
// fall back to the identity mapping with a one-time diagnostic.
double appearance_likelihood(const AppearanceModel& model, CameraId u, const AppearanceObs& cur,
                             CameraId u_prev, const AppearanceObs& prev);

inline double new_object_likelihood(const AppearanceModel& model) { return model.lambda0; }

}  // namespace camnet
