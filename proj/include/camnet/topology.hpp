#pragma once

#include <Eigen/Dense>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "camnet/types.hpp"

namespace camnet {

// Appearance distortion at one camera site: per-channel multiplicative gain
// and additive shift applied to bin positions, plus additive histogram noise.
struct SiteCondition {
  Eigen::VectorXd gain;   // one entry per channel, 1 = undistorted
  Eigen::VectorXd shift;  // one entry per channel, in bins
  double noise = 0.0;
};

struct CameraParams {
  int num_borders = 1;
  // p(exit border | entry border) inside this camera's FOV, row-stochastic.
  Eigen::MatrixXd traversal;
  SiteCondition condition;
};

// Directional travel parameters for one edge direction.
struct EdgeParams {
  double min_travel = 0.0;  // hard lower bound on inter-camera travel time
  double mean_travel = 0.0;
  double travel_var = 1.0;
  double transition_prob = 0.0;
  // Rows: departure border at the source camera; cols: entry border at the
  // destination camera. Row-stochastic.
  Eigen::MatrixXd border_matrix;
};

// Simple inter-camera path; order = number of intermediate nodes.
struct Path {
  std::vector<CameraId> nodes;

  int order() const { return static_cast<int>(nodes.size()) - 2; }
  CameraId src() const { return nodes.front(); }
  CameraId dst() const { return nodes.back(); }
};

// Camera-network graph with directional edge parameters. Immutable after
// validate(); all reads are then safe concurrently.
struct Topology {
  std::vector<CameraParams> cameras;  // index is the camera id
  // Directed parameter map; both directions present for every linked pair.
  std::map<std::pair<CameraId, CameraId>, EdgeParams> edges;

  int num_cameras() const { return static_cast<int>(cameras.size()); }
  bool has_camera(CameraId u) const { return u >= 0 && u < num_cameras(); }
  bool has_edge(CameraId a, CameraId b) const { return edges.count({a, b}) > 0; }
  const EdgeParams& edge(CameraId a, CameraId b) const;
  const std::vector<CameraId>& adjacent(CameraId u) const;

  void add_edge(CameraId a, CameraId b, EdgeParams ab, EdgeParams ba);

  // Checks every structural invariant and builds the adjacency index.
  // Must be called once after construction; throws ConfigError on violation.
  void validate();

 private:
  std::vector<std::vector<CameraId>> adjacency_;
};

// All cameras v != u reachable from u by a path with at most q intermediate
// nodes. q = 0 is plain adjacency. Never contains u itself.
std::set<CameraId> neighbors(const Topology& topo, CameraId u, int q);

// All simple paths from src to dst with 0..q intermediate nodes, ordered by
// length then lexicographic node ids.
std::vector<Path> enumerate_paths(const Topology& topo, CameraId src, CameraId dst, int q);

// Per-path products of transition probabilities, normalized to sum to one
// over the given path set. Throws ConfigError when every product is zero.
std::vector<double> path_weights(const Topology& topo, const std::vector<Path>& paths);

// Border factor of a path: the edge matrix for a direct edge, otherwise the
// product alternating edge border matrices and intermediate-camera traversal
// matrices. Result is row-stochastic.
Eigen::MatrixXd chain_border_matrix(const Topology& topo, const Path& path);

}  // namespace camnet
