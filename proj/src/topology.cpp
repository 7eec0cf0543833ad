#include "camnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>

namespace camnet {

namespace {

bool row_stochastic(const Eigen::MatrixXd& m, double tol = 1e-9) {
  if (m.rows() < 1 || m.cols() < 1) return false;
  if ((m.array() < -tol).any()) return false;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (std::abs(m.row(r).sum() - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace

const EdgeParams& Topology::edge(CameraId a, CameraId b) const {
  auto it = edges.find({a, b});
  if (it == edges.end()) {
    throw ConfigError("no edge between cameras " + std::to_string(a) + " and " + std::to_string(b));
  }
  return it->second;
}

const std::vector<CameraId>& Topology::adjacent(CameraId u) const {
  if (!has_camera(u)) throw ConfigError("unknown camera id " + std::to_string(u));
  if (adjacency_.size() != cameras.size()) {
    throw std::logic_error("Topology::validate must run before queries");
  }
  return adjacency_[static_cast<std::size_t>(u)];
}

void Topology::add_edge(CameraId a, CameraId b, EdgeParams ab, EdgeParams ba) {
  edges[{a, b}] = std::move(ab);
  edges[{b, a}] = std::move(ba);
}

void Topology::validate() {
  if (cameras.empty()) throw ConfigError("topology needs at least one camera");
  for (int u = 0; u < num_cameras(); ++u) {
    const CameraParams& cam = cameras[static_cast<std::size_t>(u)];
    if (cam.num_borders < 1) {
      throw ConfigError("camera " + std::to_string(u) + " must declare at least one border");
    }
    if (cam.traversal.rows() != cam.num_borders || cam.traversal.cols() != cam.num_borders ||
        !row_stochastic(cam.traversal)) {
      throw ConfigError("camera " + std::to_string(u) + " traversal matrix must be " +
                        std::to_string(cam.num_borders) + "x" + std::to_string(cam.num_borders) +
                        " row-stochastic");
    }
    if (cam.condition.gain.size() != cam.condition.shift.size()) {
      throw ConfigError("camera " + std::to_string(u) + " gain/shift channel counts differ");
    }
    if (cam.condition.noise < 0.0) {
      throw ConfigError("camera " + std::to_string(u) + " noise scale must be >= 0");
    }
  }

  adjacency_.assign(cameras.size(), {});
  std::vector<double> outgoing(cameras.size(), 0.0);
  for (const auto& [key, params] : edges) {
    const auto [a, b] = key;
    if (!has_camera(a) || !has_camera(b)) {
      throw ConfigError("edge references unknown camera " + std::to_string(a) + "-" + std::to_string(b));
    }
    if (a == b) throw ConfigError("self-edge on camera " + std::to_string(a));
    if (!edges.count({b, a})) {
      throw ConfigError("edge " + std::to_string(a) + "->" + std::to_string(b) +
                        " is missing its reverse direction");
    }
    if (!(params.travel_var > 0.0)) {
      throw ConfigError("edge " + std::to_string(a) + "->" + std::to_string(b) +
                        " travel variance must be positive");
    }
    if (params.min_travel < 0.0 || params.mean_travel < params.min_travel) {
      throw ConfigError("edge " + std::to_string(a) + "->" + std::to_string(b) +
                        " requires 0 <= min travel <= mean travel");
    }
    if (params.transition_prob < 0.0 || params.transition_prob > 1.0) {
      throw ConfigError("edge " + std::to_string(a) + "->" + std::to_string(b) +
                        " transition probability outside [0,1]");
    }
    const int rows = cameras[static_cast<std::size_t>(a)].num_borders;
    const int cols = cameras[static_cast<std::size_t>(b)].num_borders;
    if (params.border_matrix.rows() != rows || params.border_matrix.cols() != cols ||
        !row_stochastic(params.border_matrix)) {
      throw ConfigError("edge " + std::to_string(a) + "->" + std::to_string(b) +
                        " border matrix must be " + std::to_string(rows) + "x" +
                        std::to_string(cols) + " row-stochastic");
    }
    adjacency_[static_cast<std::size_t>(a)].push_back(b);
    outgoing[static_cast<std::size_t>(a)] += params.transition_prob;
  }
  for (int u = 0; u < num_cameras(); ++u) {
    auto& adj = adjacency_[static_cast<std::size_t>(u)];
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    if (outgoing[static_cast<std::size_t>(u)] > 1.0 + 1e-9) {
      throw ConfigError("camera " + std::to_string(u) +
                        " outgoing transition probabilities exceed 1");
    }
  }

  // Connectivity is advisory only: an isolated camera is legal but suspicious.
  if (num_cameras() > 1) {
    std::vector<bool> seen(cameras.size(), false);
    std::deque<CameraId> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      const CameraId u = queue.front();
      queue.pop_front();
      for (CameraId v : adjacency_[static_cast<std::size_t>(u)]) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          queue.push_back(v);
        }
      }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool s) { return s; })) {
      std::cerr << "camnet: warning: camera graph is not connected\n";
    }
  }
}

std::set<CameraId> neighbors(const Topology& topo, CameraId u, int q) {
  if (!topo.has_camera(u)) throw ConfigError("unknown camera id " + std::to_string(u));
  if (q < 0) throw ConfigError("neighborhood order must be >= 0");
  // Breadth-first out to q+1 edges; q intermediate nodes means q+1 hops.
  std::set<CameraId> out;
  std::vector<int> depth(static_cast<std::size_t>(topo.num_cameras()), -1);
  std::deque<CameraId> queue{u};
  depth[static_cast<std::size_t>(u)] = 0;
  while (!queue.empty()) {
    const CameraId v = queue.front();
    queue.pop_front();
    if (depth[static_cast<std::size_t>(v)] == q + 1) continue;
    for (CameraId w : topo.adjacent(v)) {
      if (depth[static_cast<std::size_t>(w)] < 0) {
        depth[static_cast<std::size_t>(w)] = depth[static_cast<std::size_t>(v)] + 1;
        out.insert(w);
        queue.push_back(w);
      }
    }
  }
  out.erase(u);
  return out;
}

namespace {

void extend_path(const Topology& topo, CameraId dst, int max_edges,
                 std::vector<CameraId>& nodes, std::vector<bool>& visited,
                 std::vector<Path>& out) {
  const CameraId tail = nodes.back();
  if (tail == dst) {
    out.push_back(Path{nodes});
    return;
  }
  if (static_cast<int>(nodes.size()) - 1 >= max_edges) return;
  for (CameraId next : topo.adjacent(tail)) {
    if (visited[static_cast<std::size_t>(next)]) continue;
    visited[static_cast<std::size_t>(next)] = true;
    nodes.push_back(next);
    extend_path(topo, dst, max_edges, nodes, visited, out);
    nodes.pop_back();
    visited[static_cast<std::size_t>(next)] = false;
  }
}

}  // namespace

std::vector<Path> enumerate_paths(const Topology& topo, CameraId src, CameraId dst, int q) {
  if (!topo.has_camera(src) || !topo.has_camera(dst)) {
    throw ConfigError("unknown camera id in path query");
  }
  if (src == dst) throw std::logic_error("enumerate_paths: src == dst");
  if (q < 0) throw ConfigError("path order must be >= 0");

  std::vector<Path> out;
  std::vector<CameraId> nodes{src};
  std::vector<bool> visited(static_cast<std::size_t>(topo.num_cameras()), false);
  visited[static_cast<std::size_t>(src)] = true;
  extend_path(topo, dst, q + 1, nodes, visited, out);
  std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
    return a.nodes < b.nodes;
  });
  return out;
}

std::vector<double> path_weights(const Topology& topo, const std::vector<Path>& paths) {
  if (paths.empty()) return {};
  for (const Path& p : paths) {
    if (p.src() != paths.front().src() || p.dst() != paths.front().dst()) {
      throw std::logic_error("path_weights: paths must share endpoints");
    }
  }
  std::vector<double> weights(paths.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    double product = 1.0;
    const auto& nodes = paths[i].nodes;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      product *= topo.edge(nodes[k], nodes[k + 1]).transition_prob;
    }
    weights[i] = product;
    total += product;
  }
  if (!(total > 0.0)) {
    throw ConfigError("all path transition products are zero; topology transition "
                      "probabilities are inconsistent");
  }
  for (double& w : weights) w /= total;
  return weights;
}

Eigen::MatrixXd chain_border_matrix(const Topology& topo, const Path& path) {
  if (path.nodes.size() < 2) throw std::logic_error("chain_border_matrix: degenerate path");
  Eigen::MatrixXd chain = topo.edge(path.nodes[0], path.nodes[1]).border_matrix;
  for (std::size_t k = 1; k + 1 < path.nodes.size(); ++k) {
    const CameraId mid = path.nodes[k];
    const Eigen::MatrixXd& traversal = topo.cameras[static_cast<std::size_t>(mid)].traversal;
    const Eigen::MatrixXd& hop = topo.edge(mid, path.nodes[k + 1]).border_matrix;
    if (chain.cols() != traversal.rows() || traversal.cols() != hop.rows()) {
      throw ConfigError("border matrix dimensions do not chain through camera " +
                        std::to_string(mid));
    }
    chain = chain * traversal * hop;
  }
  return chain;
}

}  // namespace camnet
