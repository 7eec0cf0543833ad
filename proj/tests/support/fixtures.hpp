#pragma once

// Shared scenario builders for the unit and acceptance suites.

#include <vector>

#include "camnet/learning.hpp"
#include "camnet/scenario.hpp"
#include "camnet/topology.hpp"

namespace fixtures {

using namespace camnet;

struct EdgeTuning {
  double min_travel = 12.0;
  double mean_travel = 30.0;
  double travel_var = 25.0;
  double transition_prob = 0.5;
};

inline EdgeParams make_edge(const EdgeTuning& tune, int borders_from, int borders_to) {
  EdgeParams e;
  e.min_travel = tune.min_travel;
  e.mean_travel = tune.mean_travel;
  e.travel_var = tune.travel_var;
  e.transition_prob = tune.transition_prob;
  e.border_matrix = Eigen::MatrixXd::Constant(borders_from, borders_to, 0.15 / (borders_to - 1 > 0 ? borders_to - 1 : 1));
  for (int r = 0; r < borders_from; ++r) {
    if (borders_to == 1) {
      e.border_matrix(r, 0) = 1.0;
    } else {
      e.border_matrix(r, r % borders_to) = 0.85;
      // Re-normalize the row exactly.
      const double rest = 1.0 - 0.85;
      for (int c = 0; c < borders_to; ++c) {
        if (c != r % borders_to) e.border_matrix(r, c) = rest / (borders_to - 1);
      }
    }
  }
  return e;
}

inline CameraParams make_camera(int borders = 2, int channels = 3) {
  CameraParams cam;
  cam.num_borders = borders;
  cam.traversal = Eigen::MatrixXd::Constant(borders, borders, borders > 1 ? 0.35 / (borders - 1) : 1.0);
  if (borders > 1) {
    for (int r = 0; r < borders; ++r) {
      for (int c = 0; c < borders; ++c) cam.traversal(r, c) = r == c ? 0.35 : 0.65 / (borders - 1);
    }
  }
  cam.condition.gain = Eigen::VectorXd::Ones(channels);
  cam.condition.shift = Eigen::VectorXd::Zero(channels);
  cam.condition.noise = 0.0;
  return cam;
}

// Evenly splits each camera's outgoing transition mass over its edges.
inline void balance_transitions(Topology& topo, double exit_mass = 0.0) {
  std::map<CameraId, int> degree;
  for (const auto& [key, e] : topo.edges) degree[key.first]++;
  for (auto& [key, e] : topo.edges) {
    e.transition_prob = (1.0 - exit_mass) / degree[key.first];
  }
}

inline Topology line_topology(int n, EdgeTuning tune = {}, int borders = 2, int channels = 3) {
  Topology topo;
  for (int i = 0; i < n; ++i) topo.cameras.push_back(make_camera(borders, channels));
  for (int i = 0; i + 1 < n; ++i) {
    topo.add_edge(i, i + 1, make_edge(tune, borders, borders), make_edge(tune, borders, borders));
  }
  balance_transitions(topo);
  topo.validate();
  return topo;
}

inline Topology ring_topology(int n, EdgeTuning tune = {}, int borders = 2, int channels = 3) {
  Topology topo;
  for (int i = 0; i < n; ++i) topo.cameras.push_back(make_camera(borders, channels));
  for (int i = 0; i < n; ++i) {
    topo.add_edge(i, (i + 1) % n, make_edge(tune, borders, borders),
                  make_edge(tune, borders, borders));
  }
  balance_transitions(topo);
  topo.validate();
  return topo;
}

// rows x cols grid; row edges use the base tuning, column edges travel longer.
inline Topology grid_topology(int rows, int cols, EdgeTuning row_tune = {},
                              EdgeTuning col_tune = {20.0, 45.0, 36.0, 0.5}, int borders = 2,
                              int channels = 3) {
  Topology topo;
  for (int i = 0; i < rows * cols; ++i) topo.cameras.push_back(make_camera(borders, channels));
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) {
        topo.add_edge(id(r, c), id(r, c + 1), make_edge(row_tune, borders, borders),
                      make_edge(row_tune, borders, borders));
      }
      if (r + 1 < rows) {
        topo.add_edge(id(r, c), id(r + 1, c), make_edge(col_tune, borders, borders),
                      make_edge(col_tune, borders, borders));
      }
    }
  }
  balance_transitions(topo);
  topo.validate();
  return topo;
}

inline Topology triangle_topology(EdgeTuning tune = {}, int borders = 2, int channels = 3) {
  Topology topo;
  for (int i = 0; i < 3; ++i) topo.cameras.push_back(make_camera(borders, channels));
  topo.add_edge(0, 1, make_edge(tune, borders, borders), make_edge(tune, borders, borders));
  topo.add_edge(1, 2, make_edge(tune, borders, borders), make_edge(tune, borders, borders));
  topo.add_edge(0, 2, make_edge(tune, borders, borders), make_edge(tune, borders, borders));
  balance_transitions(topo);
  topo.validate();
  return topo;
}

// Identity transfer functions for every ordered camera pair plus the
// configured travel parameters: the model a perfectly calibrated deployment
// would have.
inline AppearanceModel calibrated_appearance(const Topology& topo, int channels, int bins,
                                             double bandwidth, double lambda0) {
  AppearanceModel model;
  model.bandwidth = bandwidth;
  model.lambda0 = lambda0;
  for (CameraId a = 0; a < topo.num_cameras(); ++a) {
    for (CameraId b = 0; b < topo.num_cameras(); ++b) {
      if (a != b) model.transfer[{a, b}] = identity_transfer(channels, bins);
    }
  }
  return model;
}

inline ScenarioSpec auto_scenario(std::uint64_t seed, int count, int visits,
                                  double min_separation = 0.8, int channels = 3, int bins = 8) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.channels = channels;
  spec.bins = bins;
  AutoObjects gen;
  gen.count = count;
  gen.birth_start = 0.0;
  gen.birth_end = 120.0;
  gen.visits = visits;
  gen.min_separation = min_separation;
  spec.auto_objects = gen;
  spec.dwell = {DwellModel{2.0, 0.3}};
  return spec;
}

// One-hot base appearances at distinct bins: appearance evidence becomes
// near-deterministic at any reasonable bandwidth.
inline ScenarioSpec onehot_scenario(std::uint64_t seed, int count, int visits, int channels = 1,
                                    int bins = 8) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.channels = channels;
  spec.bins = bins;
  for (int i = 0; i < count; ++i) {
    ObjectSpec o;
    o.identity = i + 1;
    o.birth_time = 10.0 * i;
    o.birth_camera = 0;
    o.visits = visits;
    o.base_appearance = Eigen::MatrixXd::Zero(channels, bins);
    for (int c = 0; c < channels; ++c) o.base_appearance(c, i % bins) = 1.0;
    spec.objects.push_back(std::move(o));
  }
  spec.dwell = {DwellModel{2.0, 0.3}};
  return spec;
}

}  // namespace fixtures
