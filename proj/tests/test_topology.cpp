#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "camnet/topology.hpp"
#include "support/fixtures.hpp"

using namespace camnet;

namespace {

// Independent path oracle: tries every node sequence recursively without
// reusing the library's search.
void brute_paths(const Topology& topo, CameraId dst, int max_edges, std::vector<CameraId>& nodes,
                 std::vector<std::vector<CameraId>>& out) {
  const CameraId tail = nodes.back();
  if (tail == dst) {
    out.push_back(nodes);
    return;
  }
  if (static_cast<int>(nodes.size()) - 1 >= max_edges) return;
  for (CameraId next = 0; next < topo.num_cameras(); ++next) {
    if (!topo.has_edge(tail, next)) continue;
    if (std::find(nodes.begin(), nodes.end(), next) != nodes.end()) continue;
    nodes.push_back(next);
    brute_paths(topo, dst, max_edges, nodes, out);
    nodes.pop_back();
  }
}

std::set<std::vector<CameraId>> brute_path_set(const Topology& topo, CameraId src, CameraId dst,
                                               int q) {
  std::vector<CameraId> nodes{src};
  std::vector<std::vector<CameraId>> all;
  brute_paths(topo, dst, q + 1, nodes, all);
  return {all.begin(), all.end()};
}

}  // namespace

TEST_CASE("adjacency neighborhood on a path graph") {
  const Topology topo = fixtures::line_topology(3);
  CHECK(neighbors(topo, 1, 0) == std::set<CameraId>{0, 2});
}

TEST_CASE("first-order neighborhood reaches two hops on a path graph") {
  const Topology topo = fixtures::line_topology(3);
  CHECK(neighbors(topo, 0, 1) == std::set<CameraId>{1, 2});
}

TEST_CASE("a single camera has no neighbors") {
  Topology topo;
  topo.cameras.push_back(fixtures::make_camera());
  topo.validate();
  CHECK(neighbors(topo, 0, 0).empty());
}

TEST_CASE("neighbors rejects unknown cameras") {
  const Topology topo = fixtures::line_topology(2);
  CHECK_THROWS_AS(neighbors(topo, 5, 0), ConfigError);
}

TEST_CASE("direct paths only at order zero on a triangle") {
  const Topology topo = fixtures::triangle_topology();
  const auto paths = enumerate_paths(topo, 0, 2, 0);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].nodes == std::vector<CameraId>{0, 2});
  CHECK(paths[0].order() == 0);
}

TEST_CASE("order-one paths add the detour on a triangle") {
  const Topology topo = fixtures::triangle_topology();
  const auto paths = enumerate_paths(topo, 0, 2, 1);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].nodes == std::vector<CameraId>{0, 2});
  CHECK(paths[1].nodes == std::vector<CameraId>{0, 1, 2});
}

TEST_CASE("no path between disconnected cameras") {
  Topology topo;
  for (int i = 0; i < 4; ++i) topo.cameras.push_back(fixtures::make_camera());
  topo.add_edge(0, 1, fixtures::make_edge({}, 2, 2), fixtures::make_edge({}, 2, 2));
  topo.add_edge(2, 3, fixtures::make_edge({}, 2, 2), fixtures::make_edge({}, 2, 2));
  topo.validate();
  CHECK(enumerate_paths(topo, 0, 2, 2).empty());
}

TEST_CASE("path enumeration matches a brute-force oracle on small graphs") {
  const std::vector<Topology> graphs = {fixtures::line_topology(5), fixtures::ring_topology(6),
                                        fixtures::grid_topology(2, 3),
                                        fixtures::triangle_topology()};
  for (const Topology& topo : graphs) {
    for (CameraId src = 0; src < topo.num_cameras(); ++src) {
      for (CameraId dst = 0; dst < topo.num_cameras(); ++dst) {
        if (src == dst) continue;
        for (int q = 0; q <= 3; ++q) {
          const auto paths = enumerate_paths(topo, src, dst, q);
          std::set<std::vector<CameraId>> got;
          for (const Path& p : paths) {
            CHECK(p.order() <= q);
            got.insert(p.nodes);
          }
          CHECK(got.size() == paths.size());  // no duplicates
          CHECK(got == brute_path_set(topo, src, dst, q));
        }
      }
    }
  }
}

TEST_CASE("neighborhoods grow monotonically with the order") {
  const std::vector<Topology> graphs = {fixtures::line_topology(6), fixtures::ring_topology(5),
                                        fixtures::grid_topology(2, 3)};
  for (const Topology& topo : graphs) {
    for (CameraId u = 0; u < topo.num_cameras(); ++u) {
      for (int q = 0; q < 4; ++q) {
        const auto smaller = neighbors(topo, u, q);
        const auto larger = neighbors(topo, u, q + 1);
        CHECK(std::includes(larger.begin(), larger.end(), smaller.begin(), smaller.end()));
        CHECK_FALSE(larger.count(u));
      }
    }
  }
}

TEST_CASE("a single path gets the full weight") {
  const Topology topo = fixtures::line_topology(2);
  const auto paths = enumerate_paths(topo, 0, 1, 0);
  const auto w = path_weights(topo, paths);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == 1.0);
}

TEST_CASE("weights are normalized transition products") {
  // Direct product 0.3 against a detour product 0.5 * 0.2 = 0.1.
  Topology topo;
  for (int i = 0; i < 3; ++i) topo.cameras.push_back(fixtures::make_camera());
  auto e = [](double p) {
    EdgeParams params = fixtures::make_edge({}, 2, 2);
    params.transition_prob = p;
    return params;
  };
  topo.add_edge(0, 2, e(0.3), e(0.3));
  topo.add_edge(0, 1, e(0.5), e(0.5));
  topo.add_edge(1, 2, e(0.2), e(0.2));
  topo.validate();
  const auto paths = enumerate_paths(topo, 0, 2, 1);
  REQUIRE(paths.size() == 2);
  const auto w = path_weights(topo, paths);
  CHECK(w[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("a zero-probability edge annihilates its path weight") {
  Topology topo;
  for (int i = 0; i < 3; ++i) topo.cameras.push_back(fixtures::make_camera());
  auto e = [](double p) {
    EdgeParams params = fixtures::make_edge({}, 2, 2);
    params.transition_prob = p;
    return params;
  };
  topo.add_edge(0, 2, e(0.4), e(0.4));
  topo.add_edge(0, 1, e(0.0), e(0.4));
  topo.add_edge(1, 2, e(0.4), e(0.4));
  topo.validate();
  const auto paths = enumerate_paths(topo, 0, 2, 1);
  const auto w = path_weights(topo, paths);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == 1.0);
  CHECK(w[1] == 0.0);
}

TEST_CASE("all-zero products are a config error") {
  Topology topo;
  for (int i = 0; i < 2; ++i) topo.cameras.push_back(fixtures::make_camera());
  EdgeParams zero = fixtures::make_edge({}, 2, 2);
  zero.transition_prob = 0.0;
  topo.add_edge(0, 1, zero, zero);
  topo.validate();
  const auto paths = enumerate_paths(topo, 0, 1, 0);
  CHECK_THROWS_AS(path_weights(topo, paths), ConfigError);
}

TEST_CASE("weights normalize to one whenever any product is positive") {
  const Topology topo = fixtures::grid_topology(2, 3);
  for (CameraId src = 0; src < topo.num_cameras(); ++src) {
    for (CameraId dst = 0; dst < topo.num_cameras(); ++dst) {
      if (src == dst) continue;
      const auto paths = enumerate_paths(topo, src, dst, 2);
      if (paths.empty()) continue;
      const auto w = path_weights(topo, paths);
      double total = 0.0;
      for (double x : w) total += x;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("a direct path returns the edge border matrix unchanged") {
  const Topology topo = fixtures::line_topology(2);
  const Path direct{{0, 1}};
  CHECK(chain_border_matrix(topo, direct) == topo.edge(0, 1).border_matrix);
}

TEST_CASE("identity factors chain to the identity") {
  Topology topo;
  for (int i = 0; i < 3; ++i) {
    CameraParams cam = fixtures::make_camera(2);
    cam.traversal = Eigen::MatrixXd::Identity(2, 2);
    topo.cameras.push_back(cam);
  }
  EdgeParams e = fixtures::make_edge({}, 2, 2);
  e.border_matrix = Eigen::MatrixXd::Identity(2, 2);
  topo.add_edge(0, 1, e, e);
  topo.add_edge(1, 2, e, e);
  topo.validate();
  const Path path{{0, 1, 2}};
  CHECK(chain_border_matrix(topo, path) == Eigen::MatrixXd::Identity(2, 2));
}

TEST_CASE("chaining swaps rows through a crossing traversal") {
  Topology topo;
  Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  for (int i = 0; i < 3; ++i) {
    CameraParams cam = fixtures::make_camera(2);
    cam.traversal = i == 1 ? swap : ident;
    topo.cameras.push_back(cam);
  }
  EdgeParams e = fixtures::make_edge({}, 2, 2);
  e.border_matrix = ident;
  topo.add_edge(0, 1, e, e);
  topo.add_edge(1, 2, e, e);
  topo.validate();
  const Path path{{0, 1, 2}};
  CHECK(chain_border_matrix(topo, path) == swap);
}

TEST_CASE("chained border factors stay row-stochastic") {
  const Topology topo = fixtures::grid_topology(2, 3);
  for (CameraId src = 0; src < topo.num_cameras(); ++src) {
    for (CameraId dst = 0; dst < topo.num_cameras(); ++dst) {
      if (src == dst) continue;
      for (const Path& p : enumerate_paths(topo, src, dst, 2)) {
        const Eigen::MatrixXd chain = chain_border_matrix(topo, p);
        for (Eigen::Index r = 0; r < chain.rows(); ++r) {
          CHECK(chain.row(r).sum() == doctest::Approx(1.0).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("validation rejects malformed topologies") {
  Topology self_edge;
  self_edge.cameras.push_back(fixtures::make_camera());
  self_edge.edges[{0, 0}] = fixtures::make_edge({}, 2, 2);
  CHECK_THROWS_AS(self_edge.validate(), ConfigError);

  Topology bad_var;
  bad_var.cameras.push_back(fixtures::make_camera());
  bad_var.cameras.push_back(fixtures::make_camera());
  EdgeParams e = fixtures::make_edge({}, 2, 2);
  e.travel_var = 0.0;
  bad_var.add_edge(0, 1, e, e);
  CHECK_THROWS_AS(bad_var.validate(), ConfigError);

  Topology bad_rows;
  bad_rows.cameras.push_back(fixtures::make_camera());
  bad_rows.cameras.push_back(fixtures::make_camera());
  EdgeParams rows = fixtures::make_edge({}, 2, 2);
  rows.border_matrix(0, 0) = 0.9;
  rows.border_matrix(0, 1) = 0.9;
  bad_rows.add_edge(0, 1, rows, fixtures::make_edge({}, 2, 2));
  CHECK_THROWS_AS(bad_rows.validate(), ConfigError);

  Topology excess;
  excess.cameras.push_back(fixtures::make_camera());
  excess.cameras.push_back(fixtures::make_camera());
  EdgeParams heavy = fixtures::make_edge({}, 2, 2);
  heavy.transition_prob = 0.9;
  excess.add_edge(0, 1, heavy, heavy);
  EdgeParams heavy2 = heavy;
  excess.cameras.push_back(fixtures::make_camera());
  excess.add_edge(0, 2, heavy2, heavy2);
  CHECK_THROWS_AS(excess.validate(), ConfigError);
}
