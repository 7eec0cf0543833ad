#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "camnet/observation.hpp"

using namespace camnet;

namespace {

Label lab(CameraId cam, int idx, Timestamp head) { return Label{cam, idx, head}; }

}  // namespace

TEST_CASE("label ordering: older head first, ties by camera then local index") {
  CHECK(label_before(lab(1, 3, 1.0), lab(0, 1, 2.0)));
  CHECK(label_before(lab(0, 1, 1.0), lab(1, 1, 1.0)));
  CHECK(label_before(lab(1, 1, 1.0), lab(1, 2, 1.0)));
  CHECK(lab(2, 5, 0.0) == lab(2, 5, 0.0));
  CHECK(lab(2, 5, 0.0) != lab(2, 6, 0.0));
}

TEST_CASE("belief_argmax picks the maximum, singleton case") {
  Belief b;
  b.support = {{lab(0, 1, 0.0), 1.0}};
  CHECK(belief_argmax(b) == lab(0, 1, 0.0));
}

TEST_CASE("belief_argmax picks the maximum over two entries") {
  Belief b;
  b.support = {{lab(0, 1, 0.0), 0.2}, {lab(1, 1, 1.0), 0.8}};
  CHECK(belief_argmax(b) == lab(1, 1, 1.0));
}

TEST_CASE("belief_argmax breaks exact ties toward the older label") {
  Belief b;
  b.support = {{lab(0, 1, 0.0), 0.5}, {lab(1, 1, 1.0), 0.5}};
  CHECK(belief_argmax(b) == lab(0, 1, 0.0));
}

TEST_CASE("belief_argmax rejects an empty belief") {
  CHECK_THROWS_AS(belief_argmax(Belief{}), std::logic_error);
}

TEST_CASE("normalize_scores splits equal scores evenly") {
  const Belief b = normalize_scores({{lab(0, 1, 0.0), 2.0}, {lab(1, 1, 1.0), 2.0}});
  CHECK(b.size() == 2);
  CHECK(b.prob_of(lab(0, 1, 0.0)) == doctest::Approx(0.5));
  CHECK(b.prob_of(lab(1, 1, 1.0)) == doctest::Approx(0.5));
}

TEST_CASE("normalize_scores drops zero entries") {
  const Belief b = normalize_scores({{lab(0, 1, 0.0), 1.0}, {lab(1, 1, 1.0), 0.0}});
  CHECK(b.size() == 1);
  CHECK(b.prob_of(lab(0, 1, 0.0)) == 1.0);
}

TEST_CASE("normalize_scores is proportional") {
  const Belief b = normalize_scores({{lab(0, 1, 0.0), 1.0}, {lab(1, 1, 1.0), 3.0}});
  CHECK(b.prob_of(lab(0, 1, 0.0)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(b.prob_of(lab(1, 1, 1.0)) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("normalize_scores refuses an all-zero posterior") {
  CHECK_THROWS_AS(normalize_scores({{lab(0, 1, 0.0), 0.0}}), DataError);
  CHECK_THROWS_AS(normalize_scores({{lab(0, 1, 0.0), -1.0}}), std::invalid_argument);
}

TEST_CASE("normalize_scores output satisfies the belief invariants") {
  // Hand-rolled generator over random score vectors.
  std::uint64_t state = 42;
  auto next = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<Label, double>> scores;
    const int n = 1 + static_cast<int>(next() % 8);
    bool any = false;
    for (int i = 0; i < n; ++i) {
      const double s = static_cast<double>(next() % 1000) / 250.0;
      any = any || s > 0.0;
      scores.push_back({lab(static_cast<CameraId>(i % 3), i, static_cast<double>(i)), s});
    }
    if (!any) scores[0].second = 1.0;
    CHECK(belief_valid(normalize_scores(scores), 1e-12));
  }
}

TEST_CASE("histogram_normalized accepts per-channel unit mass only") {
  Eigen::MatrixXd good(2, 4);
  good << 0.25, 0.25, 0.25, 0.25, 1.0, 0.0, 0.0, 0.0;
  CHECK(histogram_normalized(good));
  Eigen::MatrixXd bad = good;
  bad(0, 0) = 0.5;
  CHECK_FALSE(histogram_normalized(bad));
  bad = good;
  bad(1, 0) = -1.0;
  bad(1, 1) = 2.0;
  CHECK_FALSE(histogram_normalized(bad));
}

TEST_CASE("event order validation follows (t_en, camera, local index)") {
  Trace t;
  Observation a;
  a.camera = 0;
  a.local_index = 1;
  a.st.t_en = 1.0;
  Observation b;
  b.camera = 1;
  b.local_index = 1;
  b.st.t_en = 1.0;
  t.records.push_back({a, std::nullopt});
  t.records.push_back({b, std::nullopt});
  CHECK(event_order_valid(t));
  std::swap(t.records[0], t.records[1]);
  CHECK_FALSE(event_order_valid(t));
}
