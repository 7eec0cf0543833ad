#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "camnet/appearance.hpp"
#include "camnet/scenario.hpp"

using namespace camnet;

namespace {

AppearanceObs obs(std::initializer_list<double> bins) {
  Eigen::MatrixXd h(1, static_cast<Eigen::Index>(bins.size()));
  Eigen::Index i = 0;
  for (double v : bins) h(0, i++) = v;
  return AppearanceObs{h};
}

AppearanceObs random_obs(Rng& rng, int channels, int bins) {
  Eigen::MatrixXd h(channels, bins);
  for (int c = 0; c < channels; ++c) {
    double total = 0.0;
    for (int b = 0; b < bins; ++b) {
      h(c, b) = -std::log(1.0 - rng.uniform());
      total += h(c, b);
    }
    h.row(c) /= total;
  }
  return AppearanceObs{h};
}

}  // namespace

TEST_CASE("identical training sides learn the identity mapping") {
  const AppearanceObs a = obs({0.25, 0.25, 0.25, 0.25});
  const TransferFunction f = learn_transfer({{a, a}, {a, a}});
  for (int b = 0; b < 4; ++b) CHECK(f.map(0, b) == b);
}

TEST_CASE("all mass moving from bin 0 to bin 2 is learned as f(0)=2") {
  const AppearanceObs src = obs({1.0, 0.0, 0.0, 0.0});
  const AppearanceObs dst = obs({0.0, 0.0, 1.0, 0.0});
  const TransferFunction f = learn_transfer({{src, dst}});
  CHECK(f.map(0, 0) == 2);
}

TEST_CASE("a one-bin shift of a uniform histogram is learned exactly") {
  const int bins = 4;
  const AppearanceObs src = obs({0.25, 0.25, 0.25, 0.25});
  const AppearanceObs dst = obs({0.0, 0.25, 0.25, 0.5});  // shift with top-bin clamp
  const TransferFunction f = learn_transfer({{src, dst}});
  for (int b = 0; b < bins; ++b) CHECK(f.map(0, b) == std::min(b + 1, bins - 1));
}

TEST_CASE("an empty training set is an untrained pair") {
  CHECK_THROWS_AS(learn_transfer({}), DataError);
}

TEST_CASE("learned mappings are monotone on random training sets") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<AppearanceObs, AppearanceObs>> pairs;
    const int n = 1 + static_cast<int>(rng.next() % 5);
    for (int i = 0; i < n; ++i) pairs.push_back({random_obs(rng, 2, 8), random_obs(rng, 2, 8)});
    CHECK(transfer_monotone(learn_transfer(pairs)));
  }
}

TEST_CASE("a known monotone bin shift is recovered exactly from noiseless data") {
  Rng rng(4242);
  const int bins = 8;
  std::vector<std::pair<AppearanceObs, AppearanceObs>> pairs;
  for (int i = 0; i < 12; ++i) {
    const AppearanceObs base = random_obs(rng, 3, bins);
    Eigen::MatrixXd shifted = Eigen::MatrixXd::Zero(3, bins);
    for (int c = 0; c < 3; ++c) {
      for (int b = 0; b < bins; ++b) shifted(c, std::min(b + 1, bins - 1)) += base.histogram(c, b);
    }
    pairs.push_back({base, AppearanceObs{shifted}});
  }
  const TransferFunction forward = learn_transfer(pairs);
  for (int c = 0; c < 3; ++c) {
    for (int b = 0; b < bins; ++b) CHECK(forward.map(c, b) == std::min(b + 1, bins - 1));
  }
  std::vector<std::pair<AppearanceObs, AppearanceObs>> reversed;
  for (const auto& [a, b] : pairs) reversed.push_back({b, a});
  const TransferFunction backward = learn_transfer(reversed);
  for (int c = 0; c < 3; ++c) {
    for (int b = 0; b < bins; ++b) CHECK(backward.map(c, b) == std::max(b - 1, 0));
  }
}

TEST_CASE("identical histograms under the identity transfer score 1") {
  AppearanceModel model;
  model.bandwidth = 3.0;
  model.transfer[{0, 1}] = identity_transfer(1, 4);
  model.transfer[{1, 0}] = identity_transfer(1, 4);
  const AppearanceObs a = obs({0.5, 0.5, 0.0, 0.0});
  CHECK(appearance_likelihood(model, 1, a, 0, a) == 1.0);
}

TEST_CASE("disjoint single-bin histograms score exp(-2 beta)") {
  AppearanceModel model;
  model.bandwidth = 1.0;
  const AppearanceObs a = obs({1.0, 0.0, 0.0, 0.0});
  const AppearanceObs b = obs({0.0, 0.0, 1.0, 0.0});
  // Untrained pair falls back to the identity mapping.
  const double got = appearance_likelihood(model, 1, a, 0, b);
  CHECK(got == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(got == doctest::Approx(0.1353352832366127).epsilon(1e-9));
}

TEST_CASE("a flat kernel scores 1 regardless of distance") {
  AppearanceModel model;
  model.bandwidth = 0.0;
  const AppearanceObs a = obs({1.0, 0.0, 0.0, 0.0});
  const AppearanceObs b = obs({0.0, 0.0, 1.0, 0.0});
  CHECK(appearance_likelihood(model, 1, a, 0, b) == 1.0);
}

TEST_CASE("self-similarity dominates under the identity transfer") {
  Rng rng(17);
  AppearanceModel model;
  model.bandwidth = 4.0;
  for (int trial = 0; trial < 100; ++trial) {
    const AppearanceObs o = random_obs(rng, 3, 8);
    const AppearanceObs other = random_obs(rng, 3, 8);
    CHECK(appearance_likelihood(model, 1, o, 0, o) >=
          appearance_likelihood(model, 1, o, 0, other));
  }
}

TEST_CASE("scores stay in (0, 1] for nonnegative bandwidth") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    AppearanceModel model;
    model.bandwidth = 8.0 * rng.uniform();
    const double s =
        appearance_likelihood(model, 1, random_obs(rng, 2, 6), 0, random_obs(rng, 2, 6));
    CHECK(s > 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("the new-object likelihood is the configured constant") {
  AppearanceModel model;
  CHECK(new_object_likelihood(model) == 0.02);
  model.lambda0 = 0.07;
  CHECK(new_object_likelihood(model) == 0.07);
}

TEST_CASE("non-positive lambda0 is rejected at validation") {
  AppearanceModel model;
  model.lambda0 = 0.0;
  CHECK_THROWS_AS(model.validate(), ConfigError);
  model.lambda0 = -0.1;
  CHECK_THROWS_AS(model.validate(), ConfigError);
}

TEST_CASE("mapping mass through a learned transfer preserves totals") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const AppearanceObs src = random_obs(rng, 2, 8);
    const AppearanceObs dst = random_obs(rng, 2, 8);
    const TransferFunction f = learn_transfer({{src, dst}});
    const Eigen::MatrixXd mapped = apply_transfer(f, src.histogram);
    CHECK(histogram_normalized(mapped, 1e-9));
  }
}
