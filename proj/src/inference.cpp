#include "camnet/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace camnet {

void InferenceConfig::validate() const {
  if (memory < 1) throw ConfigError("memory depth M must be >= 1");
  if (cap < 2) throw ConfigError("sampling-space cap H must be >= 2");
  if (order < 0) throw ConfigError("neighborhood order q must be >= 0");
  if (!(lambda0 > 0.0)) throw ConfigError("lambda0 must be positive");
  if (false_alarm_threshold < 0.0) throw ConfigError("false-alarm threshold must be >= 0");
}

NeighborhoodSnapshot make_snapshot(std::vector<SnapshotEntry> entries, int memory) {
  if (memory < 1) throw ConfigError("memory depth M must be >= 1");
  std::sort(entries.begin(), entries.end(), [](const SnapshotEntry& a, const SnapshotEntry& b) {
    if (a.obs.st.t_en != b.obs.st.t_en) return a.obs.st.t_en > b.obs.st.t_en;
    if (a.obs.camera != b.obs.camera) return a.obs.camera < b.obs.camera;
    return a.obs.local_index < b.obs.local_index;
  });
  if (static_cast<int>(entries.size()) > memory) entries.resize(static_cast<std::size_t>(memory));
  return NeighborhoodSnapshot{std::move(entries)};
}

std::vector<Label> sampling_space(const Label& own, const NeighborhoodSnapshot& snap) {
  std::vector<Label> space{own};
  for (const SnapshotEntry& e : snap.entries) {
    for (const auto& [h, p] : e.belief.support) space.push_back(h);
  }
  std::sort(space.begin(), space.end(), LabelBefore{});
  space.erase(std::unique(space.begin(), space.end()), space.end());
  return space;
}

Belief label_prior(const Label& own, const NeighborhoodSnapshot& snap) {
  const double denom = static_cast<double>(snap.length()) + 1.0;
  std::map<Label, double, LabelBefore> mass;
  for (const SnapshotEntry& e : snap.entries) {
    for (const auto& [h, p] : e.belief.support) {
      if (h == own) throw std::logic_error("label_prior: own label already announced");
      mass[h] += p;
    }
  }
  Belief prior;
  prior.support.reserve(mass.size() + 1);
  prior.support.emplace_back(own, 1.0 / denom);
  for (const auto& [h, m] : mass) prior.support.emplace_back(h, m / denom);
  std::sort(prior.support.begin(), prior.support.end(),
            [](const auto& a, const auto& b) { return label_before(a.first, b.first); });
  return prior;
}

Eigen::VectorXd pointer_prior(const Label& h, const NeighborhoodSnapshot& snap) {
  const int len = snap.length();
  Eigen::VectorXd p(len + 1);
  double carry = 1.0;  // probability that no more recent entry already is h
  for (int l = 1; l <= len; ++l) {
    const double pl = snap.entries[static_cast<std::size_t>(l - 1)].belief.prob_of(h);
    p(l) = pl * carry;
    carry *= 1.0 - pl;
  }
  p(0) = carry;
  return p;
}

Eigen::VectorXd log_likelihood_vector(const Observation& cur, const NeighborhoodSnapshot& snap,
                                      const AppearanceModel& appearance, const Topology& topo,
                                      const InferenceConfig& cfg) {
  const int len = snap.length();
  Eigen::VectorXd log_lambda(len + 1);
  log_lambda(0) = std::log(cfg.lambda0);
  for (int l = 1; l <= len; ++l) {
    const Observation& prev = snap.entries[static_cast<std::size_t>(l - 1)].obs;
    const double ap = appearance_likelihood(appearance, cur.camera, cur.appearance,
                                            prev.camera, prev.appearance);
    const double st = st_likelihood_orderq(topo, cur.camera, cur.st, prev.camera, prev.st,
                                           cfg.order, cfg.renormalize_truncation);
    log_lambda(l) = std::log(ap) + std::log(st);  // log(0) = -inf marks impossibility
  }
  return log_lambda;
}

PosteriorOutcome posterior_from_log_likelihoods(const Label& own, const NeighborhoodSnapshot& snap,
                                                const Eigen::VectorXd& log_lambda) {
  const int len = snap.length();
  if (log_lambda.size() != len + 1) {
    throw std::logic_error("likelihood vector length does not match snapshot");
  }
  const std::vector<Label> space = sampling_space(own, snap);
  const Belief prior = label_prior(own, snap);

  const auto rows = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd logw(rows, len + 1);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const Label& h = space[static_cast<std::size_t>(k)];
    const double log_prior = std::log(prior.prob_of(h));
    const Eigen::VectorXd pp = pointer_prior(h, snap);
    for (int l = 0; l <= len; ++l) {
      logw(k, l) = log_lambda(l) + log_prior + std::log(pp(l));
    }
  }

  PosteriorOutcome out;
  out.joint.labels = space;
  const double shift = logw.maxCoeff();
  if (!std::isfinite(shift)) {
    // Every weight vanished; declare a new object and let the caller decide
    // whether to keep going or gate the observation out.
    out.joint.table = Eigen::MatrixXd::Zero(rows, len + 1);
    const auto own_row = std::lower_bound(space.begin(), space.end(), own, LabelBefore{});
    out.joint.table(own_row - space.begin(), 0) = 1.0;
    out.evidence = 0.0;
    out.degenerate = true;
    return out;
  }
  out.joint.table = (logw.array() - shift).exp();
  const double total = out.joint.table.sum();
  out.joint.table /= total;
  out.evidence = std::exp(shift + std::log(total));
  return out;
}

PosteriorOutcome joint_posterior(const Observation& cur, const NeighborhoodSnapshot& snap,
                                 const AppearanceModel& appearance, const Topology& topo,
                                 const InferenceConfig& cfg) {
  return posterior_from_log_likelihoods(
      cur.own_label(), snap, log_likelihood_vector(cur, snap, appearance, topo, cfg));
}

Belief marginal_posterior(const JointBelief& joint) {
  Belief b;
  b.support.reserve(joint.labels.size());
  for (Eigen::Index k = 0; k < joint.table.rows(); ++k) {
    const double p = joint.table.row(k).sum();
    if (p > 0.0) b.support.emplace_back(joint.labels[static_cast<std::size_t>(k)], p);
  }
  // Labels arrive sorted from sampling_space, so the support stays ordered.
  return b;
}

Belief prune_space(Belief b, int cap) {
  if (cap < 2) throw ConfigError("sampling-space cap H must be >= 2");
  if (static_cast<int>(b.support.size()) <= cap) return b;
  while (static_cast<int>(b.support.size()) > cap) {
    // >= walks ties toward the youngest label (support is sorted oldest first).
    std::size_t victim = 0;
    for (std::size_t i = 1; i < b.support.size(); ++i) {
      if (b.support[i].second <= b.support[victim].second) victim = i;
    }
    b.support.erase(b.support.begin() + static_cast<std::ptrdiff_t>(victim));
  }
  double total = 0.0;
  for (const auto& [h, p] : b.support) total += p;
  for (auto& [h, p] : b.support) p /= total;
  return b;
}

}  // namespace camnet
