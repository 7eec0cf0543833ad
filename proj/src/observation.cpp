#include "camnet/observation.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace camnet {

bool histogram_normalized(const Eigen::MatrixXd& histogram, double tol) {
  if (histogram.rows() < 1 || histogram.cols() < 1) return false;
  if ((histogram.array() < 0.0).any()) return false;
  for (Eigen::Index c = 0; c < histogram.rows(); ++c) {
    if (std::abs(histogram.row(c).sum() - 1.0) > tol) return false;
  }
  return true;
}

double Belief::prob_of(const Label& l) const {
  for (const auto& [label, p] : support) {
    if (label == l) return p;
  }
  return 0.0;
}

bool belief_valid(const Belief& b, double tol) {
  if (b.support.empty()) return false;
  double total = 0.0;
  for (std::size_t i = 0; i < b.support.size(); ++i) {
    if (!(b.support[i].second > 0.0)) return false;
    if (i > 0 && !label_before(b.support[i - 1].first, b.support[i].first)) return false;
    total += b.support[i].second;
  }
  return std::abs(total - 1.0) <= tol;
}

Label belief_argmax(const Belief& b) {
  if (b.empty()) throw std::logic_error("belief_argmax: empty belief");
  // Support is sorted oldest first, so strict > keeps the oldest of any tie.
  std::size_t best = 0;
  for (std::size_t i = 1; i < b.support.size(); ++i) {
    if (b.support[i].second > b.support[best].second) best = i;
  }
  return b.support[best].first;
}

Belief normalize_scores(std::vector<std::pair<Label, double>> scores) {
  double total = 0.0;
  for (const auto& [label, s] : scores) {
    if (s < 0.0) throw std::invalid_argument("normalize_scores: negative score");
    total += s;
  }
  if (!(total > 0.0)) throw DataError("degenerate posterior");
  Belief b;
  b.support.reserve(scores.size());
  for (const auto& [label, s] : scores) {
    if (s > 0.0) b.support.emplace_back(label, s / total);
  }
  std::sort(b.support.begin(), b.support.end(),
            [](const auto& x, const auto& y) { return label_before(x.first, y.first); });
  return b;
}

bool Trace::labeled() const {
  return !records.empty() &&
         std::all_of(records.begin(), records.end(),
                     [](const TraceRecord& r) { return r.truth.has_value(); });
}

bool event_order_valid(const Trace& t) {
  auto key = [](const Observation& o) {
    return std::tuple<Timestamp, CameraId, int>(o.st.t_en, o.camera, o.local_index);
  };
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    if (!(key(t.records[i - 1].obs) < key(t.records[i].obs))) return false;
  }
  return true;
}

}  // namespace camnet
