#include "camnet/appearance.hpp"

#include <atomic>
#include <cmath>
#include <iostream>

namespace camnet {

bool transfer_monotone(const TransferFunction& f) {
  for (int c = 0; c < f.channels(); ++c) {
    for (int b = 1; b < f.bins(); ++b) {
      if (f.map(c, b) < f.map(c, b - 1)) return false;
    }
  }
  return true;
}

TransferFunction identity_transfer(int channels, int bins) {
  TransferFunction f;
  f.map.resize(channels, bins);
  for (int c = 0; c < channels; ++c) {
    for (int b = 0; b < bins; ++b) f.map(c, b) = b;
  }
  return f;
}

Eigen::MatrixXd apply_transfer(const TransferFunction& f, const Eigen::MatrixXd& histogram) {
  if (f.map.rows() != histogram.rows() || f.map.cols() != histogram.cols()) {
    throw DataError("transfer function shape does not match histogram");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(histogram.rows(), histogram.cols());
  for (Eigen::Index c = 0; c < histogram.rows(); ++c) {
    for (Eigen::Index b = 0; b < histogram.cols(); ++b) {
      out(c, f.map(c, b)) += histogram(c, b);
    }
  }
  return out;
}

TransferFunction learn_transfer(
    const std::vector<std::pair<AppearanceObs, AppearanceObs>>& pairs) {
  if (pairs.empty()) throw DataError("untrained pair");
  const Eigen::Index channels = pairs.front().first.histogram.rows();
  const Eigen::Index bins = pairs.front().first.histogram.cols();
  Eigen::MatrixXd src = Eigen::MatrixXd::Zero(channels, bins);
  Eigen::MatrixXd dst = Eigen::MatrixXd::Zero(channels, bins);
  for (const auto& [a, b] : pairs) {
    if (a.histogram.rows() != channels || a.histogram.cols() != bins ||
        b.histogram.rows() != channels || b.histogram.cols() != bins) {
      throw DataError("inconsistent histogram shapes in transfer training set");
    }
    src += a.histogram;
    dst += b.histogram;
  }
  src /= static_cast<double>(pairs.size());
  dst /= static_cast<double>(pairs.size());

  TransferFunction f;
  f.map.resize(channels, bins);
  for (Eigen::Index c = 0; c < channels; ++c) {
    double cum_src = 0.0;
    Eigen::VectorXd cum_dst(bins);
    double acc = 0.0;
    for (Eigen::Index b = 0; b < bins; ++b) {
      acc += dst(c, b);
      cum_dst(b) = acc;
    }
    Eigen::Index target = 0;
    for (Eigen::Index b = 0; b < bins; ++b) {
      cum_src += src(c, b);
      while (target < bins - 1 && cum_dst(target) < cum_src) ++target;
      f.map(c, b) = static_cast<int>(target);
    }
  }
  return f;
}

void AppearanceModel::validate() const {
  if (!(bandwidth >= 0.0)) throw ConfigError("appearance bandwidth must be >= 0");
  if (!(lambda0 > 0.0)) throw ConfigError("new-object likelihood lambda0 must be positive");
  for (const auto& [key, f] : transfer) {
    if (!transfer.count({key.second, key.first})) {
      throw ConfigError("transfer function " + std::to_string(key.first) + "->" +
                        std::to_string(key.second) + " is missing its reverse direction");
    }
    if (!transfer_monotone(f)) {
      throw ConfigError("transfer function " + std::to_string(key.first) + "->" +
                        std::to_string(key.second) + " is not monotone");
    }
  }
}

double appearance_likelihood(const AppearanceModel& model, CameraId u, const AppearanceObs& cur,
                             CameraId u_prev, const AppearanceObs& prev) {
  if (cur.histogram.rows() != prev.histogram.rows() ||
      cur.histogram.cols() != prev.histogram.cols()) {
    throw DataError("histogram shapes differ between observations");
  }
  Eigen::MatrixXd mapped;
  auto it = model.transfer.find({u_prev, u});
  if (u_prev == u || it == model.transfer.end()) {
    if (u_prev != u) {
      static std::atomic<bool> warned{false};
      if (!warned.exchange(true)) {
        std::cerr << "camnet: warning: no trained transfer for camera pair "
                  << u_prev << "->" << u << ", using identity mapping\n";
      }
    }
    mapped = prev.histogram;
  } else {
    mapped = apply_transfer(it->second, prev.histogram);
  }
  const double mean_l1 = (mapped - cur.histogram).cwiseAbs().rowwise().sum().mean();
  return std::exp(-model.bandwidth * mean_l1);
}

}  // namespace camnet
