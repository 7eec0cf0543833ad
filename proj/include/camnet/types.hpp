#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace camnet {

using CameraId = int;
using BorderId = int;
using Timestamp = double;

// Sentinel for "no limit" on memory depth / sampling-space cap.
inline constexpr int kUnbounded = std::numeric_limits<int>::max();

// Malformed configuration: topology, parameters, flags.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or insufficient input data: traces, models, training sets.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A message that violates the topology contract.
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Globally unique object identifier: camera and local index of the object's
// first observation. head_t_en is carried metadata so that "older label" is
// well defined network-wide; it never participates in equality.
struct Label {
  CameraId camera = -1;
  int local_index = 0;
  Timestamp head_t_en = 0.0;
};

inline bool operator==(const Label& a, const Label& b) {
  return a.camera == b.camera && a.local_index == b.local_index;
}
inline bool operator!=(const Label& a, const Label& b) { return !(a == b); }

// Total order: older head first, ties by camera then local index.
inline bool label_before(const Label& a, const Label& b) {
  if (a.head_t_en != b.head_t_en) return a.head_t_en < b.head_t_en;
  if (a.camera != b.camera) return a.camera < b.camera;
  return a.local_index < b.local_index;
}

struct LabelBefore {
  bool operator()(const Label& a, const Label& b) const {
    return label_before(a, b);
  }
};

inline std::string label_id(const Label& l) {
  return std::to_string(l.camera) + ":" + std::to_string(l.local_index);
}

}  // namespace camnet
