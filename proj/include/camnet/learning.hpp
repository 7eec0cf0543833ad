#pragma once

#include <string>
#include <vector>

#include "camnet/appearance.hpp"
#include "camnet/scenario.hpp"
#include "camnet/topology.hpp"

namespace camnet {

// Everything a run needs: the trained appearance model plus the topology with
// fitted travel parameters in place of the configured priors.
struct ModelSet {
  AppearanceModel appearance;
  Topology topology;
  std::vector<std::string> notes;  // per-edge/per-pair training diagnostics
};

// Fits brightness transfer functions for every camera pair that shares
// labeled objects, and (mean, variance, min) travel parameters for every
// directed edge with at least two same-object transits. Edges or pairs with
// too little data fall back to the configured priors / identity mapping, with
// a note. Throws DataError when the trace carries no ground-truth labels.
ModelSet learn_models(const Trace& trace, const Topology& topo, double bandwidth,
                      double lambda0);

}  // namespace camnet
