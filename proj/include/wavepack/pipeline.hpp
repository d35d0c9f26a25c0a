#pragma once

// Batch feature extraction: decode → transform → ln-scale per image, in a
// bounded worker pool, producing FeatureMatrix splits or merged statistics.

#include <cstdint>
#include <string>
#include <vector>

#include "wavepack/classify.hpp"
#include "wavepack/dataset.hpp"
#include "wavepack/filterbank.hpp"
#include "wavepack/stats.hpp"
#include "wavepack/transform.hpp"

namespace wavepack {

struct FeatureSpec {
  // "packet": ln(|wpt|+ε) coefficients, per-channel, natural packet order.
  // "pixel": raw [0,1] intensities.
  std::string kind = "packet";
  std::string wavelet = "haar";
  int level = 3;
  BoundaryMode boundary = BoundaryMode::gram_schmidt;
};

// Loads every image in the split and assembles the feature matrix. All
// images must share one geometry (channels × height × width). Feature
// layout: packet → [packet][channel][ph][pw]; pixel → [channel][h][w].
// channel_of is filled so per-channel normalization works for both kinds.
FeatureMatrix extract_features(const std::vector<const DatasetEntry*>& entries,
                               const FeatureSpec& spec);

// Streams every listed image through wpt → ln_abs_scale (channels averaged)
// and accumulates per-coefficient statistics. Work is sharded across the
// worker pool and merged in image order, so results do not depend on the
// thread count.
StatsAccumulator directory_stats(const std::vector<std::string>& paths, const FeatureSpec& spec,
                                 PacketOrdering ordering);

}  // namespace wavepack
