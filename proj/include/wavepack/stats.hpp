#pragma once

// Streaming mean/std statistics over log-scaled packet coefficients.
//
// Absolute coefficient values are compressed with ln(|x| + 1e-12) before
// accumulation so that the heavy-tailed packet distributions become
// comparable across packets. Accumulation uses Welford's online update and
// Chan's pairwise merge, so directory-sized corpora stream in O(1) memory
// per accumulator and parallel shards combine exactly.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wavepack/packets.hpp"

namespace wavepack {

// How multi-channel images collapse to the single statistics channel.
enum class ChannelPolicy {
  averaged = 0,   // mean of |x| across channels, then ln
  per_channel = 1 // ln per channel; caller keeps channels separate
};

// ln(|x| + 1e-12) applied to every coefficient. With ChannelPolicy::averaged
// the channel axis is collapsed first (mean of |x| across channels), so the
// result always has channels == 1; with per_channel the channel count is
// preserved.
PacketTensor ln_abs_scale(const PacketTensor& t, ChannelPolicy policy);

// Per-coefficient running statistics over a stream of equally-shaped packet
// tensors (channels must already be collapsed to 1).
class StatsAccumulator {
 public:
  StatsAccumulator() = default;

  // Adds one log-scaled packet tensor. The first call fixes the expected
  // shape; later calls must match it exactly.
  void add(const PacketTensor& t);

  // Merges another accumulator over the same shape (Chan's update).
  void merge(const StatsAccumulator& other);

  std::int64_t sample_count() const { return count_; }
  bool empty() const { return count_ == 0; }

  int level() const { return level_; }
  std::int64_t packet_height() const { return packet_height_; }
  std::int64_t packet_width() const { return packet_width_; }
  PacketOrdering ordering() const { return ordering_; }

  // Per-coefficient mean, [packet][row][col] flattened.
  const std::vector<double>& mean() const { return mean_; }

  // Per-coefficient sample standard deviation (n−1 denominator).
  // Throws invariant_error when fewer than two samples were added.
  std::vector<double> std() const;

 private:
  void init_shape(const PacketTensor& t);

  std::int64_t count_ = 0;
  int level_ = 0;
  std::int64_t packet_height_ = 0;
  std::int64_t packet_width_ = 0;
  PacketOrdering ordering_ = PacketOrdering::natural;
  std::vector<double> mean_;
  std::vector<double> m2_;  // sum of squared deviations
};

// Coefficient-wise |mean(a) − mean(b)| and |std(a) − std(b)|; symmetric in
// its arguments. Shapes and orderings must match and both sides need at
// least two samples (std is undefined otherwise).
struct StatsDifference {
  std::vector<double> mean_abs_diff;
  std::vector<double> std_abs_diff;
};
StatsDifference stats_difference(const StatsAccumulator& a, const StatsAccumulator& b);

// One row of the mean/std curve: one scalar per packet (coefficients within
// the packet averaged), listed in the requested display ordering.
struct CurvePoint {
  std::int64_t packet_index = 0;  // position in the requested ordering
  std::string label;              // a/h/v/d path string
  double mean = 0.0;
  double std = 0.0;
};

// Collapses per-coefficient statistics to one point per packet. When the
// accumulator's ordering differs from `display`, points are permuted so the
// curve reads in `display` order.
std::vector<CurvePoint> packet_curve(const StatsAccumulator& stats, PacketOrdering display);

// CSV writers. Curves: "packet_index,label,mean,std". Heatmaps (one value
// per packet coefficient): "packet,row,col,value".
void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& os);
void write_heatmap_csv(const StatsAccumulator& stats, const std::vector<double>& values,
                       std::ostream& os);

}  // namespace wavepack
