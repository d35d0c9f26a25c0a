#include "wavepack/stats.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "wavepack/errors.hpp"
#include "wavepack/util.hpp"

namespace wavepack {

namespace {
constexpr double kLnFloor = 1e-12;
}

PacketTensor ln_abs_scale(const PacketTensor& t, ChannelPolicy policy) {
  PacketTensor out;
  out.level = t.level;
  out.packet_height = t.packet_height;
  out.packet_width = t.packet_width;
  out.ordering = t.ordering;
  if (policy == ChannelPolicy::per_channel) {
    out.channels = t.channels;
    out.data.resize(t.data.size());
    for (std::size_t i = 0; i < t.data.size(); ++i)
      out.data[i] = std::log(std::abs(t.data[i]) + kLnFloor);
    return out;
  }
  out.channels = 1;
  const std::int64_t plane = t.plane_size();
  out.data.assign(static_cast<std::size_t>(t.packet_count() * plane), 0.0);
  for (std::int64_t p = 0; p < t.packet_count(); ++p) {
    for (std::int64_t c = 0; c < t.channels; ++c) {
      const double* src =
          t.data.data() + static_cast<std::size_t>((p * t.channels + c) * plane);
      double* dst = out.data.data() + p * plane;
      for (std::int64_t i = 0; i < plane; ++i) dst[i] += std::abs(src[i]);
    }
    double* dst = out.data.data() + p * plane;
    const double inv = 1.0 / static_cast<double>(t.channels);
    for (std::int64_t i = 0; i < plane; ++i) dst[i] = std::log(dst[i] * inv + kLnFloor);
  }
  return out;
}

void StatsAccumulator::init_shape(const PacketTensor& t) {
  level_ = t.level;
  packet_height_ = t.packet_height;
  packet_width_ = t.packet_width;
  ordering_ = t.ordering;
  const std::size_t n = static_cast<std::size_t>(t.packet_count() * t.plane_size());
  mean_.assign(n, 0.0);
  m2_.assign(n, 0.0);
}

void StatsAccumulator::add(const PacketTensor& t) {
  if (t.channels != 1)
    throw std::invalid_argument(
        "StatsAccumulator::add: collapse channels first (ln_abs_scale with "
        "ChannelPolicy::averaged, or accumulate per channel)");
  if (count_ == 0) {
    init_shape(t);
  } else if (t.level != level_ || t.packet_height != packet_height_ ||
             t.packet_width != packet_width_ || t.ordering != ordering_) {
    throw std::invalid_argument("StatsAccumulator::add: tensor shape/ordering mismatch");
  }
  ++count_;
  const double inv_n = 1.0 / static_cast<double>(count_);
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double delta = t.data[i] - mean_[i];
    mean_[i] += delta * inv_n;
    m2_[i] += delta * (t.data[i] - mean_[i]);
  }
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  if (other.level_ != level_ || other.packet_height_ != packet_height_ ||
      other.packet_width_ != packet_width_ || other.ordering_ != ordering_)
    throw std::invalid_argument("StatsAccumulator::merge: shape/ordering mismatch");

  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double delta = other.mean_[i] - mean_[i];
    mean_[i] += delta * (nb / n);
    m2_[i] += other.m2_[i] + delta * delta * (na * nb / n);
  }
  count_ += other.count_;
}

std::vector<double> StatsAccumulator::std() const {
  if (count_ < 2)
    throw invariant_error("standard deviation needs at least two samples, have " +
                          std::to_string(count_));
  std::vector<double> out(m2_.size());
  const double inv = 1.0 / static_cast<double>(count_ - 1);
  for (std::size_t i = 0; i < m2_.size(); ++i) out[i] = std::sqrt(m2_[i] * inv);
  return out;
}

StatsDifference stats_difference(const StatsAccumulator& a, const StatsAccumulator& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("stats_difference: empty accumulator");
  if (a.level() != b.level() || a.packet_height() != b.packet_height() ||
      a.packet_width() != b.packet_width() || a.ordering() != b.ordering())
    throw std::invalid_argument("stats_difference: shape/ordering mismatch");
  const std::vector<double> sa = a.std();
  const std::vector<double> sb = b.std();
  StatsDifference out;
  out.mean_abs_diff.resize(a.mean().size());
  out.std_abs_diff.resize(sa.size());
  for (std::size_t i = 0; i < out.mean_abs_diff.size(); ++i) {
    out.mean_abs_diff[i] = std::abs(a.mean()[i] - b.mean()[i]);
    out.std_abs_diff[i] = std::abs(sa[i] - sb[i]);
  }
  return out;
}

std::vector<CurvePoint> packet_curve(const StatsAccumulator& stats, PacketOrdering display) {
  if (stats.sample_count() < 2)
    throw invariant_error("packet_curve needs at least two samples");
  const std::int64_t packets = std::int64_t{1} << (2 * stats.level());
  const std::int64_t plane = stats.packet_height() * stats.packet_width();
  const std::vector<double> sd = stats.std();

  // Per-packet scalar summaries in the accumulator's own ordering.
  std::vector<double> pmean(static_cast<std::size_t>(packets), 0.0);
  std::vector<double> pstd(static_cast<std::size_t>(packets), 0.0);
  for (std::int64_t p = 0; p < packets; ++p) {
    double ms = 0.0, ss = 0.0;
    for (std::int64_t i = 0; i < plane; ++i) {
      ms += stats.mean()[static_cast<std::size_t>(p * plane + i)];
      ss += sd[static_cast<std::size_t>(p * plane + i)];
    }
    pmean[static_cast<std::size_t>(p)] = ms / static_cast<double>(plane);
    pstd[static_cast<std::size_t>(p)] = ss / static_cast<double>(plane);
  }

  // Map a display slot to the accumulator's storage slot.
  std::vector<std::int64_t> slot_to_stored(static_cast<std::size_t>(packets));
  if (display == stats.ordering()) {
    for (std::int64_t s = 0; s < packets; ++s) slot_to_stored[static_cast<std::size_t>(s)] = s;
  } else if (display == PacketOrdering::frequency) {
    // stored natural, show frequency
    slot_to_stored = freq_order_permutation(stats.level());
  } else {
    // stored frequency, show natural
    const std::vector<std::int64_t> perm = freq_order_permutation(stats.level());
    for (std::size_t slot = 0; slot < perm.size(); ++slot)
      slot_to_stored[static_cast<std::size_t>(perm[slot])] = static_cast<std::int64_t>(slot);
  }

  std::vector<CurvePoint> curve(static_cast<std::size_t>(packets));
  for (std::int64_t s = 0; s < packets; ++s) {
    CurvePoint& pt = curve[static_cast<std::size_t>(s)];
    pt.packet_index = s;
    pt.label = packet_label(s, stats.level(), display);
    pt.mean = pmean[static_cast<std::size_t>(slot_to_stored[static_cast<std::size_t>(s)])];
    pt.std = pstd[static_cast<std::size_t>(slot_to_stored[static_cast<std::size_t>(s)])];
  }
  return curve;
}

void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& os) {
  os << "packet_index,label,mean,std\n";
  for (const CurvePoint& pt : curve)
    os << pt.packet_index << ',' << pt.label << ',' << format_g17(pt.mean) << ','
       << format_g17(pt.std) << '\n';
}

void write_heatmap_csv(const StatsAccumulator& stats, const std::vector<double>& values,
                       std::ostream& os) {
  const std::int64_t packets = std::int64_t{1} << (2 * stats.level());
  const std::int64_t plane = stats.packet_height() * stats.packet_width();
  if (values.size() != static_cast<std::size_t>(packets * plane))
    throw std::invalid_argument("write_heatmap_csv: value count does not match the shape");
  os << "packet,row,col,value\n";
  for (std::int64_t p = 0; p < packets; ++p)
    for (std::int64_t y = 0; y < stats.packet_height(); ++y)
      for (std::int64_t x = 0; x < stats.packet_width(); ++x)
        os << p << ',' << y << ',' << x << ','
           << format_g17(values[static_cast<std::size_t>(
                  p * plane + y * stats.packet_width() + x)])
           << '\n';
}

}  // namespace wavepack
