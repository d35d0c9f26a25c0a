#include "wavepack/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include "wavepack/errors.hpp"
#include "wavepack/image.hpp"
#include "wavepack/packets.hpp"
#include "wavepack/parallel.hpp"

namespace wavepack {

namespace {

void check_geometry(const Image& img, const Image& first, const std::string& path) {
  if (img.channels != first.channels || img.height != first.height || img.width != first.width)
    throw invariant_error("image geometry mismatch at " + path + ": expected " +
                          std::to_string(first.channels) + "x" + std::to_string(first.height) +
                          "x" + std::to_string(first.width) + ", got " +
                          std::to_string(img.channels) + "x" + std::to_string(img.height) + "x" +
                          std::to_string(img.width));
}

}  // namespace

FeatureMatrix extract_features(const std::vector<const DatasetEntry*>& entries,
                               const FeatureSpec& spec) {
  if (entries.empty()) throw std::invalid_argument("extract_features: empty split");
  if (spec.kind != "packet" && spec.kind != "pixel")
    throw std::invalid_argument("unknown feature kind '" + spec.kind +
                                "' (expected packet or pixel)");

  const Image first = load_image(entries[0]->path);
  const WaveletFilter filter =
      spec.kind == "packet" ? builtin_filter(spec.wavelet) : WaveletFilter{};

  std::int64_t dim = 0;
  if (spec.kind == "pixel") {
    dim = first.channels * first.height * first.width;
  } else {
    const std::int64_t packets = std::int64_t{1} << (2 * spec.level);
    const std::int64_t ph = first.height >> spec.level;
    const std::int64_t pw = first.width >> spec.level;
    dim = packets * first.channels * ph * pw;
  }

  FeatureMatrix fm;
  fm.samples = static_cast<std::int64_t>(entries.size());
  fm.dim = dim;
  fm.channels = first.channels;
  fm.x.assign(static_cast<std::size_t>(fm.samples * fm.dim), 0.0);
  fm.y.resize(static_cast<std::size_t>(fm.samples));
  fm.channel_of.resize(static_cast<std::size_t>(dim));

  if (spec.kind == "pixel") {
    for (std::int64_t d = 0; d < dim; ++d)
      fm.channel_of[static_cast<std::size_t>(d)] = d / (first.height * first.width);
  } else {
    const std::int64_t plane = (first.height >> spec.level) * (first.width >> spec.level);
    for (std::int64_t d = 0; d < dim; ++d)
      fm.channel_of[static_cast<std::size_t>(d)] = (d / plane) % first.channels;
  }

  parallel_for(entries.size(), [&](std::size_t i) {
    const Image img = load_image(entries[i]->path);
    check_geometry(img, first, entries[i]->path);
    fm.y[i] = entries[i]->label;
    double* row = fm.row(static_cast<std::int64_t>(i));
    if (spec.kind == "pixel") {
      std::copy(img.data.begin(), img.data.end(), row);
      return;
    }
    const PacketTensor packets =
        wpt_2d(img, filter, spec.level, spec.boundary, PacketOrdering::natural);
    const PacketTensor scaled = ln_abs_scale(packets, ChannelPolicy::per_channel);
    std::copy(scaled.data.begin(), scaled.data.end(), row);
  });
  return fm;
}

StatsAccumulator directory_stats(const std::vector<std::string>& paths, const FeatureSpec& spec,
                                 PacketOrdering ordering) {
  if (paths.empty()) throw std::invalid_argument("directory_stats: no images");
  if (spec.kind != "packet")
    throw std::invalid_argument("directory_stats: statistics are defined on packet features");
  const WaveletFilter filter = builtin_filter(spec.wavelet);

  // Shard by contiguous image ranges, then merge shards in order; the
  // Chan merge is exact so the result matches a sequential pass.
  const std::size_t workers = static_cast<std::size_t>(thread_count());
  const std::size_t shards = std::min(workers, paths.size());
  std::vector<StatsAccumulator> partial(shards);
  parallel_for(shards, [&](std::size_t s) {
    const std::size_t begin = paths.size() * s / shards;
    const std::size_t end = paths.size() * (s + 1) / shards;
    for (std::size_t i = begin; i < end; ++i) {
      const Image img = load_image(paths[i]);
      const PacketTensor packets = wpt_2d(img, filter, spec.level, spec.boundary, ordering);
      partial[s].add(ln_abs_scale(packets, ChannelPolicy::averaged));
    }
  });
  StatsAccumulator total;
  for (const StatsAccumulator& p : partial) total.merge(p);
  return total;
}

}  // namespace wavepack
