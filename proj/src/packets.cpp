#include "wavepack/packets.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "wavepack/errors.hpp"
#include "wavepack/util.hpp"

namespace wavepack {

namespace {

void check_wpt_args(std::int64_t h, std::int64_t w, int level) {
  if (level < 1) throw std::invalid_argument("packet level must be >= 1");
  const std::int64_t block = std::int64_t{1} << level;
  if (h % block != 0 || w % block != 0)
    throw std::invalid_argument("image " + std::to_string(h) + "x" + std::to_string(w) +
                                " not divisible by 2^level = " + std::to_string(block));
}

void check_invertible(const WaveletFilter& f, BoundaryMode mode, const char* op) {
  if (mode == BoundaryMode::truncated && f.length() > 2)
    throw std::invalid_argument(std::string(op) +
                                ": truncated mode with a filter longer than 2 taps is lossy; "
                                "use gram_schmidt");
}

// out = G·in along axis 0 (out rows follow G's stacked [lo; hi] layout).
void forward_axis0(const SparseOperator& g, const double* in, double* out, std::int64_t hh,
                   std::int64_t ww) {
  std::fill(out, out + hh * ww, 0.0);
  for (const SparseEntry& e : g.entries()) {
    const double* src = in + e.col * ww;
    double* dst = out + e.row * ww;
    for (std::int64_t x = 0; x < ww; ++x) dst[x] += e.value * src[x];
  }
}

// out[y][r] = Σ_k G[r,k]·in[y][k] along axis 1.
void forward_axis1(const SparseOperator& g, const double* in, double* out, std::int64_t hh,
                   std::int64_t ww) {
  for (std::int64_t y = 0; y < hh; ++y) {
    const double* row = in + y * ww;
    double* dst = out + y * ww;
    for (std::int64_t r = 0; r < ww; ++r) {
      double acc = 0.0;
      const std::int64_t last = g.row_end(r);
      for (std::int64_t k = g.row_begin(r); k < last; ++k) {
        const SparseEntry& e = g.entries()[static_cast<std::size_t>(k)];
        acc += e.value * row[e.col];
      }
      dst[r] = acc;
    }
  }
}

// out = Gᵀ·in along axis 0.
void adjoint_axis0(const SparseOperator& g, const double* in, double* out, std::int64_t hh,
                   std::int64_t ww) {
  std::fill(out, out + hh * ww, 0.0);
  for (const SparseEntry& e : g.entries()) {
    const double* src = in + e.row * ww;
    double* dst = out + e.col * ww;
    for (std::int64_t x = 0; x < ww; ++x) dst[x] += e.value * src[x];
  }
}

// out[y][k] = Σ_r G[r,k]·in[y][r] along axis 1.
void adjoint_axis1(const SparseOperator& g, const double* in, double* out, std::int64_t hh,
                   std::int64_t ww) {
  std::fill(out, out + hh * ww, 0.0);
  for (std::int64_t y = 0; y < hh; ++y) {
    const double* row = in + y * ww;
    double* dst = out + y * ww;
    for (const SparseEntry& e : g.entries()) dst[e.col] += e.value * row[e.row];
  }
}

// Scale matrices for every node size reached during a level-Q recursion,
// index ℓ = depth (axis length at depth ℓ is len/2^ℓ).
std::vector<SparseOperator> scale_ladder(const WaveletFilter& f, std::int64_t len, int levels,
                                         BoundaryMode mode) {
  std::vector<SparseOperator> ladder;
  ladder.reserve(static_cast<std::size_t>(levels));
  std::int64_t cur = len;
  for (int l = 0; l < levels; ++l, cur /= 2) ladder.push_back(scale_matrix_1d(f, cur, mode));
  return ladder;
}

struct WptWork {
  const std::vector<SparseOperator>* gh = nullptr;
  const std::vector<SparseOperator>* gw = nullptr;
  PacketTensor* out = nullptr;
  std::int64_t channel = 0;
  std::int64_t next_packet = 0;
};

// Splits `plane` (hh × ww) once, recursing into the four children in
// a, h, v, d order; leaves land at consecutive natural packet indices.
void wpt_recurse(WptWork& work, std::vector<double>& plane, std::int64_t hh, std::int64_t ww,
                 int depth, int level) {
  if (depth == level) {
    PacketTensor& t = *work.out;
    double* dst = &t.at(work.next_packet, work.channel, 0, 0);
    std::copy(plane.begin(), plane.end(), dst);
    ++work.next_packet;
    return;
  }
  const SparseOperator& gh = (*work.gh)[static_cast<std::size_t>(depth)];
  const SparseOperator& gw = (*work.gw)[static_cast<std::size_t>(depth)];
  std::vector<double> tmp(static_cast<std::size_t>(hh * ww));
  std::vector<double> both(static_cast<std::size_t>(hh * ww));
  forward_axis0(gh, plane.data(), tmp.data(), hh, ww);
  forward_axis1(gw, tmp.data(), both.data(), hh, ww);

  const std::int64_t h2 = hh / 2, w2 = ww / 2;
  std::vector<double> child(static_cast<std::size_t>(h2 * w2));
  for (int b = 0; b < 4; ++b) {  // a, h, v, d quadrants
    const std::int64_t y0 = (b / 2) * h2, x0 = (b % 2) * w2;
    for (std::int64_t y = 0; y < h2; ++y)
      for (std::int64_t x = 0; x < w2; ++x)
        child[static_cast<std::size_t>(y * w2 + x)] =
            both[static_cast<std::size_t>((y0 + y) * ww + (x0 + x))];
    wpt_recurse(work, child, h2, w2, depth + 1, level);
  }
}

struct IwptWork {
  const std::vector<SparseOperator>* gh = nullptr;
  const std::vector<SparseOperator>* gw = nullptr;
  const PacketTensor* in = nullptr;
  std::int64_t channel = 0;
  std::int64_t next_packet = 0;
};

void iwpt_recurse(IwptWork& work, std::vector<double>& plane, std::int64_t hh, std::int64_t ww,
                  int depth, int level) {
  if (depth == level) {
    const PacketTensor& t = *work.in;
    const double* src =
        t.data.data() +
        static_cast<std::size_t>((work.next_packet * t.channels + work.channel) * hh * ww);
    std::copy(src, src + hh * ww, plane.begin());
    ++work.next_packet;
    return;
  }
  const std::int64_t h2 = hh / 2, w2 = ww / 2;
  std::vector<double> stacked(static_cast<std::size_t>(hh * ww));
  std::vector<double> child(static_cast<std::size_t>(h2 * w2));
  for (int b = 0; b < 4; ++b) {
    iwpt_recurse(work, child, h2, w2, depth + 1, level);
    const std::int64_t y0 = (b / 2) * h2, x0 = (b % 2) * w2;
    for (std::int64_t y = 0; y < h2; ++y)
      for (std::int64_t x = 0; x < w2; ++x)
        stacked[static_cast<std::size_t>((y0 + y) * ww + (x0 + x))] =
            child[static_cast<std::size_t>(y * w2 + x)];
  }
  const SparseOperator& gh = (*work.gh)[static_cast<std::size_t>(depth)];
  const SparseOperator& gw = (*work.gw)[static_cast<std::size_t>(depth)];
  std::vector<double> tmp(static_cast<std::size_t>(hh * ww));
  adjoint_axis1(gw, stacked.data(), tmp.data(), hh, ww);
  adjoint_axis0(gh, tmp.data(), plane.data(), hh, ww);
}

PacketTensor permute_packets(const PacketTensor& t, const std::vector<std::int64_t>& slot_to_src,
                             PacketOrdering new_ordering) {
  PacketTensor out = t;
  out.ordering = new_ordering;
  const std::int64_t block = t.channels * t.plane_size();
  for (std::int64_t slot = 0; slot < t.packet_count(); ++slot) {
    const double* src = t.data.data() + slot_to_src[static_cast<std::size_t>(slot)] * block;
    std::copy(src, src + block, out.data.data() + slot * block);
  }
  return out;
}

}  // namespace

PacketTensor wpt_2d(const Image& image, const WaveletFilter& f, int level, BoundaryMode mode,
                    PacketOrdering ordering) {
  check_wpt_args(image.height, image.width, level);
  const std::vector<SparseOperator> gh = scale_ladder(f, image.height, level, mode);
  const std::vector<SparseOperator> gw = scale_ladder(f, image.width, level, mode);

  PacketTensor t;
  t.level = level;
  t.channels = image.channels;
  t.packet_height = image.height >> level;
  t.packet_width = image.width >> level;
  t.ordering = PacketOrdering::natural;
  t.data.assign(static_cast<std::size_t>(t.packet_count() * t.channels * t.plane_size()), 0.0);

  for (std::int64_t c = 0; c < image.channels; ++c) {
    WptWork work{&gh, &gw, &t, c, 0};
    std::vector<double> plane(image.plane(c), image.plane(c) + image.plane_size());
    wpt_recurse(work, plane, image.height, image.width, 0, level);
  }
  if (ordering == PacketOrdering::natural) return t;
  return permute_packets(t, freq_order_permutation(level), PacketOrdering::frequency);
}

Image iwpt_2d(const PacketTensor& packets, const WaveletFilter& f, BoundaryMode mode) {
  check_invertible(f, mode, "iwpt_2d");
  const PacketTensor* src = &packets;
  PacketTensor natural;
  if (packets.ordering == PacketOrdering::frequency) {
    // Invert the display permutation back to natural packet positions.
    const std::vector<std::int64_t> perm = freq_order_permutation(packets.level);
    std::vector<std::int64_t> inverse(perm.size());
    for (std::size_t slot = 0; slot < perm.size(); ++slot)
      inverse[static_cast<std::size_t>(perm[slot])] = static_cast<std::int64_t>(slot);
    natural = permute_packets(packets, inverse, PacketOrdering::natural);
    src = &natural;
  }

  const std::int64_t h = src->packet_height << src->level;
  const std::int64_t w = src->packet_width << src->level;
  const std::vector<SparseOperator> gh = scale_ladder(f, h, src->level, mode);
  const std::vector<SparseOperator> gw = scale_ladder(f, w, src->level, mode);

  Image img(src->channels, h, w);
  for (std::int64_t c = 0; c < src->channels; ++c) {
    IwptWork work{&gh, &gw, src, c, 0};
    std::vector<double> plane(static_cast<std::size_t>(h * w));
    iwpt_recurse(work, plane, h, w, 0, src->level);
    std::copy(plane.begin(), plane.end(), img.plane(c));
  }
  return img;
}

FwtCoeffs fwt_2d(const Image& image, const WaveletFilter& f, int levels, BoundaryMode mode) {
  check_wpt_args(image.height, image.width, levels);
  FwtCoeffs out;
  out.channels = image.channels;
  out.details.resize(static_cast<std::size_t>(levels));

  std::int64_t hh = image.height, ww = image.width;
  std::vector<std::vector<double>> approx(static_cast<std::size_t>(image.channels));
  for (std::int64_t c = 0; c < image.channels; ++c)
    approx[static_cast<std::size_t>(c)].assign(image.plane(c), image.plane(c) + hh * ww);

  for (int l = 0; l < levels; ++l) {
    const SparseOperator gh = scale_matrix_1d(f, hh, mode);
    const SparseOperator gw = scale_matrix_1d(f, ww, mode);
    const std::int64_t h2 = hh / 2, w2 = ww / 2;
    FwtDetail& det = out.details[static_cast<std::size_t>(levels - 1 - l)];  // coarsest first
    det.height = h2;
    det.width = w2;
    det.h.assign(static_cast<std::size_t>(image.channels * h2 * w2), 0.0);
    det.v.assign(static_cast<std::size_t>(image.channels * h2 * w2), 0.0);
    det.d.assign(static_cast<std::size_t>(image.channels * h2 * w2), 0.0);

    for (std::int64_t c = 0; c < image.channels; ++c) {
      std::vector<double>& plane = approx[static_cast<std::size_t>(c)];
      std::vector<double> tmp(static_cast<std::size_t>(hh * ww));
      std::vector<double> both(static_cast<std::size_t>(hh * ww));
      forward_axis0(gh, plane.data(), tmp.data(), hh, ww);
      forward_axis1(gw, tmp.data(), both.data(), hh, ww);
      std::vector<double> next_a(static_cast<std::size_t>(h2 * w2));
      for (int b = 0; b < 4; ++b) {
        const std::int64_t y0 = (b / 2) * h2, x0 = (b % 2) * w2;
        double* dst = nullptr;
        if (b == 0)
          dst = next_a.data();
        else if (b == 1)
          dst = det.h.data() + c * h2 * w2;
        else if (b == 2)
          dst = det.v.data() + c * h2 * w2;
        else
          dst = det.d.data() + c * h2 * w2;
        for (std::int64_t y = 0; y < h2; ++y)
          for (std::int64_t x = 0; x < w2; ++x)
            dst[y * w2 + x] = both[static_cast<std::size_t>((y0 + y) * ww + (x0 + x))];
      }
      plane = std::move(next_a);
    }
    hh = h2;
    ww = w2;
  }
  out.approx_height = hh;
  out.approx_width = ww;
  out.approx.assign(static_cast<std::size_t>(image.channels * hh * ww), 0.0);
  for (std::int64_t c = 0; c < image.channels; ++c)
    std::copy(approx[static_cast<std::size_t>(c)].begin(),
              approx[static_cast<std::size_t>(c)].end(), out.approx.data() + c * hh * ww);
  return out;
}

Image ifwt_2d(const FwtCoeffs& coeffs, const WaveletFilter& f, BoundaryMode mode) {
  check_invertible(f, mode, "ifwt_2d");
  const int levels = static_cast<int>(coeffs.details.size());
  if (levels < 1) throw std::invalid_argument("ifwt_2d: no detail scales");

  std::int64_t hh = coeffs.approx_height, ww = coeffs.approx_width;
  std::vector<std::vector<double>> approx(static_cast<std::size_t>(coeffs.channels));
  for (std::int64_t c = 0; c < coeffs.channels; ++c) {
    const double* src = coeffs.approx.data() + c * hh * ww;
    approx[static_cast<std::size_t>(c)].assign(src, src + hh * ww);
  }

  for (int l = 0; l < levels; ++l) {  // coarsest detail first
    const FwtDetail& det = coeffs.details[static_cast<std::size_t>(l)];
    if (det.height != hh || det.width != ww)
      throw std::invalid_argument("ifwt_2d: detail scale " + std::to_string(l) +
                                  " does not match the running approximation size");
    const std::int64_t h2 = hh * 2, w2 = ww * 2;
    const SparseOperator gh = scale_matrix_1d(f, h2, mode);
    const SparseOperator gw = scale_matrix_1d(f, w2, mode);
    for (std::int64_t c = 0; c < coeffs.channels; ++c) {
      std::vector<double> stacked(static_cast<std::size_t>(h2 * w2), 0.0);
      const double* planes[4] = {approx[static_cast<std::size_t>(c)].data(),
                                 det.h.data() + c * hh * ww, det.v.data() + c * hh * ww,
                                 det.d.data() + c * hh * ww};
      for (int b = 0; b < 4; ++b) {
        const std::int64_t y0 = (b / 2) * hh, x0 = (b % 2) * ww;
        for (std::int64_t y = 0; y < hh; ++y)
          for (std::int64_t x = 0; x < ww; ++x)
            stacked[static_cast<std::size_t>((y0 + y) * w2 + (x0 + x))] = planes[b][y * ww + x];
      }
      std::vector<double> tmp(static_cast<std::size_t>(h2 * w2));
      std::vector<double> rebuilt(static_cast<std::size_t>(h2 * w2));
      adjoint_axis1(gw, stacked.data(), tmp.data(), h2, w2);
      adjoint_axis0(gh, tmp.data(), rebuilt.data(), h2, w2);
      approx[static_cast<std::size_t>(c)] = std::move(rebuilt);
    }
    hh = h2;
    ww = w2;
  }

  Image img(coeffs.channels, hh, ww);
  for (std::int64_t c = 0; c < coeffs.channels; ++c)
    std::copy(approx[static_cast<std::size_t>(c)].begin(),
              approx[static_cast<std::size_t>(c)].end(), img.plane(c));
  return img;
}

std::vector<std::int64_t> freq_order_permutation(int level) {
  if (level < 1) throw std::invalid_argument("freq_order_permutation: level must be >= 1");
  const std::int64_t side = std::int64_t{1} << level;
  const auto gray = [](std::int64_t x) { return x ^ (x >> 1); };
  std::vector<std::int64_t> perm(static_cast<std::size_t>(side * side));
  for (std::int64_t fr = 0; fr < side; ++fr) {
    const std::int64_t rowbits = gray(fr);
    for (std::int64_t fc = 0; fc < side; ++fc) {
      const std::int64_t colbits = gray(fc);
      std::int64_t natural = 0;
      for (int l = level - 1; l >= 0; --l) {
        const std::int64_t rb = (rowbits >> l) & 1;
        const std::int64_t cb = (colbits >> l) & 1;
        natural = natural * 4 + (2 * rb + cb);  // digit: a=0 h=1 v=2 d=3
      }
      perm[static_cast<std::size_t>(fr * side + fc)] = natural;
    }
  }
  return perm;
}

std::string packet_label(std::int64_t index, int level, PacketOrdering ordering) {
  const std::int64_t count = std::int64_t{1} << (2 * level);
  if (index < 0 || index >= count)
    throw std::invalid_argument("packet_label: index " + std::to_string(index) +
                                " out of range for level " + std::to_string(level));
  if (ordering == PacketOrdering::frequency)
    index = freq_order_permutation(level)[static_cast<std::size_t>(index)];
  std::string label(static_cast<std::size_t>(level), 'a');
  static const char kDigits[4] = {'a', 'h', 'v', 'd'};
  for (int l = level - 1; l >= 0; --l) {
    label[static_cast<std::size_t>(level - 1 - l)] = kDigits[(index >> (2 * l)) & 3];
  }
  return label;
}

SparseOperator wpt_operator_2d(const WaveletFilter& f, std::int64_t height, std::int64_t width,
                               int level, BoundaryMode mode) {
  check_wpt_args(height, width, level);
  // Scale s splits all 4^(s−1) equally-sized nodes at once:
  // A = Π_s (I_{4^(s−1)} ⊗ [a;h;v;d]-block). Natural order falls out of the
  // children being emitted in a,h,v,d order at every scale.
  SparseOperator a = scale_matrix_2d(f, height, width, mode);
  std::int64_t hs = height / 2, ws = width / 2;
  for (int s = 1; s < level; ++s, hs /= 2, ws /= 2) {
    const SparseOperator block = scale_matrix_2d(f, hs, ws, mode);
    const SparseOperator stage =
        SparseOperator::kron(SparseOperator::identity(std::int64_t{1} << (2 * s)), block);
    a = stage.matmul(a);
  }
  return a;
}

void write_wpk1(const PacketTensor& t, std::ostream& os) {
  write_magic(os, "WPK1");
  write_u32le(os, static_cast<std::uint32_t>(t.level));
  write_u32le(os, static_cast<std::uint32_t>(t.channels));
  write_u32le(os, static_cast<std::uint32_t>(t.packet_height));
  write_u32le(os, static_cast<std::uint32_t>(t.packet_width));
  const unsigned char ordering = static_cast<unsigned char>(t.ordering);
  os.write(reinterpret_cast<const char*>(&ordering), 1);
  for (const double v : t.data) write_f64le(os, v);
  if (!os) throw io_error("WPK1 write failed");
}

PacketTensor read_wpk1(std::istream& is) {
  expect_magic(is, "WPK1", "packet tensor");
  PacketTensor t;
  t.level = static_cast<int>(read_u32le(is));
  t.channels = read_u32le(is);
  t.packet_height = read_u32le(is);
  t.packet_width = read_u32le(is);
  char ordering = 0;
  is.read(&ordering, 1);
  if (!is) throw io_error("WPK1: truncated header");
  if (ordering != 0 && ordering != 1) throw io_error("WPK1: bad ordering byte");
  t.ordering = static_cast<PacketOrdering>(ordering);
  if (t.level < 1 || t.level > 15 || t.channels < 1 || t.packet_height < 1 ||
      t.packet_width < 1)
    throw io_error("WPK1: implausible header fields");
  const std::int64_t n = t.packet_count() * t.channels * t.plane_size();
  t.data.resize(static_cast<std::size_t>(n));
  for (double& v : t.data) v = read_f64le(is);
  return t;
}

void write_packet_csv(const PacketTensor& t, std::ostream& os) {
  os << "packet,channel,row,col,value\n";
  for (std::int64_t p = 0; p < t.packet_count(); ++p)
    for (std::int64_t c = 0; c < t.channels; ++c)
      for (std::int64_t y = 0; y < t.packet_height; ++y)
        for (std::int64_t x = 0; x < t.packet_width; ++x)
          os << p << ',' << c << ',' << y << ',' << x << ','
             << format_g17(t.at(p, c, y, x)) << '\n';
}

}  // namespace wavepack
