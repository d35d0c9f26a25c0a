#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wavepack/image.hpp"
#include "wavepack/sparse.hpp"
#include "wavepack/transform.hpp"

namespace wavepack {

// natural   — packets enumerated by their filter path over {a,h,v,d} read as a
//             base-4 number (lexicographic label order: aaa, aah, aav, aad, …).
// frequency — packets arranged on the 2^Q × 2^Q sequency grid, flattened
//             row-major; see freq_order_permutation.
enum class PacketOrdering : std::uint8_t { natural = 0, frequency = 1 };

// Level-Q packet coefficients, data layout [packet][channel][ph][pw].
// packet_count·ph·pw always equals h·w of the source image (per channel).
struct PacketTensor {
  int level = 0;
  std::int64_t channels = 0;
  std::int64_t packet_height = 0;
  std::int64_t packet_width = 0;
  PacketOrdering ordering = PacketOrdering::natural;
  std::vector<double> data;

  std::int64_t packet_count() const { return std::int64_t{1} << (2 * level); }
  std::int64_t plane_size() const { return packet_height * packet_width; }
  double& at(std::int64_t p, std::int64_t c, std::int64_t y, std::int64_t x) {
    return data[static_cast<std::size_t>(((p * channels + c) * packet_height + y) *
                                         packet_width + x)];
  }
  double at(std::int64_t p, std::int64_t c, std::int64_t y, std::int64_t x) const {
    return data[static_cast<std::size_t>(((p * channels + c) * packet_height + y) *
                                         packet_width + x)];
  }
};

// Full wavelet-packet analysis to level Q: all four filters are applied
// recursively to every node, each channel independently. Direct strided
// implementation (the performance path); wpt_operator_2d is the oracle.
// Preconditions: h, w divisible by 2^Q, Q ≥ 1.
PacketTensor wpt_2d(const Image& image, const WaveletFilter& f, int level, BoundaryMode mode,
                    PacketOrdering ordering);

// Inverse packet transform. Requires gram_schmidt mode or a 2-tap filter —
// truncated boundary handling of longer filters is lossy and rejected.
Image iwpt_2d(const PacketTensor& packets, const WaveletFilter& f, BoundaryMode mode);

// Standard multi-level transform recursing on the a-block only.
// Details are stored coarsest-first; details[k] holds the h/v/d planes
// ([channels][height][width] each) of scale levels−k.
struct FwtDetail {
  std::int64_t height = 0;
  std::int64_t width = 0;
  std::vector<double> h, v, d;
};
struct FwtCoeffs {
  std::int64_t channels = 0;
  std::int64_t approx_height = 0;
  std::int64_t approx_width = 0;
  std::vector<double> approx;       // [channels][approx_height][approx_width]
  std::vector<FwtDetail> details;   // coarsest first
};
FwtCoeffs fwt_2d(const Image& image, const WaveletFilter& f, int levels, BoundaryMode mode);
Image ifwt_2d(const FwtCoeffs& coeffs, const WaveletFilter& f, BoundaryMode mode);

// perm[slot] = natural packet index displayed at grid slot (slot = fr·2^Q + fc,
// row-major). Per axis, the path bits at sequency position s are the binary
// reflected Gray code gray(s) = s ^ (s >> 1) — highpass children of a highpass
// band cover the lower half of its frequency range, and that recursive
// reversal is exactly the Gray code (checked against a DFT band-energy oracle
// in the tests). Q = 1 reduces to the identity [a, h, v, d].
std::vector<std::int64_t> freq_order_permutation(int level);

// Path label over {a,h,v,d} of the packet at `index` under the given ordering
// (for frequency ordering: the label of the packet displayed at grid slot
// `index`). Throws std::invalid_argument when index ≥ 4^Q.
std::string packet_label(std::int64_t index, int level, PacketOrdering ordering);

// Single-channel full packet analysis operator (4^Q·ph·pw rows, natural
// ordering, each packet block row-major) — the sparse-operator correctness
// oracle for wpt_2d.
SparseOperator wpt_operator_2d(const WaveletFilter& f, std::int64_t height, std::int64_t width,
                               int level, BoundaryMode mode);

// WPK1 little-endian binary: magic "WPK1", u32 level, u32 channels, u32
// packet_height, u32 packet_width, u8 ordering (0 natural / 1 frequency),
// then the data doubles in layout order.
void write_wpk1(const PacketTensor& t, std::ostream& os);
PacketTensor read_wpk1(std::istream& is);

// Long-form CSV "packet,channel,row,col,value" (17 significant digits).
void write_packet_csv(const PacketTensor& t, std::ostream& os);

}  // namespace wavepack
