// Regenerates the checked-in golden files under tests/golden/.
//
// Usage: wavepack_goldens [output_dir]
//
// The label files were reviewed against the published level-3 packet label
// listing and the frequency-ordered grid figure once at creation time; the
// operator masks freeze the sparsity structure of the boundary-wavelet
// matrices so structural regressions show up as diffs.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "wavepack/filterbank.hpp"
#include "wavepack/packets.hpp"
#include "wavepack/sparse.hpp"
#include "wavepack/transform.hpp"

namespace fs = std::filesystem;
using namespace wavepack;

namespace {

constexpr double kMaskThreshold = 1e-14;

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) {
    std::cerr << "cannot write " << p << "\n";
    std::exit(3);
  }
  return os;
}

// One line per row: "row: col col col" for entries above the mask threshold.
void write_mask(const SparseOperator& op, const fs::path& path) {
  std::ofstream os = open_out(path);
  for (std::int64_t r = 0; r < op.rows(); ++r) {
    os << r << ':';
    for (std::int64_t i = op.row_begin(r); i < op.row_end(r); ++i) {
      const SparseEntry& e = op.entries()[static_cast<std::size_t>(i)];
      if (std::abs(e.value) > kMaskThreshold) os << ' ' << e.col;
    }
    os << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::path("tests/golden");
  fs::create_directories(out_dir);

  {
    std::ofstream os = open_out(out_dir / "labels_q3.txt");
    for (std::int64_t i = 0; i < 64; ++i)
      os << packet_label(i, 3, PacketOrdering::natural) << '\n';
  }
  {
    std::ofstream os = open_out(out_dir / "freq_grid_q3.txt");
    for (std::int64_t r = 0; r < 8; ++r) {
      for (std::int64_t c = 0; c < 8; ++c) {
        if (c) os << ' ';
        os << packet_label(r * 8 + c, 3, PacketOrdering::frequency);
      }
      os << '\n';
    }
  }

  const WaveletFilter db2 = builtin_filter("db2");
  for (int level = 1; level <= 3; ++level) {
    const SparseOperator a = analysis_matrix_1d(db2, 32, level, BoundaryMode::gram_schmidt);
    write_mask(a, out_dir / ("mask_1d_db2_n32_l" + std::to_string(level) + ".txt"));
  }
  for (int level = 1; level <= 2; ++level) {
    const SparseOperator a = analysis_matrix_2d(db2, 16, 16, level, BoundaryMode::gram_schmidt);
    write_mask(a, out_dir / ("mask_2d_db2_16_l" + std::to_string(level) + ".txt"));
  }
  write_mask(analysis_matrix_2d(db2, 32, 32, 1, BoundaryMode::gram_schmidt),
             out_dir / "mask_2d_db2_32_l1.txt");

  std::cout << "goldens written to " << out_dir << "\n";
  return 0;
}
