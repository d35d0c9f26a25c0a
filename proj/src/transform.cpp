#include "wavepack/transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wavepack/errors.hpp"

namespace wavepack {

namespace {

// Centered window start offset: row i's window begins at 2i − (N/2 − 1).
std::int64_t phase_offset(std::size_t filter_len) {
  return static_cast<std::int64_t>(filter_len) / 2 - 1;
}

// Emits the stride-2 convolution rows of one filter into `out` with the row
// index shifted by row_base. cyclic=true wraps out-of-range columns (entries
// may collide for N > L — caller must sum duplicates); cyclic=false drops them
// (truncation).
void emit_conv_block(const std::vector<double>& filter, std::int64_t signal_len,
                     std::int64_t row_base, bool cyclic, std::vector<SparseEntry>& out) {
  const std::int64_t n = static_cast<std::int64_t>(filter.size());
  const std::int64_t off = phase_offset(filter.size());
  for (std::int64_t i = 0; i < signal_len / 2; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      std::int64_t c = 2 * i - off + j;
      const double v = filter[static_cast<std::size_t>(n - 1 - j)];
      if (c < 0 || c >= signal_len) {
        if (!cyclic) continue;
        c = ((c % signal_len) + signal_len) % signal_len;
      }
      if (v != 0.0) out.push_back({row_base + i, c, v});
    }
  }
}

void check_scale_args(const WaveletFilter& f, std::int64_t signal_len) {
  if (signal_len < 2 || signal_len % 2 != 0)
    throw std::invalid_argument("signal length must be even and >= 2, got " +
                                std::to_string(signal_len));
  if (f.length() < 2 || f.length() % 2 != 0)
    throw std::invalid_argument("filter length must be even and >= 2");
}

void check_levels(std::int64_t len, int levels, const char* axis) {
  if (levels < 1) throw std::invalid_argument("levels must be >= 1");
  const std::int64_t block = std::int64_t{1} << levels;
  if (len % block != 0)
    throw std::invalid_argument(std::string(axis) + " length " + std::to_string(len) +
                                " not divisible by 2^levels = " + std::to_string(block));
}

// Block-diagonal embedding: top-left block followed by an identity tail.
SparseOperator embed_block(const SparseOperator& block, std::int64_t total) {
  std::vector<SparseEntry> entries(block.entries());
  for (std::int64_t d = block.rows(); d < total; ++d) entries.push_back({d, d, 1.0});
  return SparseOperator::from_entries(total, total, std::move(entries));
}

}  // namespace

SparseOperator conv_matrix_1d(const std::vector<double>& filter_vec, std::int64_t signal_len) {
  if (signal_len < static_cast<std::int64_t>(filter_vec.size()))
    throw std::invalid_argument("conv_matrix_1d: signal length " + std::to_string(signal_len) +
                                " shorter than filter length " +
                                std::to_string(filter_vec.size()));
  if (signal_len % 2 != 0 || signal_len <= 0)
    throw std::invalid_argument("conv_matrix_1d: signal length must be even and positive");
  if (filter_vec.empty()) throw std::invalid_argument("conv_matrix_1d: empty filter");
  std::vector<SparseEntry> entries;
  entries.reserve(static_cast<std::size_t>(signal_len / 2) * filter_vec.size());
  emit_conv_block(filter_vec, signal_len, 0, /*cyclic=*/true, entries);
  return SparseOperator::from_entries(signal_len / 2, signal_len, std::move(entries));
}

std::vector<std::int64_t> wrapped_rows_1d(std::size_t filter_len, std::int64_t signal_len) {
  std::vector<std::int64_t> order;
  const std::int64_t n = static_cast<std::int64_t>(filter_len);
  if (n > signal_len) return order;  // periodized case: no boundary treatment
  const std::int64_t off = phase_offset(filter_len);
  std::vector<std::int64_t> left, right;
  for (std::int64_t i = 0; i < signal_len / 2; ++i) {
    const std::int64_t start = 2 * i - off;
    const std::int64_t end = start + n - 1;
    if (start < 0)
      left.push_back(i);
    else if (end >= signal_len)
      right.push_back(i);
  }
  order = left;                                          // ascending
  order.insert(order.end(), right.rbegin(), right.rend());  // descending
  return order;
}

std::vector<std::int64_t> scale_boundary_rows(std::size_t filter_len, std::int64_t signal_len) {
  const std::vector<std::int64_t> block = wrapped_rows_1d(filter_len, signal_len);
  std::vector<std::int64_t> rows = block;
  for (const std::int64_t r : block) rows.push_back(r + signal_len / 2);
  return rows;
}

SparseOperator scale_matrix_1d(const WaveletFilter& f, std::int64_t signal_len,
                               BoundaryMode mode) {
  check_scale_args(f, signal_len);
  const std::int64_t n = static_cast<std::int64_t>(f.length());
  std::vector<SparseEntry> entries;
  if (n > signal_len) {
    // Filter no longer fits: keep the full cyclic (periodized) rows. They are
    // exactly orthonormal — stride-2 shift orthogonality survives wrapping for
    // even lengths — so gram_schmidt mode needs no further work, while
    // truncation would be rank-deficient and is rejected.
    if (mode == BoundaryMode::truncated)
      throw std::invalid_argument("scale_matrix_1d: filter length " + std::to_string(n) +
                                  " exceeds signal length " + std::to_string(signal_len) +
                                  " — truncated mode is undefined here, use gram_schmidt");
    emit_conv_block(f.dec_lo, signal_len, 0, /*cyclic=*/true, entries);
    emit_conv_block(f.dec_hi, signal_len, signal_len / 2, /*cyclic=*/true, entries);
    return SparseOperator::from_entries_summed(signal_len, signal_len, std::move(entries));
  }
  emit_conv_block(f.dec_lo, signal_len, 0, /*cyclic=*/false, entries);
  emit_conv_block(f.dec_hi, signal_len, signal_len / 2, /*cyclic=*/false, entries);
  SparseOperator truncated =
      SparseOperator::from_entries(signal_len, signal_len, std::move(entries));
  if (mode == BoundaryMode::truncated) return truncated;
  return gram_schmidt_orthogonalize(truncated, scale_boundary_rows(f.length(), signal_len));
}

SparseOperator analysis_matrix_1d(const WaveletFilter& f, std::int64_t signal_len, int levels,
                                  BoundaryMode mode) {
  check_scale_args(f, signal_len);
  check_levels(signal_len, levels, "signal");
  SparseOperator a = scale_matrix_1d(f, signal_len, mode);
  std::int64_t scale_len = signal_len / 2;
  for (int s = 1; s < levels; ++s, scale_len /= 2)
    a = embed_block(scale_matrix_1d(f, scale_len, mode), signal_len).matmul(a);
  return a;
}

SparseOperator synthesis_matrix_1d(const WaveletFilter& f, std::int64_t signal_len, int levels,
                                   BoundaryMode mode) {
  return analysis_matrix_1d(f, signal_len, levels, mode).transpose();
}

SparseOperator gram_schmidt_orthogonalize(const SparseOperator& op,
                                          const std::vector<std::int64_t>& boundary_rows) {
  const std::int64_t rows = op.rows();
  const std::int64_t cols = op.cols();
  std::vector<char> is_boundary(static_cast<std::size_t>(rows), 0);
  for (const std::int64_t r : boundary_rows) {
    if (r < 0 || r >= rows)
      throw std::invalid_argument("gram_schmidt_orthogonalize: boundary row " +
                                  std::to_string(r) + " out of range");
    if (is_boundary[static_cast<std::size_t>(r)])
      throw std::invalid_argument("gram_schmidt_orthogonalize: boundary row " +
                                  std::to_string(r) + " listed twice");
    is_boundary[static_cast<std::size_t>(r)] = 1;
  }
  if (boundary_rows.empty()) return op;

  // Interior rows stay sparse (they are untouched and their entries are reused
  // verbatim); boundary rows get dense working copies.
  std::vector<std::int64_t> interior;
  for (std::int64_t r = 0; r < rows; ++r)
    if (!is_boundary[static_cast<std::size_t>(r)]) interior.push_back(r);

  std::vector<std::vector<double>> dense;
  dense.reserve(boundary_rows.size());
  for (const std::int64_t r : boundary_rows) {
    std::vector<double> v(static_cast<std::size_t>(cols), 0.0);
    for (std::int64_t k = op.row_begin(r); k < op.row_end(r); ++k) {
      const SparseEntry& e = op.entries()[static_cast<std::size_t>(k)];
      v[static_cast<std::size_t>(e.col)] = e.value;
    }
    dense.push_back(std::move(v));
  }

  constexpr double kRankTol = 1e-9;
  for (std::size_t b = 0; b < boundary_rows.size(); ++b) {
    std::vector<double>& v = dense[b];
    for (int pass = 0; pass < 2; ++pass) {
      for (const std::int64_t r : interior) {
        double dot = 0.0, norm2 = 0.0;
        for (std::int64_t k = op.row_begin(r); k < op.row_end(r); ++k) {
          const SparseEntry& e = op.entries()[static_cast<std::size_t>(k)];
          dot += e.value * v[static_cast<std::size_t>(e.col)];
          norm2 += e.value * e.value;
        }
        if (norm2 == 0.0) continue;
        const double c = dot / norm2;
        for (std::int64_t k = op.row_begin(r); k < op.row_end(r); ++k) {
          const SparseEntry& e = op.entries()[static_cast<std::size_t>(k)];
          v[static_cast<std::size_t>(e.col)] -= c * e.value;
        }
      }
      for (std::size_t q = 0; q < b; ++q) {  // earlier boundary rows, already unit
        double dot = 0.0;
        for (std::int64_t c = 0; c < cols; ++c)
          dot += dense[q][static_cast<std::size_t>(c)] * v[static_cast<std::size_t>(c)];
        for (std::int64_t c = 0; c < cols; ++c)
          v[static_cast<std::size_t>(c)] -= dot * dense[q][static_cast<std::size_t>(c)];
      }
    }
    double norm2 = 0.0;
    for (const double x : v) norm2 += x * x;
    const double norm = std::sqrt(norm2);
    if (norm < kRankTol)
      throw invariant_error(
          "gram_schmidt_orthogonalize: rank deficiency — row " +
          std::to_string(boundary_rows[b]) +
          " lies in the span of the interior and earlier boundary rows");
    for (double& x : v) x /= norm;
  }

  std::vector<SparseEntry> entries;
  entries.reserve(op.entries().size());
  for (const std::int64_t r : interior)
    for (std::int64_t k = op.row_begin(r); k < op.row_end(r); ++k)
      entries.push_back(op.entries()[static_cast<std::size_t>(k)]);
  for (std::size_t b = 0; b < boundary_rows.size(); ++b)
    for (std::int64_t c = 0; c < cols; ++c) {
      const double x = dense[b][static_cast<std::size_t>(c)];
      if (x != 0.0) entries.push_back({boundary_rows[b], c, x});
    }
  return SparseOperator::from_entries(rows, cols, std::move(entries));
}

FilterQuad filter_quadruple_2d(const WaveletFilter& f) {
  const std::size_t n = f.length();
  FilterQuad q;
  q.n = n;
  q.a.resize(n * n);
  q.h.resize(n * n);
  q.v.resize(n * n);
  q.d.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      q.a[i * n + j] = f.dec_lo[i] * f.dec_lo[j];
      q.h[i * n + j] = f.dec_lo[i] * f.dec_hi[j];
      q.v[i * n + j] = f.dec_hi[i] * f.dec_lo[j];
      q.d[i * n + j] = f.dec_hi[i] * f.dec_hi[j];
    }
  }
  return q;
}

SparseOperator scale_matrix_2d(const WaveletFilter& f, std::int64_t height, std::int64_t width,
                               BoundaryMode mode) {
  const SparseOperator gh = scale_matrix_1d(f, height, mode);
  const SparseOperator gw = scale_matrix_1d(f, width, mode);
  const SparseOperator kron = SparseOperator::kron(gh, gw);
  // Reorder rows from interleaved [lo|hi]×[lo|hi] positions into stacked
  // [a; h; v; d] sub-blocks, each row-major at half resolution.
  const std::int64_t h2 = height / 2, w2 = width / 2;
  std::vector<SparseEntry> entries(kron.entries());
  for (SparseEntry& e : entries) {
    const std::int64_t rh = e.row / width;
    const std::int64_t rw = e.row % width;
    const std::int64_t block = 2 * (rh >= h2 ? 1 : 0) + (rw >= w2 ? 1 : 0);
    e.row = block * (h2 * w2) + (rh % h2) * w2 + (rw % w2);
  }
  return SparseOperator::from_entries(height * width, height * width, std::move(entries));
}

SparseOperator analysis_matrix_2d(const WaveletFilter& f, std::int64_t height, std::int64_t width,
                                  int levels, BoundaryMode mode) {
  check_levels(height, levels, "height");
  check_levels(width, levels, "width");
  SparseOperator a = scale_matrix_2d(f, height, width, mode);
  std::int64_t hs = height / 2, ws = width / 2;
  for (int s = 1; s < levels; ++s, hs /= 2, ws /= 2)
    a = embed_block(scale_matrix_2d(f, hs, ws, mode), height * width).matmul(a);
  return a;
}

SparseOperator synthesis_matrix_2d(const WaveletFilter& f, std::int64_t height,
                                   std::int64_t width, int levels, BoundaryMode mode) {
  return analysis_matrix_2d(f, height, width, levels, mode).transpose();
}

}  // namespace wavepack
