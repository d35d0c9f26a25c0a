#pragma once

#include <cstdint>
#include <vector>

#include "wavepack/filterbank.hpp"
#include "wavepack/sparse.hpp"

namespace wavepack {

// How wrapped (edge-crossing) convolution rows are treated.
//   truncated    — wrapped entries are simply dropped; cheap, not invertible
//                  for filters longer than 2 taps.
//   gram_schmidt — wrapped entries are dropped and the affected rows are
//                  re-orthogonalized into boundary filters; the operator stays
//                  exactly orthogonal, hence invertible by its transpose.
enum class BoundaryMode { truncated, gram_schmidt };

// Cyclic stride-2 convolution matrix, (signal_len/2) × signal_len. Row i
// carries the filter, reversed, over the centered window
//   (2i − (N/2 − 1)) … (2i + N/2)   (mod signal_len),
// so for haar (N = 2) row i covers columns 2i, 2i+1 and edge effects appear
// symmetrically at both ends for longer filters. The centered phase is what
// keeps truncated boundary rows linearly independent; a trailing window
// (2i…2i+N−1) makes the last truncated row pair of an orthogonal bank exactly
// parallel and Gram-Schmidt impossible.
// Preconditions: signal_len even and ≥ filter length.
SparseOperator conv_matrix_1d(const std::vector<double>& filter_vec, std::int64_t signal_len);

// Rows of one (signal_len/2)-row convolution block whose window crosses the
// signal edge, in boundary-processing order: left-edge rows ascending, then
// right-edge rows descending. Empty for haar and for filter_len > signal_len
// (the periodized case, which needs no boundary treatment).
std::vector<std::int64_t> wrapped_rows_1d(std::size_t filter_len, std::int64_t signal_len);

// Boundary rows of the stacked [H_L; H_H] single-scale matrix: the low-pass
// block's wrapped rows followed by the high-pass block's (offset by
// signal_len/2), each in wrapped_rows_1d order.
std::vector<std::int64_t> scale_boundary_rows(std::size_t filter_len, std::int64_t signal_len);

// Single-scale analysis block [H_L; H_H], signal_len × signal_len.
// If the filter is longer than the signal the full cyclic rows are kept in
// gram_schmidt mode — periodized stride-2 rows of an orthogonal bank are
// exactly orthonormal, so nothing needs re-orthogonalizing — while truncated
// mode rejects that case (dropping wraps there is rank-deficient).
SparseOperator scale_matrix_1d(const WaveletFilter& f, std::int64_t signal_len,
                               BoundaryMode mode);

// Multi-level analysis operator: the product M_levels ··· M_1 of per-scale
// block matrices M_s = blockdiag([H_L; H_H]_{L/2^(s−1)}, I). In gram_schmidt
// mode A·Aᵀ = I within 1e-8 (observed ~1e-15).
// Preconditions: signal_len divisible by 2^levels, levels ≥ 1.
SparseOperator analysis_matrix_1d(const WaveletFilter& f, std::int64_t signal_len, int levels,
                                  BoundaryMode mode);

// The matching synthesis operator. For an orthogonal bank the per-scale
// synthesis block is the transposed convolution carrying rec_lo/rec_hi forward
// down its columns, which equals the transpose of the analysis block; since
// transposition also reverses the per-scale product order, S is the transpose
// of the analysis operator in both modes. In truncated mode each block is the
// truncation of the exact cyclic inverse, so S·A ≠ I with the deviation
// concentrated in boundary rows.
SparseOperator synthesis_matrix_1d(const WaveletFilter& f, std::int64_t signal_len, int levels,
                                   BoundaryMode mode);

// Modified Gram-Schmidt re-orthogonalization of the listed rows, processed in
// the order given: each is projected against every untouched (interior) row
// and every previously processed boundary row, twice for numerical
// reinforcement, then renormalized. Interior rows are returned bit-identical.
// Precondition: interior rows mutually orthonormal. Throws invariant_error
// naming the first row whose residual norm falls below 1e-9 (rank deficiency,
// e.g. a duplicated row).
SparseOperator gram_schmidt_orthogonalize(const SparseOperator& op,
                                          const std::vector<std::int64_t>& boundary_rows);

// The 2D kernel quadruple as outer products of the analysis pair:
//   f_a = f_L f_Lᵀ, f_h = f_L f_Hᵀ, f_v = f_H f_Lᵀ, f_d = f_H f_Hᵀ,
// each N×N row-major. The first factor acts along the height (row) axis, so
// f_h responds to variation along the width axis and f_v to variation along
// the height axis.
struct FilterQuad {
  std::size_t n = 0;
  std::vector<double> a, h, v, d;
};
FilterQuad filter_quadruple_2d(const WaveletFilter& f);

// Single-scale 2D block: the Kronecker product (G_height ⊗ G_width) of 1D
// scale matrices acting on row-major vectorized images, with rows permuted so
// the output is stacked [a; h; v; d], each sub-block row-major at half
// resolution.
SparseOperator scale_matrix_2d(const WaveletFilter& f, std::int64_t height, std::int64_t width,
                               BoundaryMode mode);

// Multi-level 2D operator recursing on the a-block only. Built from Kronecker
// products of 1D boundary operators (separability), which provably equals
// orthogonalizing the 2D matrix directly when boundary rows are processed in
// the Kronecker-induced order.
SparseOperator analysis_matrix_2d(const WaveletFilter& f, std::int64_t height, std::int64_t width,
                                  int levels, BoundaryMode mode);
SparseOperator synthesis_matrix_2d(const WaveletFilter& f, std::int64_t height,
                                   std::int64_t width, int levels, BoundaryMode mode);

}  // namespace wavepack
