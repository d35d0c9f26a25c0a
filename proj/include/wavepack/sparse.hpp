#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace wavepack {

struct SparseEntry {
  std::int64_t row = 0;
  std::int64_t col = 0;
  double value = 0.0;
};

// Immutable sparse matrix in coordinate form. Entries are kept sorted
// row-major with unique (row, col) pairs; a CSR-style row index is maintained
// alongside for matrix-vector and matrix-matrix products. Analysis operators A
// and synthesis operators S are values of this type.
class SparseOperator {
 public:
  SparseOperator() = default;

  // Validates ranges, sorts row-major. Duplicate coordinates raise
  // std::invalid_argument.
  static SparseOperator from_entries(std::int64_t rows, std::int64_t cols,
                                     std::vector<SparseEntry> entries);

  // Same, but duplicate coordinates are accumulated by addition — what a
  // cyclically wrapped convolution window needs when the filter overlaps
  // itself on a short signal.
  static SparseOperator from_entries_summed(std::int64_t rows, std::int64_t cols,
                                            std::vector<SparseEntry> entries);

  static SparseOperator identity(std::int64_t n);

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(entries_.size()); }
  const std::vector<SparseEntry>& entries() const { return entries_; }

  // Half-open entry index range [first, last) of one row.
  std::int64_t row_begin(std::int64_t r) const { return row_ptr_[static_cast<std::size_t>(r)]; }
  std::int64_t row_end(std::int64_t r) const { return row_ptr_[static_cast<std::size_t>(r) + 1]; }

  // y = A·x. The pointer overload writes into caller storage (y must hold
  // rows() values and must not alias x).
  std::vector<double> apply(const std::vector<double>& x) const;
  void apply(const double* x, double* y) const;

  SparseOperator transpose() const;

  // this · rhs, Gustavson row-by-row with a dense accumulator.
  SparseOperator matmul(const SparseOperator& rhs) const;

  // Kronecker product: entry ((ra·b.rows + rb), (ca·b.cols + cb), va·vb).
  // Acts on row-major vectorized 2D arrays as "a along axis 0, b along axis 1".
  static SparseOperator kron(const SparseOperator& a, const SparseOperator& b);

  // Coordinate-triple CSV: header "row,col,value", one entry per line,
  // 17 significant digits so values re-parse exactly.
  void write_csv(std::ostream& os) const;

 private:
  std::int64_t rows_ = 0;
  std::int64_t cols_ = 0;
  std::vector<SparseEntry> entries_;
  std::vector<std::int64_t> row_ptr_;

  void rebuild_row_ptr();
  static SparseOperator build(std::int64_t rows, std::int64_t cols,
                              std::vector<SparseEntry> entries, bool sum_duplicates);
};

// max_{i,j} |M[i,j] − I[i,j]| including positions M leaves implicit (a missing
// diagonal counts as deviation 1). The operator-correctness gauge for S·A = I
// and A·Aᵀ = I checks.
double max_deviation_from_identity(const SparseOperator& m);

}  // namespace wavepack
