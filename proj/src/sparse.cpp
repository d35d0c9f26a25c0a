#include "wavepack/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "wavepack/util.hpp"

namespace wavepack {

namespace {

bool entry_order(const SparseEntry& a, const SparseEntry& b) {
  if (a.row != b.row) return a.row < b.row;
  return a.col < b.col;
}

}  // namespace

void SparseOperator::rebuild_row_ptr() {
  row_ptr_.assign(static_cast<std::size_t>(rows_) + 1, 0);
  for (const SparseEntry& e : entries_) ++row_ptr_[static_cast<std::size_t>(e.row) + 1];
  for (std::size_t r = 1; r < row_ptr_.size(); ++r) row_ptr_[r] += row_ptr_[r - 1];
}

SparseOperator SparseOperator::build(std::int64_t rows, std::int64_t cols,
                                     std::vector<SparseEntry> entries, bool sum_duplicates) {
  if (rows <= 0 || cols <= 0)
    throw std::invalid_argument("SparseOperator: dimensions must be positive");
  for (const SparseEntry& e : entries) {
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
      throw std::invalid_argument("SparseOperator: coordinate (" + std::to_string(e.row) +
                                  ", " + std::to_string(e.col) + ") out of range for " +
                                  std::to_string(rows) + "x" + std::to_string(cols));
  }
  std::sort(entries.begin(), entries.end(), entry_order);
  if (!entries.empty()) {
    if (sum_duplicates) {
      std::size_t out = 0;
      for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].row == entries[out].row && entries[i].col == entries[out].col) {
          entries[out].value += entries[i].value;
        } else {
          entries[++out] = entries[i];
        }
      }
      entries.resize(out + 1);
    } else {
      for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col)
          throw std::invalid_argument("SparseOperator: duplicate coordinate (" +
                                      std::to_string(entries[i].row) + ", " +
                                      std::to_string(entries[i].col) + ")");
      }
    }
  }
  SparseOperator op;
  op.rows_ = rows;
  op.cols_ = cols;
  op.entries_ = std::move(entries);
  op.rebuild_row_ptr();
  return op;
}

SparseOperator SparseOperator::from_entries(std::int64_t rows, std::int64_t cols,
                                            std::vector<SparseEntry> entries) {
  return build(rows, cols, std::move(entries), /*sum_duplicates=*/false);
}

SparseOperator SparseOperator::from_entries_summed(std::int64_t rows, std::int64_t cols,
                                                   std::vector<SparseEntry> entries) {
  return build(rows, cols, std::move(entries), /*sum_duplicates=*/true);
}

SparseOperator SparseOperator::identity(std::int64_t n) {
  std::vector<SparseEntry> entries;
  entries.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
  return from_entries(n, n, std::move(entries));
}

void SparseOperator::apply(const double* x, double* y) const {
  for (std::int64_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    const std::int64_t last = row_end(r);
    for (std::int64_t k = row_begin(r); k < last; ++k) {
      const SparseEntry& e = entries_[static_cast<std::size_t>(k)];
      acc += e.value * x[e.col];
    }
    y[r] = acc;
  }
}

std::vector<double> SparseOperator::apply(const std::vector<double>& x) const {
  if (static_cast<std::int64_t>(x.size()) != cols_)
    throw std::invalid_argument("SparseOperator::apply: vector length " +
                                std::to_string(x.size()) + " != cols " + std::to_string(cols_));
  std::vector<double> y(static_cast<std::size_t>(rows_));
  apply(x.data(), y.data());
  return y;
}

SparseOperator SparseOperator::transpose() const {
  std::vector<SparseEntry> entries;
  entries.reserve(entries_.size());
  for (const SparseEntry& e : entries_) entries.push_back({e.col, e.row, e.value});
  return from_entries(cols_, rows_, std::move(entries));
}

SparseOperator SparseOperator::matmul(const SparseOperator& rhs) const {
  if (cols_ != rhs.rows_)
    throw std::invalid_argument("SparseOperator::matmul: inner dimensions " +
                                std::to_string(cols_) + " and " + std::to_string(rhs.rows_) +
                                " differ");
  std::vector<double> acc(static_cast<std::size_t>(rhs.cols_), 0.0);
  std::vector<char> seen(static_cast<std::size_t>(rhs.cols_), 0);
  std::vector<std::int64_t> touched;
  std::vector<SparseEntry> out;
  for (std::int64_t r = 0; r < rows_; ++r) {
    touched.clear();
    const std::int64_t last = row_end(r);
    for (std::int64_t k = row_begin(r); k < last; ++k) {
      const SparseEntry& e = entries_[static_cast<std::size_t>(k)];
      const std::int64_t rlast = rhs.row_end(e.col);
      for (std::int64_t k2 = rhs.row_begin(e.col); k2 < rlast; ++k2) {
        const SparseEntry& e2 = rhs.entries_[static_cast<std::size_t>(k2)];
        const std::size_t c = static_cast<std::size_t>(e2.col);
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(e2.col);
        }
        acc[c] += e.value * e2.value;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (const std::int64_t c : touched) {
      const double v = acc[static_cast<std::size_t>(c)];
      if (v != 0.0) out.push_back({r, c, v});
      acc[static_cast<std::size_t>(c)] = 0.0;
      seen[static_cast<std::size_t>(c)] = 0;
    }
  }
  return from_entries(rows_, rhs.cols_, std::move(out));
}

SparseOperator SparseOperator::kron(const SparseOperator& a, const SparseOperator& b) {
  std::vector<SparseEntry> entries;
  entries.reserve(a.entries_.size() * b.entries_.size());
  for (const SparseEntry& ea : a.entries_) {
    for (const SparseEntry& eb : b.entries_) {
      entries.push_back({ea.row * b.rows_ + eb.row, ea.col * b.cols_ + eb.col,
                         ea.value * eb.value});
    }
  }
  return from_entries(a.rows_ * b.rows_, a.cols_ * b.cols_, std::move(entries));
}

void SparseOperator::write_csv(std::ostream& os) const {
  os << "row,col,value\n";
  for (const SparseEntry& e : entries_)
    os << e.row << ',' << e.col << ',' << format_g17(e.value) << '\n';
}

double max_deviation_from_identity(const SparseOperator& m) {
  double worst = 0.0;
  std::vector<char> has_diag(static_cast<std::size_t>(std::min(m.rows(), m.cols())), 0);
  for (const SparseEntry& e : m.entries()) {
    if (e.row == e.col) {
      has_diag[static_cast<std::size_t>(e.row)] = 1;
      worst = std::max(worst, std::abs(e.value - 1.0));
    } else {
      worst = std::max(worst, std::abs(e.value));
    }
  }
  for (const char seen : has_diag)
    if (!seen) worst = std::max(worst, 1.0);
  if (m.rows() != m.cols()) worst = std::max(worst, 1.0);
  return worst;
}

}  // namespace wavepack
