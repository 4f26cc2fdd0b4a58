#include "qzvalve/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qzvalve/error.hpp"

namespace qzv {

SparseOperator::SparseOperator(std::size_t dim, std::vector<Triplet> entries,
                               bool hermitian)
    : dim_(dim), hermitian_(hermitian) {
  if (dim > std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorCode::SectorTooLarge, "operator dimension exceeds 32-bit column index");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(dim + 1, 0);
  cols_.reserve(entries.size());
  values_.reserve(entries.size());

  std::size_t i = 0;
  for (std::size_t row = 0; row < dim; ++row) {
    while (i < entries.size() && entries[i].row == row) {
      const std::size_t col = entries[i].col;
      if (col >= dim) fail(ErrorCode::InvalidArgument, "triplet column out of range");
      Complex sum = 0.0;
      while (i < entries.size() && entries[i].row == row && entries[i].col == col) {
        sum += entries[i].value;
        ++i;
      }
      if (sum != Complex{0.0, 0.0}) {
        cols_.push_back(static_cast<std::uint32_t>(col));
        values_.push_back(sum);
      }
    }
    row_ptr_[row + 1] = cols_.size();
  }
  if (i != entries.size()) fail(ErrorCode::InvalidArgument, "triplet row out of range");
}

SparseOperator SparseOperator::diagonal(std::span<const Complex> values, bool hermitian) {
  std::vector<Triplet> t;
  t.reserve(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) t.push_back({j, j, values[j]});
  return SparseOperator(values.size(), std::move(t), hermitian);
}

void SparseOperator::apply(std::span<const Complex> x, std::span<Complex> y) const {
  if (x.size() != dim_ || y.size() != dim_) {
    fail(ErrorCode::InvalidArgument, "matvec dimension mismatch");
  }
  const std::size_t* rp = row_ptr_.data();
  const std::uint32_t* ci = cols_.data();
  const Complex* v = values_.data();
  for (std::size_t r = 0; r < dim_; ++r) {
    Complex acc = 0.0;
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) acc += v[k] * x[ci[k]];
    y[r] = acc;
  }
}

std::vector<Complex> SparseOperator::apply(std::span<const Complex> x) const {
  std::vector<Complex> y(dim_);
  apply(x, y);
  return y;
}

Complex SparseOperator::expectation(std::span<const Complex> x) const {
  if (x.size() != dim_) fail(ErrorCode::InvalidArgument, "expectation dimension mismatch");
  Complex acc = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    Complex row = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      row += values_[k] * x[cols_[k]];
    }
    acc += std::conj(x[r]) * row;
  }
  return acc;
}

Complex SparseOperator::at(std::size_t row, std::size_t col) const {
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(col));
  if (it == last || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

bool SparseOperator::is_diagonal() const noexcept {
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (cols_[k] != r) return false;
    }
  }
  return true;
}

std::vector<Complex> SparseOperator::diagonal_values() const {
  std::vector<Complex> d(dim_, 0.0);
  for (std::size_t r = 0; r < dim_; ++r) d[r] = at(r, r);
  return d;
}

bool SparseOperator::is_real() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](const Complex& z) { return z.imag() == 0.0; });
}

double SparseOperator::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      worst = std::max(worst, std::abs(values_[k] - std::conj(at(cols_[k], r))));
    }
  }
  return worst;
}

std::vector<Complex> SparseOperator::to_dense() const {
  std::vector<Complex> d(dim_ * dim_, 0.0);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      d[r * dim_ + cols_[k]] = values_[k];
    }
  }
  return d;
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim_ != b.dim_) fail(ErrorCode::InvalidArgument, "operator sum dimension mismatch");
  std::vector<Triplet> t;
  t.reserve(a.nnz() + b.nnz());
  for (const SparseOperator* op : {&a, &b}) {
    for (std::size_t r = 0; r < op->dim_; ++r) {
      for (std::size_t k = op->row_ptr_[r]; k < op->row_ptr_[r + 1]; ++k) {
        t.push_back({r, op->cols_[k], op->values_[k]});
      }
    }
  }
  return SparseOperator(a.dim_, std::move(t), a.hermitian_ && b.hermitian_);
}

}  // namespace qzv
