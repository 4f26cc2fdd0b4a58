#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qzv {

using Complex = std::complex<double>;

struct Triplet {
  std::size_t row;
  std::size_t col;
  Complex value;
};

// Row-compressed complex matrix in the sector basis. Column indices are sorted
// within each row, duplicates are summed and exact zeros dropped.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(std::size_t dim, std::vector<Triplet> entries, bool hermitian);

  static SparseOperator diagonal(std::span<const Complex> values, bool hermitian);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nnz() const noexcept { return cols_.size(); }
  bool hermitian() const noexcept { return hermitian_; }

  std::span<const std::size_t> row_offsets() const noexcept { return row_ptr_; }
  std::span<const std::uint32_t> columns() const noexcept { return cols_; }
  std::span<const Complex> values() const noexcept { return values_; }

  // y = A x
  void apply(std::span<const Complex> x, std::span<Complex> y) const;
  std::vector<Complex> apply(std::span<const Complex> x) const;

  // <x|A|x> for a normalized x.
  Complex expectation(std::span<const Complex> x) const;

  Complex at(std::size_t row, std::size_t col) const;
  bool is_diagonal() const noexcept;
  std::vector<Complex> diagonal_values() const;
  bool is_real() const noexcept;

  // max |A_ij - conj(A_ji)| over stored entries.
  double hermiticity_defect() const;

  // Row-major dense copy; intended for small dims only.
  std::vector<Complex> to_dense() const;

  friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<Complex> values_;
  bool hermitian_ = true;
};

}  // namespace qzv
