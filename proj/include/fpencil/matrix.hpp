#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace fpencil {

/// Dense real matrix, row-major. All entries are required to be finite;
/// constructors and the CSV reader reject NaN/Inf.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  Matrix transposed() const;
  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix& operator*=(double c);

  /// A * A^T without forming the transpose.
  Matrix gram() const;

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  void check_finite(const std::string& what) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// A * B^T.
Matrix multiply_bt(const Matrix& a, const Matrix& b);
/// A^T * B.
Matrix multiply_at(const Matrix& a, const Matrix& b);

/// CSV codec: one row per line, comma-separated decimals. The writer emits
/// 17 significant digits so a read-back round-trips bit-exactly.
Matrix read_csv(std::istream& in, bool skip_header = false);
Matrix read_csv_file(const std::string& path, bool skip_header = false);
void write_csv(const Matrix& m, std::ostream& out);
void write_csv_file(const Matrix& m, const std::string& path);

}  // namespace fpencil
