#include "fpencil/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fpencil/errors.hpp"

namespace fpencil {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::DimensionMismatch,
                "entry count " + std::to_string(data_.size()) + " != " +
                    std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  check_finite("matrix entries");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) {
    throw Error(ErrorKind::DimensionMismatch, "matrix product shapes");
  }
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      const double* brow = &rhs.data_[k * rhs.cols_];
      double* orow = &out.data_[i * rhs.cols_];
      for (std::size_t j = 0; j < rhs.cols_; ++j) orow[j] += a * brow[j];
    }
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw Error(ErrorKind::DimensionMismatch, "matrix sum shapes");
  }
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw Error(ErrorKind::DimensionMismatch, "matrix difference shapes");
  }
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

Matrix& Matrix::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

Matrix Matrix::gram() const {
  Matrix out(rows_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i; j < rows_; ++j) {
      double s = 0.0;
      const double* a = &data_[i * cols_];
      const double* b = &data_[j * cols_];
      for (std::size_t k = 0; k < cols_; ++k) s += a[k] * b[k];
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double s = 0.0;
  for (double v : data_) s = std::max(s, std::abs(v));
  return s;
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

void Matrix::check_finite(const std::string& what) const {
  if (!all_finite()) {
    throw Error(ErrorKind::NotFinite, what + " contain NaN or Inf");
  }
}

Matrix multiply_bt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "A * B^T shapes");
  }
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double s = 0.0;
      const double* ra = &a.data()[i * a.cols()];
      const double* rb = &b.data()[j * b.cols()];
      for (std::size_t k = 0; k < a.cols(); ++k) s += ra[k] * rb[k];
      out(i, j) = s;
    }
  }
  return out;
}

Matrix multiply_at(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "A^T * B shapes");
  }
  Matrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* ra = &a.data()[k * a.cols()];
    const double* rb = &b.data()[k * b.cols()];
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double v = ra[i];
      if (v == 0.0) continue;
      double* orow = &out.data()[i * b.cols()];
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += v * rb[j];
    }
  }
  return out;
}

Matrix read_csv(std::istream& in, bool skip_header) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && skip_header) {
      first = false;
      continue;
    }
    first = false;
    // tolerate trailing \r from CRLF files
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t row_cols = 0;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) {
          throw Error(ErrorKind::IoError, "bad CSV cell '" + cell + "'");
        }
        values.push_back(v);
      } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::IoError, "bad CSV cell '" + cell + "'");
      } catch (const std::out_of_range&) {
        throw Error(ErrorKind::IoError, "CSV cell out of range '" + cell + "'");
      }
      ++row_cols;
    }
    if (cols == 0) {
      cols = row_cols;
    } else if (row_cols != cols) {
      throw Error(ErrorKind::IoError,
                  "ragged CSV: row " + std::to_string(rows + 1) + " has " +
                      std::to_string(row_cols) + " cells, expected " + std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::IoError, "empty CSV matrix");
  }
  return Matrix(rows, cols, std::move(values));
}

Matrix read_csv_file(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  return read_csv(in, skip_header);
}

void write_csv(const Matrix& m, std::ostream& out) {
  char buf[40];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf;
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
}

void write_csv_file(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  write_csv(m, out);
}

}  // namespace fpencil
