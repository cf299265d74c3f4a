#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gapvi {

using Vector = std::vector<double>;
using VecView = std::span<const double>;

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  VecView row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }

  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(VecView a, VecView b);
double norm(VecView a);
double norm_inf(VecView a);
double squared_distance(VecView a, VecView b);
double distance(VecView a, VecView b);

// y += a * x
void axpy(double a, VecView x, std::span<double> y);

Vector add(VecView a, VecView b);
Vector sub(VecView a, VecView b);
Vector scaled(double s, VecView a);
// a + s * b
Vector add_scaled(VecView a, double s, VecView b);

Vector matvec(const Matrix& A, VecView x);
Vector matvec_transposed(const Matrix& A, VecView x);
Matrix matmul(const Matrix& A, const Matrix& B);
Matrix add(const Matrix& A, const Matrix& B);
Matrix scaled(double s, const Matrix& A);
// s*A + t*B
Matrix combine(double s, const Matrix& A, double t, const Matrix& B);

double frobenius_norm(const Matrix& A);

// Largest singular value via power iteration on A^T A, deterministic start.
double spectral_norm(const Matrix& A, int max_iters = 500, double rel_tol = 1e-12);

bool all_finite(VecView a);

}  // namespace gapvi
