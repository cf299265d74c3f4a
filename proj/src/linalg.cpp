#include "gapvi/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "gapvi/kernels.hpp"

namespace gapvi {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Matrix Matrix::transposed() const {
  Matrix T(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) T(c, r) = (*this)(r, c);
  return T;
}

double dot(VecView a, VecView b) {
  assert(a.size() == b.size());
  return kernels::active().dot(a.data(), b.data(), a.size());
}

double norm(VecView a) { return std::sqrt(dot(a, a)); }

double norm_inf(VecView a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double squared_distance(VecView a, VecView b) {
  assert(a.size() == b.size());
  return kernels::active().squared_distance(a.data(), b.data(), a.size());
}

double distance(VecView a, VecView b) { return std::sqrt(squared_distance(a, b)); }

void axpy(double a, VecView x, std::span<double> y) {
  assert(x.size() == y.size());
  kernels::active().axpy(a, x.data(), y.data(), x.size());
}

Vector add(VecView a, VecView b) {
  Vector out(a.begin(), a.end());
  axpy(1.0, b, out);
  return out;
}

Vector sub(VecView a, VecView b) {
  Vector out(a.begin(), a.end());
  axpy(-1.0, b, out);
  return out;
}

Vector scaled(double s, VecView a) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

Vector add_scaled(VecView a, double s, VecView b) {
  Vector out(a.begin(), a.end());
  axpy(s, b, out);
  return out;
}

Vector matvec(const Matrix& A, VecView x) {
  if (A.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  Vector y(A.rows());
  kernels::active().gemv(A.data(), A.rows(), A.cols(), x.data(), y.data());
  return y;
}

Vector matvec_transposed(const Matrix& A, VecView x) {
  if (A.rows() != x.size()) throw std::invalid_argument("matvec_transposed: dimension mismatch");
  Vector y(A.cols());
  kernels::active().gemv_t(A.data(), A.rows(), A.cols(), x.data(), y.data());
  return y;
}

Matrix matmul(const Matrix& A, const Matrix& B) {
  if (A.cols() != B.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  Matrix C(A.rows(), B.cols());
  const auto& k = kernels::active();
  for (std::size_t r = 0; r < A.rows(); ++r) {
    auto out = C.row(r);
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const double a = A(r, j);
      if (a != 0.0) k.axpy(a, B.row(j).data(), out.data(), B.cols());
    }
  }
  return C;
}

Matrix combine(double s, const Matrix& A, double t, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw std::invalid_argument("combine: dimension mismatch");
  Matrix C(A.rows(), A.cols());
  const std::size_t n = A.rows() * A.cols();
  for (std::size_t i = 0; i < n; ++i) C.data()[i] = s * A.data()[i] + t * B.data()[i];
  return C;
}

Matrix add(const Matrix& A, const Matrix& B) { return combine(1.0, A, 1.0, B); }

Matrix scaled(double s, const Matrix& A) {
  Matrix C = A;
  const std::size_t n = A.rows() * A.cols();
  for (std::size_t i = 0; i < n; ++i) C.data()[i] *= s;
  return C;
}

double frobenius_norm(const Matrix& A) {
  return norm(VecView(A.data(), A.rows() * A.cols()));
}

double spectral_norm(const Matrix& A, int max_iters, double rel_tol) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  // Start from a fixed non-symmetric vector so no singular direction is
  // orthogonal to it by construction.
  Vector v(A.cols());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i % 7);
  double nv = norm(v);
  for (double& e : v) e /= nv;
  double sigma = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const Vector Av = matvec(A, v);
    Vector w = matvec_transposed(A, Av);
    const double nw = norm(w);
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(nw);
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
    if (std::abs(next - sigma) <= rel_tol * next) return next;
    sigma = next;
  }
  return sigma;
}

bool all_finite(VecView a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace gapvi
