#include "vilab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vilab {

Mat Mat::identity(int n) {
  Mat I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Mat Mat::transposed() const {
  Mat T(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) T(j, i) = (*this)(i, j);
  return T;
}

Mat operator+(const Mat& A, const Mat& B) {
  Mat C(A.rows, A.cols);
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = A.a[i] + B.a[i];
  return C;
}

Mat operator-(const Mat& A, const Mat& B) {
  Mat C(A.rows, A.cols);
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = A.a[i] - B.a[i];
  return C;
}

Mat operator*(double s, const Mat& A) {
  Mat C(A.rows, A.cols);
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = s * A.a[i];
  return C;
}

namespace linalg {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2_sq(const Vec& a) { return dot(a, a); }
double norm2(const Vec& a) { return std::sqrt(norm2_sq(a)); }

Vec add(const Vec& a, const Vec& b) {
  Vec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

Vec scale(double s, const Vec& a) {
  Vec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

void axpy(double s, const Vec& x, Vec& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

double frob_norm(const Mat& A) {
  double s = 0.0;
  for (double v : A.a) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Mat& A) {
  double s = 0.0;
  for (double v : A.a) s = std::max(s, std::fabs(v));
  return s;
}

namespace ref {

void gemv(const Mat& A, const Vec& x, Vec& y) {
  y.assign(A.rows, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    const double* row = &A.a[static_cast<size_t>(i) * A.cols];
    double s = 0.0;
    for (int j = 0; j < A.cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void gemv_t(const Mat& A, const Vec& x, Vec& y) {
  y.assign(A.cols, 0.0);
  for (int j = 0; j < A.cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < A.rows; ++i) s += A(i, j) * x[i];
    y[j] = s;
  }
}

void gemm(const Mat& A, const Mat& B, Mat& C) {
  C = Mat(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < B.cols; ++j) {
      double s = 0.0;
      for (int k = 0; k < A.cols; ++k) s += A(i, k) * B(k, j);
      C(i, j) = s;
    }
}

void syrk(const Mat& B, Mat& C) {
  C = Mat(B.rows, B.rows);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j <= i; ++j) {
      const double* ri = &B.a[static_cast<size_t>(i) * B.cols];
      const double* rj = &B.a[static_cast<size_t>(j) * B.cols];
      double s = 0.0;
      for (int k = 0; k < B.cols; ++k) s += ri[k] * rj[k];
      C(i, j) = s;
      C(j, i) = s;
    }
}

namespace {

// One cyclic Jacobi sweep over the strict upper triangle of S, updating the
// accumulated eigenvector matrix V. `parallel` toggles the OpenMP row/column
// updates; the arithmetic per element is identical either way.
double jacobi_sweep(Mat& S, Mat& V, bool parallel) {
  const int n = S.rows;
  double off = 0.0;
  for (int p = 0; p < n - 1; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double spq = S(p, q);
      if (spq == 0.0) continue;
      off = std::max(off, std::fabs(spq));
      const double tau = (S(q, q) - S(p, p)) / (2.0 * spq);
      const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      const double spp = S(p, p), sqq = S(q, q);
      S(p, p) = spp - t * spq;
      S(q, q) = sqq + t * spq;
      S(p, q) = 0.0;
      S(q, p) = 0.0;
#pragma omp parallel for if (parallel && n >= 256) schedule(static)
      for (int k = 0; k < n; ++k) {
        if (k != p && k != q) {
          const double skp = S(k, p), skq = S(k, q);
          S(k, p) = c * skp - s * skq;
          S(p, k) = S(k, p);
          S(k, q) = s * skp + c * skq;
          S(q, k) = S(k, q);
        }
        const double vkp = V(k, p), vkq = V(k, q);
        V(k, p) = c * vkp - s * vkq;
        V(k, q) = s * vkp + c * vkq;
      }
    }
  }
  return off;
}

int jacobi_eigh_impl(const Mat& Sin, Vec& eigvals, Mat& eigvecs, double tol,
                     int max_sweeps, bool parallel) {
  if (!Sin.square()) throw std::invalid_argument("jacobi_eigh: matrix not square");
  const int n = Sin.rows;
  Mat S = Sin;
  Mat V = Mat::identity(n);
  double scale = max_abs(Sin);
  if (scale == 0.0) scale = 1.0;
  int sweeps = 0;
  while (sweeps < max_sweeps) {
    const double off = jacobi_sweep(S, V, parallel);
    ++sweeps;
    if (off <= tol * scale) break;
  }
  // Sort eigenpairs ascending.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return S(i, i) < S(j, j); });
  eigvals.assign(n, 0.0);
  eigvecs = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    eigvals[j] = S(order[j], order[j]);
    for (int i = 0; i < n; ++i) eigvecs(i, j) = V(i, order[j]);
  }
  return sweeps;
}

}  // namespace

int jacobi_eigh(const Mat& S, Vec& eigvals, Mat& eigvecs, double tol,
                int max_sweeps) {
  return jacobi_eigh_impl(S, eigvals, eigvecs, tol, max_sweeps, false);
}

}  // namespace ref

void gemv(const Mat& A, const Vec& x, Vec& y) {
  y.assign(A.rows, 0.0);
#pragma omp parallel for if (A.rows >= 64) schedule(static)
  for (int i = 0; i < A.rows; ++i) {
    const double* row = &A.a[static_cast<size_t>(i) * A.cols];
    double s = 0.0;
    for (int j = 0; j < A.cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void gemv_t(const Mat& A, const Vec& x, Vec& y) {
  y.assign(A.cols, 0.0);
#pragma omp parallel for if (A.cols >= 64) schedule(static)
  for (int j = 0; j < A.cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < A.rows; ++i) s += A(i, j) * x[i];
    y[j] = s;
  }
}

void gemm(const Mat& A, const Mat& B, Mat& C) {
  if (A.cols != B.rows) throw std::invalid_argument("gemm: shape mismatch");
  C = Mat(A.rows, B.cols);
#pragma omp parallel for if (A.rows >= 32) schedule(static)
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < B.cols; ++j) {
      double s = 0.0;
      for (int k = 0; k < A.cols; ++k) s += A(i, k) * B(k, j);
      C(i, j) = s;
    }
}

void syrk(const Mat& B, Mat& C) {
  C = Mat(B.rows, B.rows);
#pragma omp parallel for if (B.rows >= 32) schedule(dynamic, 8)
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j <= i; ++j) {
      const double* ri = &B.a[static_cast<size_t>(i) * B.cols];
      const double* rj = &B.a[static_cast<size_t>(j) * B.cols];
      double s = 0.0;
      for (int k = 0; k < B.cols; ++k) s += ri[k] * rj[k];
      C(i, j) = s;
      C(j, i) = s;
    }
}

int jacobi_eigh(const Mat& S, Vec& eigvals, Mat& eigvecs, double tol,
                int max_sweeps) {
  return ref::jacobi_eigh_impl(S, eigvals, eigvecs, tol, max_sweeps, true);
}

Mat psd_project(const Mat& S) {
  Vec vals;
  Mat V;
  jacobi_eigh(S, vals, V);
  const int n = S.rows;
  Mat P(n, n);
  // P = V diag(max(vals,0)) V^T, skipping the clipped part entirely.
  for (int k = 0; k < n; ++k) {
    if (vals[k] <= 0.0) continue;
    const double lk = vals[k];
#pragma omp parallel for if (n >= 256) schedule(static)
    for (int i = 0; i < n; ++i) {
      const double vik = V(i, k) * lk;
      for (int j = 0; j < n; ++j) P(i, j) += vik * V(j, k);
    }
  }
  // Symmetrize against roundoff.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const double v = 0.5 * (P(i, j) + P(j, i));
      P(i, j) = v;
      P(j, i) = v;
    }
  return P;
}

double min_eig_sym(const Mat& S) {
  Vec vals;
  Mat V;
  jacobi_eigh(S, vals, V);
  return vals.empty() ? 0.0 : vals.front();
}

void cholesky(Mat& A, double shift) {
  if (!A.square()) throw std::invalid_argument("cholesky: matrix not square");
  const int n = A.rows;
  if (shift != 0.0)
    for (int i = 0; i < n; ++i) A(i, i) += shift;
  for (int i = 0; i < n; ++i) {
    double* ri = &A.a[static_cast<size_t>(i) * n];
    for (int j = 0; j <= i; ++j) {
      const double* rj = &A.a[static_cast<size_t>(j) * n];
      double s = ri[j];
      for (int k = 0; k < j; ++k) s -= ri[k] * rj[k];
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
        ri[j] = std::sqrt(s);
      } else {
        ri[j] = s / rj[j];
      }
    }
    for (int j = i + 1; j < n; ++j) ri[j] = 0.0;
  }
}

void chol_solve(const Mat& L, Vec& b) {
  const int n = L.rows;
  // Forward: L y = b (row-gather, contiguous).
  for (int i = 0; i < n; ++i) {
    const double* ri = &L.a[static_cast<size_t>(i) * n];
    double s = b[i];
    for (int j = 0; j < i; ++j) s -= ri[j] * b[j];
    b[i] = s / ri[i];
  }
  // Backward: L^T x = y (row-scatter keeps accesses contiguous).
  for (int j = n - 1; j >= 0; --j) {
    const double* rj = &L.a[static_cast<size_t>(j) * n];
    b[j] /= rj[j];
    const double xj = b[j];
    for (int i = 0; i < j; ++i) b[i] -= rj[i] * xj;
  }
}

bool lu_solve(Mat A, Vec b, Vec& x) {
  if (!A.square() || static_cast<int>(b.size()) != A.rows)
    throw std::invalid_argument("lu_solve: shape mismatch");
  const int n = A.rows;
  double scale = max_abs(A);
  if (scale == 0.0) return false;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::fabs(A(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::fabs(A(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < 1e-13 * scale) return false;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(b[k], b[piv]);
    }
    const double akk = A(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double f = A(i, k) / akk;
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  x.assign(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return true;
}

double spectral_norm(const Mat& A, double rel_tol, int max_iter) {
  if (A.rows == 0 || A.cols == 0) return 0.0;
  Vec v(A.cols);
  for (int i = 0; i < A.cols; ++i) v[i] = 1.0 + 0.5 * std::cos(static_cast<double>(i));
  double nv = norm2(v);
  for (auto& c : v) c /= nv;
  double lam = 0.0;
  Vec Av, w;
  for (int it = 0; it < max_iter; ++it) {
    gemv(A, v, Av);
    gemv_t(A, Av, w);  // w = A^T A v
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    for (auto& c : w) c /= nw;
    const double lam_new = nw;  // Rayleigh quotient of A^T A at unit v
    v.swap(w);
    if (it > 0 && std::fabs(lam_new - lam) <= rel_tol * std::max(1.0, lam_new)) {
      lam = lam_new;
      break;
    }
    lam = lam_new;
  }
  return std::sqrt(lam);
}

}  // namespace linalg
}  // namespace vilab
