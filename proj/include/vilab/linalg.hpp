#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vilab {

using Vec = std::vector<double>;

/// Dense row-major matrix.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int n);
  Mat transposed() const;
  bool square() const { return rows == cols; }
};

Mat operator+(const Mat& A, const Mat& B);
Mat operator-(const Mat& A, const Mat& B);
Mat operator*(double s, const Mat& A);

namespace linalg {

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm2_sq(const Vec& a);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(double s, const Vec& a);
// y += s * x
void axpy(double s, const Vec& x, Vec& y);
double frob_norm(const Mat& A);
double max_abs(const Mat& A);

// Serial reference kernels. The OpenMP versions below must produce bitwise
// identical results; tests and the benchmark target compare the two.
namespace ref {
void gemv(const Mat& A, const Vec& x, Vec& y);    // y = A x
void gemv_t(const Mat& A, const Vec& x, Vec& y);  // y = A^T x
void gemm(const Mat& A, const Mat& B, Mat& C);    // C = A B
void syrk(const Mat& B, Mat& C);                  // C = B B^T
int jacobi_eigh(const Mat& S, Vec& eigvals, Mat& eigvecs, double tol = 1e-13,
                int max_sweeps = 64);
}  // namespace ref

// OpenMP-parallel kernels. Each output element is computed by a single
// thread with a fixed serial reduction order, so the result does not depend
// on the thread count.
void gemv(const Mat& A, const Vec& x, Vec& y);
void gemv_t(const Mat& A, const Vec& x, Vec& y);
void gemm(const Mat& A, const Mat& B, Mat& C);
void syrk(const Mat& B, Mat& C);

// Symmetric eigendecomposition by cyclic Jacobi rotations; eigenvalues in
// ascending order, eigenvectors as columns of eigvecs. Returns sweep count.
int jacobi_eigh(const Mat& S, Vec& eigvals, Mat& eigvecs, double tol = 1e-13,
                int max_sweeps = 64);

// Projection onto the PSD cone (negative eigenvalues clipped).
Mat psd_project(const Mat& S);
double min_eig_sym(const Mat& S);

// In-place lower Cholesky factorization (throws if not positive definite;
// `shift` is added to the diagonal first). Serial: row-dot form, cache
// friendly on row-major storage.
void cholesky(Mat& A, double shift = 0.0);
// Solve (L L^T) x = b given the lower factor L; b is overwritten with x.
void chol_solve(const Mat& L, Vec& b);

// Dense LU solve with partial pivoting; returns false if singular to
// working precision.
bool lu_solve(Mat A, Vec b, Vec& x);

// Largest singular value of A (power iteration on A^T A, relative
// tolerance `rel_tol`). Deterministic fixed starting vector.
double spectral_norm(const Mat& A, double rel_tol = 1e-10, int max_iter = 100000);

}  // namespace linalg
}  // namespace vilab
