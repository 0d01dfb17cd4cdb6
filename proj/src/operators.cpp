#include "vilab/operators.hpp"

#include <algorithm>
#include <cmath>

namespace vilab {

namespace {

// Machine-accurate spectral norm for small dense matrices: sqrt(lambda_max(A^T A)).
double sigma_max(const Mat& A) {
  Mat AtA(A.cols, A.cols);
  for (int i = 0; i < A.cols; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < A.rows; ++k) s += A(k, i) * A(k, j);
      AtA(i, j) = s;
      AtA(j, i) = s;
    }
  Vec vals;
  Mat V;
  linalg::jacobi_eigh(AtA, vals, V);
  return std::sqrt(std::max(0.0, vals.back()));
}

double min_eig_symmetric_part(const Mat& A) {
  Mat S(A.rows, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.rows; ++j) S(i, j) = 0.5 * (A(i, j) + A(j, i));
  return linalg::min_eig_sym(S);
}

void check_dim(const OperatorSpec& F, const Vec& x) {
  if (static_cast<int>(x.size()) != F.dim())
    throw DimensionMismatch("operator/input dimension mismatch");
}

}  // namespace

OperatorSpec OperatorSpec::zero(int dim) {
  OperatorSpec f;
  f.kind_ = OpKind::Zero;
  f.dim_ = dim;
  f.lipschitz_ = 0.0;
  f.A_ = Mat(dim, dim);
  f.b_ = Vec(dim, 0.0);
  return f;
}

OperatorSpec OperatorSpec::affine(Mat A, Vec b) {
  if (!A.square() || A.rows != static_cast<int>(b.size()))
    throw DimensionMismatch("affine: A must be d x d with matching b");
  const double mineig = min_eig_symmetric_part(A);
  if (mineig < -1e-10)
    throw NotMonotone("affine: A + A^T has eigenvalue " + std::to_string(mineig));
  OperatorSpec f;
  f.kind_ = OpKind::AffineMonotone;
  f.dim_ = A.rows;
  f.lipschitz_ = sigma_max(A);
  f.A_ = std::move(A);
  f.b_ = std::move(b);
  return f;
}

OperatorSpec OperatorSpec::bilinear(Mat B, Vec c1, Vec c2) {
  const int p = B.rows, q = B.cols;
  if (p != static_cast<int>(c1.size()) || q != static_cast<int>(c2.size()))
    throw DimensionMismatch("bilinear: c1/c2 sizes must match B");
  OperatorSpec f;
  f.kind_ = OpKind::BilinearSaddle;
  f.dim_ = p + q;
  Mat A(p + q, p + q);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) {
      A(i, p + j) = B(i, j);
      A(p + j, i) = -B(i, j);
    }
  f.lipschitz_ = sigma_max(B);
  f.A_ = std::move(A);
  f.b_ = Vec(p + q, 0.0);
  for (int i = 0; i < p; ++i) f.b_[i] = c1[i];
  for (int j = 0; j < q; ++j) f.b_[p + j] = c2[j];
  return f;
}

OperatorSpec OperatorSpec::scaled_rotation(double omega) {
  OperatorSpec f;
  f.kind_ = OpKind::ScaledRotation;
  f.dim_ = 2;
  f.A_ = Mat(2, 2);
  f.A_(0, 1) = omega;
  f.A_(1, 0) = -omega;
  f.b_ = Vec(2, 0.0);
  f.lipschitz_ = std::fabs(omega);
  return f;
}

OperatorSpec OperatorSpec::deep_linear_toy(double x_data, double y_data) {
  OperatorSpec f;
  f.kind_ = OpKind::DeepLinearToy;
  f.dim_ = 3;
  f.toy_x_ = x_data;
  f.toy_y_ = y_data;
  f.monotone_ = false;  // the whole point of the example
  f.lipschitz_ = 0.0;   // no global constant exists
  return f;
}

OperatorSpec OperatorSpec::sampled(std::vector<std::pair<Vec, Vec>> pts, double lipschitz) {
  if (pts.empty()) throw std::invalid_argument("sampled: need at least one pair");
  OperatorSpec f;
  f.kind_ = OpKind::Sampled;
  f.dim_ = static_cast<int>(pts.front().first.size());
  for (const auto& [x, g] : pts)
    if (static_cast<int>(x.size()) != f.dim_ || static_cast<int>(g.size()) != f.dim_)
      throw DimensionMismatch("sampled: inconsistent pair dimensions");
  f.samples_ = std::move(pts);
  f.lipschitz_ = lipschitz;
  f.monotone_ = false;
  return f;
}

Vec OperatorSpec::operator()(const Vec& x) const {
  check_dim(*this, x);
  switch (kind_) {
    case OpKind::Zero:
      return Vec(dim_, 0.0);
    case OpKind::AffineMonotone:
    case OpKind::BilinearSaddle:
    case OpKind::ScaledRotation: {
      Vec y;
      linalg::ref::gemv(A_, x, y);
      for (int i = 0; i < dim_; ++i) y[i] += b_[i];
      return y;
    }
    case OpKind::DeepLinearToy: {
      const double r = toy_y_ - x[2] * x[1] * x[0] * toy_x_;
      Vec g(3);
      g[0] = -2.0 * r * x[1] * x[2] * toy_x_;
      g[1] = -2.0 * r * x[0] * x[2] * toy_x_;
      g[2] = -2.0 * r * x[0] * x[1] * toy_x_;
      return g;
    }
    case OpKind::Sampled: {
      for (const auto& [p, g] : samples_)
        if (linalg::norm2(linalg::sub(p, x)) <= 1e-12 * (1.0 + linalg::norm2(p))) return g;
      throw UnsupportedOperator("sampled: point not among stored samples");
    }
  }
  throw std::logic_error("unreachable");
}

const Mat& OperatorSpec::linear() const {
  if (kind_ == OpKind::DeepLinearToy || kind_ == OpKind::Sampled)
    throw UnsupportedOperator("operator has no linear part");
  return A_;
}

const Vec& OperatorSpec::offset() const {
  if (kind_ == OpKind::DeepLinearToy || kind_ == OpKind::Sampled)
    throw UnsupportedOperator("operator has no affine offset");
  return b_;
}

FeasibleSet FeasibleSet::unconstrained(int dim) {
  FeasibleSet s;
  s.kind_ = SetKind::Unconstrained;
  s.dim_ = dim;
  return s;
}

FeasibleSet FeasibleSet::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size()) throw DimensionMismatch("box: lo/hi size mismatch");
  for (size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) throw std::invalid_argument("box: requires lo <= hi componentwise");
  FeasibleSet s;
  s.kind_ = SetKind::Box;
  s.dim_ = static_cast<int>(lo.size());
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

FeasibleSet FeasibleSet::ball(Vec center, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("ball: radius must be positive");
  FeasibleSet s;
  s.kind_ = SetKind::Ball;
  s.dim_ = static_cast<int>(center.size());
  s.center_ = std::move(center);
  s.radius_ = radius;
  return s;
}

FeasibleSet FeasibleSet::halfspace(Vec normal, double offset) {
  if (linalg::norm2(normal) == 0.0)
    throw std::invalid_argument("halfspace: zero normal");
  FeasibleSet s;
  s.kind_ = SetKind::Halfspace;
  s.dim_ = static_cast<int>(normal.size());
  s.normal_ = std::move(normal);
  s.offset_ = offset;
  return s;
}

FeasibleSet FeasibleSet::product(std::vector<FeasibleSet> parts) {
  if (parts.empty()) throw std::invalid_argument("product: no parts");
  FeasibleSet s;
  s.kind_ = SetKind::Product;
  s.dim_ = 0;
  for (const auto& p : parts) s.dim_ += p.dim();
  s.parts_ = std::move(parts);
  return s;
}

bool FeasibleSet::contains(const Vec& x, double tol) const {
  const Vec p = project(*this, x);
  return linalg::norm2(linalg::sub(p, x)) <= tol * (1.0 + linalg::norm2(x));
}

Vec evaluate(const OperatorSpec& F, const Vec& x) { return F(x); }

Vec project(const FeasibleSet& set, const Vec& x) {
  if (static_cast<int>(x.size()) != set.dim())
    throw DimensionMismatch("project: dimension mismatch");
  switch (set.kind()) {
    case SetKind::Unconstrained:
      return x;
    case SetKind::Box: {
      Vec y(x.size());
      for (size_t i = 0; i < x.size(); ++i) y[i] = std::clamp(x[i], set.lo()[i], set.hi()[i]);
      return y;
    }
    case SetKind::Ball: {
      Vec d = linalg::sub(x, set.center());
      const double n = linalg::norm2(d);
      if (n <= set.radius()) return x;
      if (n == 0.0) return set.center();  // degenerate radial direction
      Vec y = set.center();
      linalg::axpy(set.radius() / n, d, y);
      return y;
    }
    case SetKind::Halfspace: {
      const double v = linalg::dot(set.normal(), x);
      if (v <= set.offset()) return x;
      Vec y = x;
      linalg::axpy((set.offset() - v) / linalg::norm2_sq(set.normal()), set.normal(), y);
      return y;
    }
    case SetKind::Product: {
      Vec y(x.size());
      int at = 0;
      for (const auto& part : set.parts()) {
        Vec xi(x.begin() + at, x.begin() + at + part.dim());
        Vec yi = project(part, xi);
        std::copy(yi.begin(), yi.end(), y.begin() + at);
        at += part.dim();
      }
      return y;
    }
  }
  throw std::logic_error("unreachable");
}

uint64_t Rng::next_raw() {
  // splitmix64; stable across platforms.
  state_ += 0x9e3779b97f4a7c15ull;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(th);
  have_spare_ = true;
  return r * std::cos(th);
}

Vec Rng::vec_uniform(int d, double a, double b) {
  Vec v(d);
  for (auto& c : v) c = uniform(a, b);
  return v;
}

Vec Rng::vec_gaussian(int d) {
  Vec v(d);
  for (auto& c : v) c = gaussian();
  return v;
}

namespace {

// Seeded orthogonal Q via modified Gram-Schmidt on a gaussian matrix.
Mat random_orthogonal(Rng& rng, int d) {
  Mat Q(d, d);
  for (int j = 0; j < d; ++j) {
    Vec v = rng.vec_gaussian(d);
    for (int p = 0; p < j; ++p) {
      double proj = 0.0;
      for (int i = 0; i < d; ++i) proj += Q(i, p) * v[i];
      for (int i = 0; i < d; ++i) v[i] -= proj * Q(i, p);
    }
    double n = linalg::norm2(v);
    if (n < 1e-12) {  // regenerate a degenerate column
      v = rng.vec_gaussian(d);
      n = linalg::norm2(v);
    }
    for (int i = 0; i < d; ++i) Q(i, j) = v[i] / n;
  }
  return Q;
}

}  // namespace

OperatorSpec random_monotone(uint64_t seed, int d, double L, double skew_fraction) {
  if (d < 1) throw std::invalid_argument("random_monotone: d >= 1 required");
  if (L <= 0.0) throw std::invalid_argument("random_monotone: L > 0 required");
  if (skew_fraction < 0.0 || skew_fraction > 1.0)
    throw std::invalid_argument("random_monotone: skew_fraction in [0,1]");
  Rng rng(seed);
  // Skew part S = (G - G^T)/2.
  Mat G(d, d);
  for (auto& v : G.a) v = rng.gaussian();
  Mat S(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) S(i, j) = 0.5 * (G(i, j) - G(j, i));
  // PSD part P = Q diag(U[0,1]) Q^T.
  Mat Q = random_orthogonal(rng, d);
  Vec lam = rng.vec_uniform(d, 0.0, 1.0);
  Mat P(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += Q(i, k) * lam[k] * Q(j, k);
      P(i, j) = s;
      P(j, i) = s;
    }
  Mat A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      A(i, j) = skew_fraction * S(i, j) + (1.0 - skew_fraction) * P(i, j);
  const double sigma = sigma_max(A);
  if (sigma < 1e-300) throw std::runtime_error("random_monotone: degenerate draw");
  const double f = L / sigma;
  for (auto& v : A.a) v *= f;
  Vec b = rng.vec_gaussian(d);
  const double nb = linalg::norm2(b);
  if (nb > 0.0)
    for (auto& v : b) v *= L / nb;
  return OperatorSpec::affine(std::move(A), std::move(b));
}

double lipschitz_estimate(const OperatorSpec& F) {
  switch (F.kind()) {
    case OpKind::Zero:
      return 0.0;
    case OpKind::AffineMonotone:
    case OpKind::ScaledRotation:
      return sigma_max(F.linear());
    case OpKind::BilinearSaddle:
      return sigma_max(F.linear());
    case OpKind::DeepLinearToy:
    case OpKind::Sampled:
      throw UnsupportedOperator("no global Lipschitz constant computed for this kind");
  }
  throw std::logic_error("unreachable");
}

}  // namespace vilab
