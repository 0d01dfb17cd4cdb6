#include "vilab/metrics.hpp"

#include <cmath>
#include <ostream>

namespace vilab {

double residual_sq(const Trajectory& t, int k) {
  if (k < 0 || k >= t.N()) throw std::out_of_range("residual_sq: k out of range");
  return linalg::norm2_sq(linalg::sub(t.xs[k + 1], t.xs[k]));
}

double radius_unconstrained(const Trajectory& t, const Vec& xstar) {
  return std::sqrt(41.0) / 3.0 * linalg::norm2(linalg::sub(t.xs[0], xstar));
}

double h0_sq(const Trajectory& t, const Vec& xstar, double L) {
  const double d0 = linalg::norm2_sq(linalg::sub(t.xs[0], xstar));
  const double f0 = linalg::norm2_sq(t.gs[0]);
  return 3.0 * d0 + f0 / (30.0 * L * L);
}

double h0gamma_sq(const Trajectory& t, const Vec& xstar, double L) {
  const double d0 = linalg::norm2_sq(linalg::sub(t.xs[0], xstar));
  const double f0 = linalg::norm2_sq(t.gs[0]);
  const double q2 = t.gamma * t.gamma * L * L;
  return 2.0 * (1.0 + 3.0 * q2 + 4.0 * q2 * q2) * d0 +
         (41.0 / 12.0 + 19.0 / 3.0 * q2) * t.gamma * t.gamma * f0;
}

double radius_constrained_simple(const Trajectory& t, const Vec& xstar, double L) {
  const double d0 = linalg::norm2(linalg::sub(t.xs[0], xstar));
  const double f0 = linalg::norm2(t.gs[0]);
  return std::sqrt(3.0) * d0 + f0 / (std::sqrt(30.0) * L);
}

GapEstimate gap_upper_bound(const Trajectory& t, int k, const Vec& xstar, GapMode mode,
                            double L) {
  if (k < 0 || k > t.N()) throw std::out_of_range("gap_upper_bound: k out of range");
  GapEstimate e;
  const double dist_k = linalg::norm2(linalg::sub(t.xs[k], xstar));
  if (mode == GapMode::Unconstrained) {
    e.radius = radius_unconstrained(t, xstar);
    e.upper_bound = linalg::norm2(t.gs[k]) * (dist_k + e.radius);
  } else {
    if (k == 0)
      throw std::out_of_range("gap_upper_bound: constrained mode needs k >= 1");
    e.radius = std::sqrt(h0_sq(t, xstar, L));
    Vec v = linalg::sub(t.xs[k], t.xs[k - 1]);
    linalg::axpy(-t.gamma, t.gs[k], v);
    linalg::axpy(t.gamma, t.gt(k - 1), v);
    e.upper_bound = linalg::norm2(v) / t.gamma * (dist_k + e.radius);
  }
  return e;
}

namespace {

// Projection onto X intersect Ball(x*, R) by alternating projection rounds
// with Dykstra correction increments (exact for two closed convex sets).
Vec project_cap(const FeasibleSet& X, const Vec& xstar, double R, const Vec& x) {
  const FeasibleSet ball = FeasibleSet::ball(xstar, R);
  if (X.is_unconstrained()) return project(ball, x);
  Vec z = x;
  Vec p(x.size(), 0.0), q(x.size(), 0.0);
  Vec prev = z;
  for (int round = 0; round < 500; ++round) {
    Vec y = project(ball, linalg::add(z, p));
    for (size_t i = 0; i < x.size(); ++i) p[i] = z[i] + p[i] - y[i];
    z = project(X, linalg::add(y, q));
    for (size_t i = 0; i < x.size(); ++i) q[i] = y[i] + q[i] - z[i];
    const double move = linalg::norm2(linalg::sub(z, prev));
    if (move <= 1e-10 * (1.0 + linalg::norm2(z))) break;
    prev = z;
  }
  return z;
}

}  // namespace

double exact_gap_affine(const OperatorSpec& F, const FeasibleSet& X, const Vec& x,
                        const Vec& xstar, double R) {
  if (F.kind() != OpKind::AffineMonotone && F.kind() != OpKind::Zero &&
      F.kind() != OpKind::ScaledRotation && F.kind() != OpKind::BilinearSaddle)
    throw UnsupportedOperator("exact_gap_affine: affine monotone operators only");
  const Mat& A = F.linear();
  const Vec& b = F.offset();
  const int d = F.dim();

  auto value = [&](const Vec& y) {
    Vec Fy;
    linalg::ref::gemv(A, y, Fy);
    for (int i = 0; i < d; ++i) Fy[i] += b[i];
    return linalg::dot(Fy, linalg::sub(x, y));
  };
  auto grad = [&](const Vec& y) {
    // d/dy <Ay + b, x - y> = A^T (x - y) - (A y + b)
    Vec gyt;
    linalg::ref::gemv_t(A, linalg::sub(x, y), gyt);
    Vec Fy;
    linalg::ref::gemv(A, y, Fy);
    for (int i = 0; i < d; ++i) gyt[i] -= Fy[i] + b[i];
    return gyt;
  };

  // Smoothness constant of the inner objective: ||A + A^T||_2.
  Mat Asym(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) Asym(i, j) = A(i, j) + A(j, i);
  Vec vals;
  Mat V;
  linalg::jacobi_eigh(Asym, vals, V);
  const double l_inner = std::max(std::fabs(vals.front()), std::fabs(vals.back()));
  double stepsize;
  long iters = 100000;
  if (l_inner > 1e-12) {
    stepsize = 1.0 / (2.0 * l_inner);
  } else {
    // Linear objective: fixed geometry-scaled step.
    stepsize = R / (1.0 + linalg::norm2(b) + linalg::norm2(grad(xstar)));
  }

  Vec y = project_cap(X, xstar, R, x);
  double best = value(y);
  int stall = 0;
  for (long itn = 0; itn < iters; ++itn) {
    Vec gv = grad(y);
    Vec yn = y;
    linalg::axpy(stepsize, gv, yn);
    yn = project_cap(X, xstar, R, yn);
    const double vn = value(yn);
    y = std::move(yn);
    if (vn > best + 1e-14 * (1.0 + std::fabs(best))) {
      best = vn;
      stall = 0;
    } else if (++stall > 50) {
      break;
    }
    best = std::max(best, vn);
  }
  return best;
}

double theorem1_norm_bound(double L, double gamma, double dist0_sq, int k) {
  return 3.0 * (1.0 + 32.0 * L * L * gamma * gamma) * dist0_sq /
         (gamma * gamma * (k + 32.0));
}

double theorem1_gap_bound(double L, double gamma, double dist0_sq, int k) {
  return 2.0 * std::sqrt(41.0) * (1.0 + 32.0 * L * L * gamma * gamma) * dist0_sq /
         (gamma * std::sqrt(3.0 * k + 96.0));
}

double theorem2_residual_bound(double h0gamma_sq_value, int k) {
  return 24.0 * h0gamma_sq_value / (3.0 * k + 32.0);
}

double theorem2_gap_bound(double L, double h0_sq_value, int k) {
  return 32.0 * L * std::sqrt(3.0) * h0_sq_value / std::sqrt(3.0 * k + 32.0);
}

const char* const kMetricsCsvHeader =
    "k,op_norm_sq,residual_sq,gap_upper_bound,theorem_bound,ratio";

void write_metrics_csv(std::ostream& os, const Trajectory& t, const Vec& xstar, double L,
                       GapMode mode) {
  os << kMetricsCsvHeader << "\n";
  os.precision(17);
  const double d0sq = linalg::norm2_sq(linalg::sub(t.xs[0], xstar));
  const double h0g = h0gamma_sq(t, xstar, L);
  for (int k = 0; k <= t.N(); ++k) {
    const double fn = linalg::norm2_sq(t.gs[k]);
    const double res = (k < t.N()) ? residual_sq(t, k) : 0.0;
    double gap = 0.0;
    if (mode == GapMode::Unconstrained || k >= 1)
      gap = gap_upper_bound(t, k, xstar, mode, L).upper_bound;
    double bound, ratio;
    if (mode == GapMode::Unconstrained) {
      bound = theorem1_norm_bound(L, t.gamma, d0sq, k);
      ratio = fn / bound;
    } else {
      bound = theorem2_residual_bound(h0g, k);
      ratio = (k >= 1 ? linalg::norm2_sq(linalg::sub(t.xs[k], t.xs[k - 1])) : 0.0) / bound;
    }
    os << k << "," << fn << "," << res << "," << gap << "," << bound << "," << ratio
       << "\n";
  }
}

}  // namespace vilab
