#include "vilab/methods.hpp"

#include <cmath>
#include <map>
#include <ostream>

namespace vilab {

std::string method_name(MethodId m) {
  switch (m) {
    case MethodId::Gradient: return "gradient";
    case MethodId::EG: return "eg";
    case MethodId::ProjEG: return "proj-eg";
    case MethodId::PEG: return "peg";
    case MethodId::ProjPEG: return "proj-peg";
    case MethodId::OG: return "og";
    case MethodId::ProjOG: return "proj-og";
    case MethodId::EAG: return "eag";
  }
  return "?";
}

std::optional<MethodId> method_from_name(const std::string& s) {
  static const std::map<std::string, MethodId> table = {
      {"gradient", MethodId::Gradient}, {"eg", MethodId::EG},
      {"proj-eg", MethodId::ProjEG},    {"peg", MethodId::PEG},
      {"proj-peg", MethodId::ProjPEG},  {"og", MethodId::OG},
      {"proj-og", MethodId::ProjOG},    {"eag", MethodId::EAG}};
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

namespace {

void check_finite(const Vec& x, int k) {
  for (double v : x)
    if (!std::isfinite(v) || std::fabs(v) > 1e100) throw DivergenceError(k);
}

}  // namespace

Trajectory run(const OperatorSpec& F, const FeasibleSet& set, const RunConfig& cfg) {
  if (cfg.gamma <= 0.0) throw std::invalid_argument("run: gamma must be positive");
  if (cfg.iterations < 0) throw std::invalid_argument("run: iterations must be >= 0");
  if (static_cast<int>(cfg.x0.size()) != F.dim() || F.dim() != set.dim())
    throw DimensionMismatch("run: x0/operator/set dimensions disagree");

  const double g = cfg.gamma;
  const int N = cfg.iterations;
  Trajectory t;
  t.method = cfg.method;
  t.gamma = g;
  t.unconstrained = set.is_unconstrained();
  t.gt_init = Vec(F.dim(), 0.0);

  auto step = [&](const Vec& base, const Vec& val) {
    Vec y = base;
    linalg::axpy(-g, val, y);
    return project(set, y);
  };

  switch (cfg.method) {
    case MethodId::Gradient: {
      t.xs.push_back(cfg.x0);
      t.gs.push_back(F(cfg.x0));
      for (int k = 0; k < N; ++k) {
        Vec x1 = step(t.xs[k], t.gs[k]);
        check_finite(x1, k + 1);
        t.xs.push_back(std::move(x1));
        t.gs.push_back(F(t.xs.back()));
      }
      break;
    }
    case MethodId::EG:
    case MethodId::ProjEG: {
      t.xs.push_back(cfg.x0);
      t.gs.push_back(F(cfg.x0));
      for (int k = 0; k < N; ++k) {
        Vec xt = step(t.xs[k], t.gs[k]);
        check_finite(xt, k);
        t.gts.push_back(F(xt));
        t.xts.push_back(std::move(xt));
        Vec x1 = step(t.xs[k], t.gts[k]);
        check_finite(x1, k + 1);
        t.xs.push_back(std::move(x1));
        t.gs.push_back(F(t.xs.back()));
      }
      break;
    }
    case MethodId::PEG:
    case MethodId::ProjPEG: {
      t.xs.push_back(cfg.x0);
      t.gs.push_back(F(cfg.x0));
      for (int k = 0; k < N; ++k) {
        // xtilde^0 = x^0; for k >= 1 project x^k - gamma F(xtilde^{k-1}).
        Vec xt = (k == 0) ? cfg.x0 : step(t.xs[k], t.gts[k - 1]);
        check_finite(xt, k);
        t.gts.push_back(F(xt));
        t.xts.push_back(std::move(xt));
        Vec x1 = step(t.xs[k], t.gts[k]);
        check_finite(x1, k + 1);
        t.xs.push_back(std::move(x1));
        t.gs.push_back(F(t.xs.back()));
      }
      break;
    }
    case MethodId::OG: {
      // Single-sequence form with the F(xtilde^{-1}) = 0 convention, so the
      // first step is xt^1 = xt^0 - 2 gamma F(xt^0).
      t.xs.push_back(cfg.x0);
      t.gs.push_back(F(cfg.x0));
      for (int k = 0; k < N; ++k) {
        Vec x1 = t.xs[k];
        linalg::axpy(-2.0 * g, t.gs[k], x1);
        const Vec& prev = (k == 0) ? t.gt_init : t.gs[k - 1];
        linalg::axpy(g, prev, x1);
        check_finite(x1, k + 1);
        t.xs.push_back(std::move(x1));
        t.gs.push_back(F(t.xs.back()));
      }
      t.xts = t.xs;
      t.gts = t.gs;
      break;
    }
    case MethodId::ProjOG: {
      // xt^k = proj[x^k - gamma F(xt^{k-1})]; x^{k+1} = xt^k + gamma(F(xt^{k-1}) - F(xt^k)).
      // As printed, x^{k+1} is not projected.
      t.xs.push_back(cfg.x0);
      t.gs.push_back(F(cfg.x0));
      for (int k = 0; k < N; ++k) {
        Vec xt = step(t.xs[k], t.gt(k - 1));
        check_finite(xt, k);
        t.gts.push_back(F(xt));
        t.xts.push_back(std::move(xt));
        Vec x1 = t.xts[k];
        linalg::axpy(g, t.gt(k - 1), x1);
        linalg::axpy(-g, t.gts[k], x1);
        check_finite(x1, k + 1);
        t.xs.push_back(std::move(x1));
        t.gs.push_back(F(t.xs.back()));
      }
      break;
    }
    case MethodId::EAG: {
      t.xs.push_back(cfg.x0);
      t.gs.push_back(F(cfg.x0));
      for (int k = 0; k < N; ++k) {
        const double beta = cfg.anchor(k);
        if (beta < 0.0 || beta >= 1.0)
          throw std::invalid_argument("run: EAG anchor must lie in [0,1)");
        Vec anchor_pt = t.xs[k];
        for (int i = 0; i < F.dim(); ++i)
          anchor_pt[i] += beta * (t.xs[0][i] - t.xs[k][i]);
        Vec xt = anchor_pt;
        linalg::axpy(-g, t.gs[k], xt);
        check_finite(xt, k);
        t.gts.push_back(F(xt));
        t.xts.push_back(std::move(xt));
        Vec x1 = anchor_pt;
        linalg::axpy(-g, t.gts[k], x1);
        check_finite(x1, k + 1);
        t.xs.push_back(std::move(x1));
        t.gs.push_back(F(t.xs.back()));
      }
      break;
    }
  }
  return t;
}

Trajectory og_from_peg(const Trajectory& peg) {
  if (peg.method != MethodId::PEG) throw std::invalid_argument("og_from_peg: expects a PEG run");
  if (!peg.unconstrained) throw std::invalid_argument("og_from_peg: expects an unconstrained run");
  if (peg.xts.empty()) throw std::invalid_argument("og_from_peg: empty xtilde sequence");
  Trajectory t;
  t.method = MethodId::OG;
  t.gamma = peg.gamma;
  t.unconstrained = true;
  t.xs = peg.xts;
  t.gs = peg.gts;
  t.xts = peg.xts;
  t.gts = peg.gts;
  t.gt_init = peg.gt_init;
  return t;
}

namespace {

// Distance from w to the cubic surface {v : v1 v2 v3 = c} by a damped Newton
// iteration on the KKT system v - w + lambda * grad(h)(v) = 0, h(v) = 0.
double manifold_distance(const Vec& w, double c) {
  auto h = [&](const Vec& v) { return v[0] * v[1] * v[2] - c; };
  Vec v = w;
  // Start from a point on the surface along the (1,1,1) direction.
  if (std::fabs(h(v)) > 1e-14) {
    const double s = std::cbrt(std::fabs(c));
    const double sign = c >= 0 ? 1.0 : -1.0;
    Vec cand{s, s, sign * s};
    if (linalg::norm2(linalg::sub(cand, w)) <
        linalg::norm2(linalg::sub(linalg::scale(-1.0, cand), w)))
      v = cand;
    else
      v = linalg::scale(-1.0, cand);
  }
  double lambda = 0.0;
  for (int it = 0; it < 300; ++it) {
    Vec grad{v[1] * v[2], v[0] * v[2], v[0] * v[1]};
    Vec r{v[0] - w[0] + lambda * grad[0], v[1] - w[1] + lambda * grad[1],
          v[2] - w[2] + lambda * grad[2]};
    const double hv = h(v);
    Mat J(4, 4);
    J(0, 0) = 1.0;             J(0, 1) = lambda * v[2]; J(0, 2) = lambda * v[1]; J(0, 3) = grad[0];
    J(1, 0) = lambda * v[2];   J(1, 1) = 1.0;           J(1, 2) = lambda * v[0]; J(1, 3) = grad[1];
    J(2, 0) = lambda * v[1];   J(2, 1) = lambda * v[0]; J(2, 2) = 1.0;           J(2, 3) = grad[2];
    J(3, 0) = grad[0];         J(3, 1) = grad[1];       J(3, 2) = grad[2];       J(3, 3) = 0.0;
    Vec rhs{-r[0], -r[1], -r[2], -hv};
    Vec d;
    if (!linalg::lu_solve(J, rhs, d)) break;
    double damp = 1.0;
    for (int ls = 0; ls < 30; ++ls) {
      Vec vn{v[0] + damp * d[0], v[1] + damp * d[1], v[2] + damp * d[2]};
      if (std::fabs(h(vn)) <= std::fabs(hv) || std::fabs(hv) < 1e-13) {
        v = vn;
        lambda += damp * d[3];
        break;
      }
      damp *= 0.5;
    }
    if (linalg::norm2(d) < 1e-13) break;
  }
  if (std::fabs(h(v)) > 1e-8) return linalg::norm2(linalg::sub(v, w));  // best effort
  return linalg::norm2(linalg::sub(v, w));
}

}  // namespace

EagDemoResult run_eag_demo(double init_offset, double gamma, int iters) {
  const OperatorSpec F = OperatorSpec::deep_linear_toy(1.0, 1.0);
  const FeasibleSet X = FeasibleSet::unconstrained(3);
  Vec w0{init_offset, init_offset, init_offset};
  EagDemoResult r;
  RunConfig cfg;
  cfg.gamma = gamma;
  cfg.iterations = iters;
  cfg.x0 = w0;
  cfg.method = MethodId::EAG;
  r.eag = run(F, X, cfg);
  cfg.method = MethodId::PEG;
  r.peg = run(F, X, cfg);
  cfg.method = MethodId::EG;
  r.eg = run(F, X, cfg);
  r.dist_eag = linalg::norm2(r.eag.xs.back());
  r.dist_peg = linalg::norm2(r.peg.xs.back());
  r.dist_eg = linalg::norm2(r.eg.xs.back());
  const double c = 1.0;  // solution surface w1 w2 w3 = y/x = 1
  r.manifold_eag = manifold_distance(r.eag.xs.back(), c);
  r.manifold_peg = manifold_distance(r.peg.xs.back(), c);
  r.manifold_eg = manifold_distance(r.eg.xs.back(), c);
  return r;
}

double vi_residual(const OperatorSpec& F, const FeasibleSet& set, const Vec& x) {
  Vec y = x;
  linalg::axpy(-1.0, F(x), y);
  return linalg::norm2(linalg::sub(x, project(set, y)));
}

Vec solve_star(const OperatorSpec& F, const FeasibleSet& set, double tol, long max_iter) {
  const int d = F.dim();
  if (F.kind() == OpKind::Zero) return project(set, Vec(d, 0.0));
  const bool affine_like = F.kind() == OpKind::AffineMonotone ||
                           F.kind() == OpKind::BilinearSaddle ||
                           F.kind() == OpKind::ScaledRotation;
  Vec x(d, 0.0);
  bool have_linear_solution = false;
  if (affine_like) {
    Vec rhs = linalg::scale(-1.0, F.offset());
    have_linear_solution = linalg::lu_solve(F.linear(), rhs, x);
    if (have_linear_solution && set.is_unconstrained()) {
      if (vi_residual(F, set, x) > tol * (1.0 + linalg::norm2(x)))
        throw std::runtime_error("solve_star: linear solve failed validation");
      return x;
    }
  }
  // Projected extragradient down to the VI residual tolerance.
  if (!have_linear_solution) x.assign(d, 0.0);
  x = project(set, x);
  double L = 1.0;
  if (affine_like) L = std::max(1e-12, F.lipschitz());
  const double g = 0.5 / L;
  for (long k = 0; k < max_iter; ++k) {
    Vec xt = x;
    linalg::axpy(-g, F(x), xt);
    xt = project(set, xt);
    Vec x1 = x;
    linalg::axpy(-g, F(xt), x1);
    x1 = project(set, x1);
    const double move = linalg::norm2(linalg::sub(x1, x));
    x = std::move(x1);
    if (move <= 0.05 * tol * (1.0 + linalg::norm2(x)) &&
        vi_residual(F, set, x) <= tol * (1.0 + linalg::norm2(x)))
      return x;
  }
  if (vi_residual(F, set, x) <= tol * (1.0 + linalg::norm2(x))) return x;
  throw std::runtime_error("solve_star: extragradient did not reach tolerance");
}

const char* const kTrajectoryCsvColumns = "k,x,xt,op_norm_sq,residual_sq";

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  const int d = t.dim();
  os << "k";
  for (int i = 0; i < d; ++i) os << ",x" << i;
  for (int i = 0; i < d; ++i) os << ",xt" << i;
  os << ",op_norm_sq,residual_sq\n";
  os.precision(17);
  for (int k = 0; k <= t.N(); ++k) {
    os << k;
    for (int i = 0; i < d; ++i) os << "," << t.xs[k][i];
    if (k < static_cast<int>(t.xts.size()))
      for (int i = 0; i < d; ++i) os << "," << t.xts[k][i];
    else
      for (int i = 0; i < d; ++i) os << ",";
    os << "," << linalg::norm2_sq(t.gs[k]) << ",";
    if (k < t.N()) os << linalg::norm2_sq(linalg::sub(t.xs[k + 1], t.xs[k]));
    os << "\n";
  }
}

}  // namespace vilab
