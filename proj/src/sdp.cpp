#include "vilab/sdp.hpp"

#include <cmath>

namespace vilab {

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "?";
}

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

// Scaled vectorization of the symmetric matrix space: <M, N>_F = dot(svec M, svec N).
int svec_dim(int n) { return n * (n + 1) / 2; }

void svec(const Mat& M, Vec& out) {
  const int n = M.rows;
  out.resize(svec_dim(n));
  int at = 0;
  for (int i = 0; i < n; ++i) {
    out[at++] = M(i, i);
    for (int j = i + 1; j < n; ++j) out[at++] = kSqrt2 * M(i, j);
  }
}

void smat(const Vec& v, int n, Mat& M) {
  M = Mat(n, n);
  int at = 0;
  for (int i = 0; i < n; ++i) {
    M(i, i) = v[at++];
    for (int j = i + 1; j < n; ++j) {
      const double w = v[at++] / kSqrt2;
      M(i, j) = w;
      M(j, i) = w;
    }
  }
}

struct SparseRow {
  std::vector<int> idx;
  std::vector<double> val;
  int slack = -1;  // slot in the slack block, -1 for equality rows
  double rhs = 0.0;
  double fnorm = 1.0;  // original row norm used for scaling
};

struct Workspace {
  int n = 0;        // gram dimension
  int nv = 0;       // svec dimension of the matrix block
  int m = 0;        // number of constraints
  int n_slack = 0;  // number of inequality rows
  double cf = 1.0;  // objective scale
  std::vector<SparseRow> rows;
  Vec c_svec;       // svec(-C/cf), the min-form cost on the matrix block
  Vec bhat;
  Vec Ac_mat;       // A applied to the cost (slack part of c is zero)
  Mat chol;         // Cholesky factor of A A^T
};

void apply_A(const Workspace& w, const Vec& xmat, const Vec& xslack, Vec& out) {
  out.assign(w.m, 0.0);
#pragma omp parallel for if (w.m >= 512) schedule(static)
  for (int i = 0; i < w.m; ++i) {
    const SparseRow& r = w.rows[i];
    double s = 0.0;
    for (size_t k = 0; k < r.idx.size(); ++k) s += r.val[k] * xmat[r.idx[k]];
    if (r.slack >= 0) s += xslack[r.slack];
    out[i] = s;
  }
}

void apply_At(const Workspace& w, const Vec& y, Vec& omat, Vec& oslack) {
  omat.assign(w.nv, 0.0);
  oslack.assign(w.n_slack, 0.0);
  for (int i = 0; i < w.m; ++i) {
    const double yi = y[i];
    if (yi == 0.0) continue;
    const SparseRow& r = w.rows[i];
    for (size_t k = 0; k < r.idx.size(); ++k) omat[r.idx[k]] += yi * r.val[k];
    if (r.slack >= 0) oslack[r.slack] += yi;
  }
}

Workspace prepare(const SdpProblem& p) {
  Workspace w;
  w.n = p.gram_dim;
  w.nv = svec_dim(w.n);
  w.m = static_cast<int>(p.constraints.size());
  if (w.m == 0) throw std::invalid_argument("sdp::solve: no constraints");

  w.cf = std::max(1.0, linalg::frob_norm(p.objective));
  {
    Mat Cm = (-1.0 / w.cf) * p.objective;
    svec(Cm, w.c_svec);
  }

  w.rows.resize(w.m);
  w.bhat.assign(w.m, 0.0);
  Vec tmp;
  for (int i = 0; i < w.m; ++i) {
    svec(p.constraints[i].mat, tmp);
    double f = 0.0;
    for (double v : tmp) f += v * v;
    f = std::sqrt(f);
    if (f < 1e-14) f = 1.0;
    SparseRow& r = w.rows[i];
    r.fnorm = f;
    for (int k = 0; k < w.nv; ++k)
      if (tmp[k] != 0.0) {
        r.idx.push_back(k);
        r.val.push_back(tmp[k] / f);
      }
    if (p.constraints[i].sense == Sense::LessEq) r.slack = w.n_slack++;
    r.rhs = p.constraints[i].rhs / f;
    w.bhat[i] = r.rhs;
  }

  // Gram matrix of the scaled rows (+ identity on the slack coordinates),
  // accumulated column-wise over the svec coordinates.
  Mat H(w.m, w.m);
  {
    std::vector<std::vector<std::pair<int, double>>> cols(w.nv);
    for (int i = 0; i < w.m; ++i)
      for (size_t k = 0; k < w.rows[i].idx.size(); ++k)
        cols[w.rows[i].idx[k]].push_back({i, w.rows[i].val[k]});
    for (int c = 0; c < w.nv; ++c) {
      const auto& col = cols[c];
      for (size_t a = 0; a < col.size(); ++a)
        for (size_t b = 0; b <= a; ++b)
          H(col[a].first, col[b].first) += col[a].second * col[b].second;
    }
    for (int i = 0; i < w.m; ++i)
      for (int j = i + 1; j < w.m; ++j) H(i, j) = H(j, i);
    for (int i = 0; i < w.m; ++i)
      if (w.rows[i].slack >= 0) H(i, i) += 1.0;
  }
  double mean_diag = 0.0;
  for (int i = 0; i < w.m; ++i) mean_diag += H(i, i);
  mean_diag /= w.m;
  for (double shift : {0.0, 1e-12, 1e-10, 1e-8, 1e-6}) {
    Mat L = H;
    try {
      linalg::cholesky(L, shift * mean_diag);
      w.chol = std::move(L);
      break;
    } catch (const std::runtime_error&) {
      if (shift == 1e-6) throw;
    }
  }

  Vec zero_slack(w.n_slack, 0.0);
  apply_A(w, w.c_svec, zero_slack, w.Ac_mat);
  return w;
}

}  // namespace

SdpSolution solve(const SdpProblem& p, const SolverSettings& st) {
  Workspace w = prepare(p);
  const int n = w.n;
  const double alpha = st.over_relax;
  double mu = st.mu0;

  Vec xmat(w.nv, 0.0), xslack(w.n_slack, 0.0);
  Vec smat_v(w.nv, 0.0), sslack(w.n_slack, 0.0);
  Vec y(w.m, 0.0);
  Vec AX, AS, rhs, u_mat, u_slack;
  Mat Vm, Sm;

  const double bnorm = linalg::norm2(w.bhat);
  const double cnorm = linalg::norm2(w.c_svec);

  SdpSolution sol;
  sol.status = SolveStatus::MaxIter;
  int it = 0;
  for (it = 1; it <= st.max_iter; ++it) {
    // y-step: (A A^T) y = A(c - S) + mu (b - A(X)).
    apply_A(w, smat_v, sslack, AS);
    apply_A(w, xmat, xslack, AX);
    rhs.assign(w.m, 0.0);
    for (int i = 0; i < w.m; ++i) {
      double s = w.Ac_mat[i] - AS[i];
      if (w.rows[i].slack >= 0) s -= sslack[w.rows[i].slack] * 0.0;  // c has no slack part
      rhs[i] = s + mu * (w.bhat[i] - AX[i]);
    }
    y = rhs;
    linalg::chol_solve(w.chol, y);

    apply_At(w, y, u_mat, u_slack);

    // Over-relaxed splitting step, then the cone projection.
    Vec v_mat(w.nv), v_slack(w.n_slack);
    for (int k = 0; k < w.nv; ++k) {
      const double h = alpha * u_mat[k] + (1.0 - alpha) * (w.c_svec[k] - smat_v[k]);
      v_mat[k] = w.c_svec[k] - h - mu * xmat[k];
    }
    for (int k = 0; k < w.n_slack; ++k) {
      const double h = alpha * u_slack[k] + (1.0 - alpha) * (0.0 - sslack[k]);
      v_slack[k] = -h - mu * xslack[k];
    }
    smat(v_mat, n, Vm);
    Sm = linalg::psd_project(Vm);
    svec(Sm, smat_v);
    for (int k = 0; k < w.n_slack; ++k) sslack[k] = std::max(0.0, v_slack[k]);
    for (int k = 0; k < w.nv; ++k) xmat[k] = (smat_v[k] - v_mat[k]) / mu;
    for (int k = 0; k < w.n_slack; ++k) xslack[k] = (sslack[k] - v_slack[k]) / mu;

    if (it % st.check_every == 0 || it == st.max_iter) {
      apply_A(w, xmat, xslack, AX);
      double pres = 0.0;
      for (int i = 0; i < w.m; ++i) {
        const double d = AX[i] - w.bhat[i];
        pres += d * d;
      }
      pres = std::sqrt(pres) / (1.0 + bnorm);
      double dres = 0.0;
      for (int k = 0; k < w.nv; ++k) {
        const double d = u_mat[k] + smat_v[k] - w.c_svec[k];
        dres += d * d;
      }
      for (int k = 0; k < w.n_slack; ++k) {
        const double d = u_slack[k] + sslack[k];
        dres += d * d;
      }
      dres = std::sqrt(dres) / (1.0 + cnorm);
      sol.primal_residual = pres;
      sol.dual_residual = dres;

      const double pobj_min = linalg::dot(w.c_svec, xmat);
      const double dobj_min = linalg::dot(w.bhat, y);
      const double gap = std::fabs(pobj_min - dobj_min) /
                         (1.0 + std::fabs(pobj_min) + std::fabs(dobj_min));
      if (pres <= st.tol && dres <= st.tol && gap <= 100.0 * st.tol) {
        sol.status = SolveStatus::Solved;
        break;
      }
      // Divergence heuristics.
      const double xnorm = linalg::norm2(xmat);
      if (-pobj_min * w.cf > 1e12 * (1.0 + bnorm) && pres <= std::sqrt(st.tol)) {
        sol.status = SolveStatus::Unbounded;
        break;
      }
      if (xnorm > 1e14 || linalg::norm2(y) > 1e14) {
        sol.status = pres > std::sqrt(st.tol) ? SolveStatus::Infeasible
                                              : SolveStatus::Unbounded;
        break;
      }
      if (st.adaptive_mu && it % (st.check_every * 5) == 0) {
        if (pres > 10.0 * dres)
          mu = std::min(mu * 1.5, 1e6);
        else if (dres > 10.0 * pres)
          mu = std::max(mu / 1.5, 1e-6);
      }
    }
  }
  sol.iterations = std::min(it, st.max_iter);

  smat(xmat, n, sol.G);
  sol.objective = objective_value(p, sol.G);
  sol.duals.assign(w.m, 0.0);
  double dobj = 0.0;
  for (int i = 0; i < w.m; ++i) {
    sol.duals[i] = -w.cf * y[i] / w.rows[i].fnorm;
    dobj += sol.duals[i] * p.constraints[i].rhs;
  }
  sol.dual_objective = dobj;
  return sol;
}

CertifiedBound certify_upper_bound(const SdpProblem& p, const Vec& duals) {
  if (duals.size() != p.constraints.size())
    throw std::invalid_argument("certify_upper_bound: dual size mismatch");
  const int n = p.gram_dim;
  CertifiedBound cb;
  cb.duals = duals;
  for (size_t i = 0; i < cb.duals.size(); ++i)
    if (p.constraints[i].sense == Sense::LessEq && cb.duals[i] < 0.0)
      cb.duals[i] = 0.0;  // componentwise clip (tolerance -1e-12 and below)

  auto slack_matrix = [&](const Vec& lam) {
    Mat Z = (-1.0) * p.objective;
    for (size_t i = 0; i < lam.size(); ++i) {
      if (lam[i] == 0.0) continue;
      const Mat& M = p.constraints[i].mat;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) Z(r, c) += lam[i] * M(r, c);
    }
    return Z;
  };

  Mat Z = slack_matrix(cb.duals);
  double margin = linalg::min_eig_sym(Z);
  const double scale = 1.0 + linalg::max_abs(Z);
  if (margin < -1e-12 * scale) {
    // Try to repair with the normalization constraint (its matrix is PSD).
    int norm_idx = -1;
    for (size_t i = 0; i < p.constraints.size(); ++i)
      if (p.constraints[i].tag.kind == ConstraintKind::Normalization)
        norm_idx = static_cast<int>(i);
    bool repaired = false;
    if (norm_idx >= 0) {
      double t_hi = std::max(1.0, -2.0 * margin);
      Vec lam = cb.duals;
      for (int tries = 0; tries < 24 && !repaired; ++tries) {
        lam[norm_idx] = cb.duals[norm_idx] + t_hi;
        if (linalg::min_eig_sym(slack_matrix(lam)) >= 0.0) {
          repaired = true;
          break;
        }
        t_hi *= 4.0;
        if (t_hi > 1e10) break;
      }
      if (repaired) {
        double lo = 0.0, hi = t_hi;
        for (int b = 0; b < 40; ++b) {
          const double mid = 0.5 * (lo + hi);
          lam[norm_idx] = cb.duals[norm_idx] + mid;
          if (linalg::min_eig_sym(slack_matrix(lam)) >= 0.0)
            hi = mid;
          else
            lo = mid;
        }
        cb.duals[norm_idx] += hi;
        Z = slack_matrix(cb.duals);
        margin = linalg::min_eig_sym(Z);
      }
    }
    if (!repaired) {
      cb.ok = false;
      cb.psd_margin = margin;
      return cb;
    }
  }
  cb.psd_margin = margin;
  cb.ok = margin >= -1e-12 * scale;
  double v = 0.0;
  for (size_t i = 0; i < cb.duals.size(); ++i) v += cb.duals[i] * p.constraints[i].rhs;
  cb.value = v;
  return cb;
}

DeltaSignResult delta_sign(const PepSpec& spec, const SolverSettings& settings) {
  if (spec.objective != PepObjective::DeltaNormSq &&
      spec.objective != PepObjective::DeltaNormSqTilde)
    throw std::invalid_argument("delta_sign: needs a Delta objective");
  const SdpProblem p = build_pep(spec);
  const SdpSolution sol = solve(p, settings);
  DeltaSignResult r;
  r.objective = sol.objective;
  const double eps = std::max(1e-7, 100.0 * settings.tol);

  if (spec.cls == OperatorClass::Cocoercive && sol.objective > eps) {
    ReconstructedInstance inst = reconstruct_instance(sol.G, p);
    double worst = 0.0;
    for (double v : inst.constraint_residuals) worst = std::max(worst, v);
    // Replayed objective: the squared value norms at the last two samples.
    const bool tilde = spec.objective == PepObjective::DeltaNormSqTilde;
    const std::string last =
        (tilde || spec.method == PepMethod::OG || spec.method == PepMethod::ProjOG
             ? "xt"
             : "x") +
        std::to_string(p.horizon);
    std::string prev = (tilde ? (p.horizon - 1 == 0 ? std::string("x0") : "xt" + std::to_string(p.horizon - 1))
                              : "x" + std::to_string(p.horizon - 1));
    double n_last = -1.0, n_prev = -1.0;
    for (size_t i = 0; i < inst.labels.size(); ++i) {
      if (inst.labels[i] == last) n_last = linalg::norm2_sq(inst.values[i]);
      if (inst.labels[i] == prev) n_prev = linalg::norm2_sq(inst.values[i]);
    }
    if (worst <= 1e-6 && n_last > n_prev) {
      r.verdict = DeltaSign::PositiveWitnessed;
      r.witness = std::move(inst);
      return r;
    }
    throw InconclusiveDelta("delta_sign: positive objective but witness replay failed");
  }

  const CertifiedBound cb = certify_upper_bound(p, sol.duals);
  if (cb.ok && cb.value <= eps) {
    r.verdict = DeltaSign::NonpositiveCertified;
    r.cert = cb;
    return r;
  }
  throw InconclusiveDelta("delta_sign: neither certified nonpositive nor witnessed");
}

}  // namespace vilab
