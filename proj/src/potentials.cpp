#include "vilab/potentials.hpp"

#include <cmath>
#include <ostream>

#include "vilab/metrics.hpp"

namespace vilab {

namespace {

double norm_slack(double lhs, double rhs) {
  return (rhs - lhs) / (1.0 + std::fabs(lhs) + std::fabs(rhs));
}

double energy(const Trajectory& t, int k) {
  return linalg::norm2_sq(t.gs[k]) +
         2.0 * linalg::norm2_sq(linalg::sub(t.gs[k], t.gt(k - 1)));
}

double psi(const Trajectory& t, int k) {
  Vec d = linalg::sub(t.xs[k], t.xs[k - 1]);
  Vec d2 = d;
  linalg::axpy(-2.0 * t.gamma, t.gs[k], d2);
  linalg::axpy(2.0 * t.gamma, t.gt(k - 1), d2);
  return linalg::norm2_sq(d) + linalg::norm2_sq(d2);
}

}  // namespace

double eval_potential(PotentialKind kind, const Trajectory& t, int k, const Vec& xstar) {
  switch (kind) {
    case PotentialKind::Lemma1Energy:
      if (k < 0 || k > t.N()) throw std::out_of_range("eval_potential: k out of range");
      return energy(t, k);
    case PotentialKind::UnconstrainedPhi: {
      if (k < 0 || k > t.N()) throw std::out_of_range("eval_potential: k out of range");
      const double d = linalg::norm2_sq(linalg::sub(t.xs[k], xstar));
      return d + (k + 32.0) / 3.0 * t.gamma * t.gamma * energy(t, k);
    }
    case PotentialKind::Psi:
      if (k < 1 || k > t.N()) throw std::out_of_range("eval_potential: Psi needs k >= 1");
      return psi(t, k);
    case PotentialKind::ConstrainedPhi: {
      if (k < 2 || k > t.N())
        throw std::out_of_range("eval_potential: constrained Phi needs k >= 2");
      if (static_cast<int>(t.xts.size()) <= k - 1)
        throw std::out_of_range("eval_potential: insufficient xtilde history");
      const double d = linalg::norm2_sq(linalg::sub(t.xs[k], xstar));
      const double dt = linalg::norm2_sq(linalg::sub(t.xts[k - 1], t.xts[k - 2]));
      return d + dt / 16.0 + (3.0 * k + 32.0) / 24.0 * psi(t, k);
    }
  }
  throw std::logic_error("unreachable");
}

double check_lemma1(const Trajectory& t, int k, double L) {
  if (t.method != MethodId::PEG || !t.unconstrained)
    throw std::invalid_argument("check_lemma1: unconstrained PEG trajectories only");
  if (k < 1 || k >= t.N()) throw std::out_of_range("check_lemma1: need 1 <= k <= N-1");
  const double q2 = L * L * t.gamma * t.gamma;
  const double lhs = energy(t, k + 1);
  const double rhs = energy(t, k) +
                     3.0 * (q2 - 2.0 / 9.0) *
                         linalg::norm2_sq(linalg::sub(t.gts[k], t.gts[k - 1]));
  return norm_slack(lhs, rhs);
}

double check_lemma2(const Trajectory& t, int k, double L) {
  if (t.method != MethodId::PEG && t.method != MethodId::ProjPEG)
    throw std::invalid_argument("check_lemma2: (Proj-)PEG trajectories only");
  if (k < 1 || k >= t.N()) throw std::out_of_range("check_lemma2: need 1 <= k <= N-1");
  const double g = t.gamma;
  const double lhs = psi(t, k + 1);
  const double rhs =
      psi(t, k) -
      (1.0 - 5.0 * L * L * g * g) * linalg::norm2_sq(linalg::sub(t.xs[k + 1], t.xts[k])) -
      g * g * linalg::norm2_sq(linalg::sub(t.gs[k + 1], t.gts[k]));
  return norm_slack(lhs, rhs);
}

GidelSlacks check_gidel_lemmas(const Trajectory& t, int k, double L, const Vec& xstar) {
  if (k < 1 || k >= t.N())
    throw std::out_of_range("check_gidel_lemmas: need 1 <= k <= N-1");
  const double g = t.gamma;
  GidelSlacks out;
  {
    const double lhs = 2.0 * g * linalg::dot(t.gts[k], linalg::sub(t.xts[k], xstar));
    const double rhs = linalg::norm2_sq(linalg::sub(t.xs[k], xstar)) -
                       linalg::norm2_sq(linalg::sub(t.xs[k + 1], xstar)) -
                       linalg::norm2_sq(linalg::sub(t.xts[k], t.xs[k])) +
                       g * g * L * L *
                           linalg::norm2_sq(linalg::sub(t.xts[k], t.xts[k - 1]));
    out.slack17 = norm_slack(lhs, rhs);
  }
  if (k >= 2) {
    const double dt = linalg::norm2_sq(linalg::sub(t.xts[k], t.xts[k - 1]));
    const double rhs = 4.0 * linalg::norm2_sq(linalg::sub(t.xts[k], t.xs[k])) +
                       4.0 * g * g * L * L *
                           linalg::norm2_sq(linalg::sub(t.xts[k - 1], t.xts[k - 2])) -
                       dt;
    out.slack18 = norm_slack(dt, rhs);
  }
  return out;
}

DecreaseReport check_theorem_decrease(PotentialKind kind, const Trajectory& t,
                                      const Vec& xstar, double L) {
  if (kind != PotentialKind::UnconstrainedPhi && kind != PotentialKind::ConstrainedPhi)
    throw std::invalid_argument("check_theorem_decrease: Phi kinds only");
  const bool constrained = kind == PotentialKind::ConstrainedPhi;
  DecreaseReport r;
  r.kind = kind;
  const double limit = constrained ? 1.0 / (4.0 * L) : 1.0 / (3.0 * L);
  r.in_theorem_range = t.gamma <= limit * (1.0 + 1e-12);

  const int k_lo = constrained ? 2 : 0;
  const double d0sq = linalg::norm2_sq(linalg::sub(t.xs[0], xstar));
  const double h0g = constrained ? h0gamma_sq(t, xstar, L) : 0.0;

  bool have_slack = false;
  for (int k = k_lo; k <= t.N(); ++k) {
    const double vk = eval_potential(kind, t, k, xstar);
    r.ks.push_back(k);
    r.values.push_back(vk);
    double bound, measured;
    if (constrained) {
      bound = theorem2_residual_bound(h0g, k);
      measured = linalg::norm2_sq(linalg::sub(t.xs[k], t.xs[k - 1]));
    } else {
      bound = theorem1_norm_bound(L, t.gamma, d0sq, k);
      measured = linalg::norm2_sq(t.gs[k]);
    }
    r.bounds.push_back(bound);
    r.bound_ratios.push_back(measured / bound);
    if (k < t.N()) {
      const double vk1 = eval_potential(kind, t, k + 1, xstar);
      const double slack = norm_slack(vk1, vk);
      r.diffs.push_back(vk - vk1);
      r.slacks.push_back(slack);
      r.residual_terms.push_back(vk - vk1);
      if (!have_slack || slack < r.max_violation) {
        r.max_violation = slack;
        r.worst_k = k;
        have_slack = true;
      }
    } else {
      r.diffs.push_back(0.0);
      r.slacks.push_back(0.0);
      r.residual_terms.push_back(0.0);
    }
  }
  return r;
}

std::pair<double, double> check_constrained_warmup(const Trajectory& t, double L) {
  if (t.N() < 2) throw std::out_of_range("check_constrained_warmup: need N >= 2");
  const double g = t.gamma;
  const double psi1 = eval_potential(PotentialKind::Psi, t, 1, Vec(t.dim(), 0.0));
  const double psi2 = eval_potential(PotentialKind::Psi, t, 2, Vec(t.dim(), 0.0));
  const double cap =
      2.0 * (1.0 + 2.0 * g * g * L * L) * g * g * linalg::norm2_sq(t.gs[0]);
  return {norm_slack(psi2, psi1), norm_slack(psi1, cap)};
}

const char* const kDecreaseCsvHeader = "k,potential,difference,slack,bound,bound_ratio";

void write_decrease_csv(std::ostream& os, const DecreaseReport& r) {
  os << kDecreaseCsvHeader << "\n";
  os.precision(17);
  for (size_t i = 0; i < r.ks.size(); ++i)
    os << r.ks[i] << "," << r.values[i] << "," << r.diffs[i] << "," << r.slacks[i] << ","
       << r.bounds[i] << "," << r.bound_ratios[i] << "\n";
}

}  // namespace vilab
