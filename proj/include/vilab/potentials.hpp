#pragma once

#include <iosfwd>
#include <optional>

#include "vilab/methods.hpp"

namespace vilab {

enum class PotentialKind { Lemma1Energy, UnconstrainedPhi, Psi, ConstrainedPhi };

/// Per-k record of a potential-decrease check. Slacks are normalized by
/// (1 + |lhs| + |rhs|); `max_violation` is the most negative normalized
/// slack over the declared k-range (>= -1e-10 expected).
struct DecreaseReport {
  PotentialKind kind = PotentialKind::UnconstrainedPhi;
  bool in_theorem_range = true;
  std::vector<int> ks;
  std::vector<double> values;          // potential at k
  std::vector<double> diffs;           // value(k) - value(k+1)
  std::vector<double> slacks;          // normalized decrease slack at k
  std::vector<double> residual_terms;  // raw (unnormalized) slacks
  std::vector<double> bounds;          // theorem rate bound at k
  std::vector<double> bound_ratios;    // measured quantity / bound
  double max_violation = 0.0;
  int worst_k = -1;
};

double eval_potential(PotentialKind kind, const Trajectory& t, int k, const Vec& xstar);

/// Decrease slack of the unconstrained energy inequality at k >= 1
/// (normalized; >= -1e-10 expected for monotone L-Lipschitz runs).
double check_lemma1(const Trajectory& t, int k, double L);

/// Decrease slack of the constrained Psi inequality at k >= 1.
double check_lemma2(const Trajectory& t, int k, double L);

struct GidelSlacks {
  double slack17 = 0.0;                 // valid for k >= 1
  std::optional<double> slack18;        // valid for k >= 2
};
GidelSlacks check_gidel_lemmas(const Trajectory& t, int k, double L, const Vec& xstar);

DecreaseReport check_theorem_decrease(PotentialKind kind, const Trajectory& t,
                                      const Vec& xstar, double L);

/// Warm-up aggregate for the constrained potential: normalized slacks of
/// Psi_2 <= Psi_1 and Psi_1 <= 2(1 + 2 gamma^2 L^2) gamma^2 ||F(x^0)||^2.
std::pair<double, double> check_constrained_warmup(const Trajectory& t, double L);

void write_decrease_csv(std::ostream& os, const DecreaseReport& r);
extern const char* const kDecreaseCsvHeader;

}  // namespace vilab
