#pragma once

#include <optional>

#include "vilab/pep.hpp"

namespace vilab {

enum class SolveStatus { Solved, MaxIter, Unbounded, Infeasible };
std::string status_name(SolveStatus s);

struct SolverSettings {
  double tol = 1e-7;        // relative primal/dual residual target
  int max_iter = 200000;
  double over_relax = 1.5;  // 1.0 disables over-relaxation
  double mu0 = 1.0;         // initial penalty
  bool adaptive_mu = true;
  int check_every = 20;
};

struct SdpSolution {
  Mat G;                  // primal matrix (PSD up to tolerance)
  Vec duals;              // multipliers of the max-form (>= 0 on inequalities)
  double objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
  int iterations = 0;
};

/// Embedded dense solver for max Tr(M0 G) s.t. Tr(Mi G) <= / == rhs_i,
/// G PSD: a first-order operator-splitting iteration alternating the affine
/// constraint projection (cached Cholesky of A A^T) with the PSD cone
/// projection (symmetric eigendecomposition, negative eigenvalues clipped).
SdpSolution solve(const SdpProblem& p, const SolverSettings& settings = {});

struct CertifiedBound {
  bool ok = false;
  double value = 0.0;
  Vec duals;
  double psd_margin = 0.0;  // min eigenvalue of the dual slack
};

/// Validates duals as a rigorous upper-bound certificate: forms
/// Z = sum(lambda_i M_i) - M0, requires lambda >= 0 on inequalities and
/// Z PSD; a slightly indefinite Z is repaired by inflating the multiplier of
/// the normalization constraint when possible.
CertifiedBound certify_upper_bound(const SdpProblem& p, const Vec& duals);

enum class DeltaSign { NonpositiveCertified, PositiveWitnessed };

struct DeltaSignResult {
  DeltaSign verdict = DeltaSign::NonpositiveCertified;
  double objective = 0.0;
  CertifiedBound cert;
  std::optional<ReconstructedInstance> witness;
};

struct InconclusiveDelta : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Decides the sign of a Delta-objective PEP: certified nonpositive via
/// duals, or (cocoercive class) positive with a reconstructed witness whose
/// replayed samples confirm the increase.
DeltaSignResult delta_sign(const PepSpec& spec, const SolverSettings& settings = {});

}  // namespace vilab
