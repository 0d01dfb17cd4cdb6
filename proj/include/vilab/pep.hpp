#pragma once

#include <optional>
#include <string>

#include "vilab/methods.hpp"

namespace vilab {

enum class PepMethod { PEG, OG, ProjPEG, ProjOG };
enum class PepObjective { LastNormSq, DeltaNormSq, DeltaNormSqTilde, LastResidualSq };
enum class OperatorClass { MonotoneLipschitz, Cocoercive };

std::string pep_method_name(PepMethod m);
std::string pep_objective_name(PepObjective o);
std::string operator_class_name(OperatorClass c);

/// A sampled performance-estimation problem: worst case of the objective over
/// method-consistent samples of an operator class, normalized to unit initial
/// distance.
struct PepSpec {
  PepMethod method = PepMethod::PEG;
  double gamma = 1.0 / 3.0;
  double L = 1.0;
  int N = 1;
  PepObjective objective = PepObjective::LastNormSq;
  OperatorClass cls = OperatorClass::MonotoneLipschitz;
  std::optional<int> distance_t;  // keep only |i-j| <= t pairs (star always kept)
};

enum class ConstraintKind {
  Monotonicity,
  Lipschitz,
  Cocoercivity,
  Projection,
  StarOptimality,
  Normalization
};

constexpr int kStarIndex = -1;

struct ConstraintTag {
  ConstraintKind kind = ConstraintKind::Monotonicity;
  int i = 0, j = 0;  // iterate indices of the pair (kStarIndex for x*)
  std::string label;
};

enum class Sense { LessEq, Eq };

/// A point expressed in the Gram symbol basis.
struct LinExpr {
  Vec c;
  explicit LinExpr(int n = 0) : c(n, 0.0) {}
};

struct PepSample {
  std::string name;
  int index = 0;  // iterate index, kStarIndex for the solution
  bool in_set = true;
  LinExpr point;
  LinExpr value;
};

/// Gram-matrix SDP: maximize Tr(objective * G) over G PSD subject to
/// Tr(mat_i * G) <= / == rhs_i.
struct SdpProblem {
  int gram_dim = 0;
  std::vector<std::string> basis;
  Mat objective;
  struct Con {
    Mat mat;
    Sense sense = Sense::LessEq;
    double rhs = 0.0;
    ConstraintTag tag;
  };
  std::vector<Con> constraints;
  std::vector<PepSample> samples;  // provenance, used for reconstruction
  PepSpec spec;
  int horizon = 0;  // chain length actually built (N, or N+1 for DeltaNormSq)
};

SdpProblem build_pep(const PepSpec& spec);

/// Drops pair constraints with |i - j| > t; star pairs and the normalization
/// are always retained.
SdpProblem apply_distance_filter(const SdpProblem& p, int t);

// Sparse SDPA (.dat-s) export/import. The file encodes the problem in the
// format's dual reading: max Tr(F0 Y) s.t. Tr(Fi Y) = c_i, Y >= 0, with a
// diagonal slack block carrying the inequality senses.
void export_sdpa(const SdpProblem& p, const std::string& path);

struct SdpaData {
  int n_constraints = 0;
  std::vector<int> block_sizes;  // negative = diagonal block
  Vec c;
  struct Entry {
    int mat = 0, blk = 0, i = 0, j = 0;
    double v = 0.0;
  };
  std::vector<Entry> entries;
};
SdpaData import_sdpa(const std::string& path);
/// Rebuilds (matrices, senses, rhs) from parsed SDPA data; used by the
/// round-trip test.
SdpProblem sdpa_to_problem(const SdpaData& d);

struct ReconstructedInstance {
  int dimension = 0;
  std::vector<std::string> labels;
  std::vector<int> indices;
  std::vector<Vec> points;
  std::vector<Vec> values;
  std::vector<double> constraint_residuals;  // violation per original constraint
  double gram_error = 0.0;                   // ||V^T V - G||_F
};

/// Factorizes G = V^T V (eigendecomposition, rank cut at 1e-7 * lambda_max)
/// and maps columns back to sample points/values.
ReconstructedInstance reconstruct_instance(const Mat& G, const SdpProblem& p);

/// Replays the problem's own recursion with a concrete operator and start
/// point and returns the Gram matrix of the resulting basis vectors. Used to
/// check basis consistency and PEP soundness against real trajectories.
Mat pep_gram_from_run(const SdpProblem& p, const OperatorSpec& F, const FeasibleSet& set,
                      const Vec& x0, const Vec& xstar);

double objective_value(const SdpProblem& p, const Mat& G);
/// Signed violation of constraint `idx` at G (positive = violated).
double constraint_violation(const SdpProblem& p, int idx, const Mat& G);

}  // namespace vilab
