#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "vilab/operators.hpp"

namespace vilab {

enum class MethodId { Gradient, EG, ProjEG, PEG, ProjPEG, OG, ProjOG, EAG };

std::string method_name(MethodId m);
std::optional<MethodId> method_from_name(const std::string& s);

struct DivergenceError : std::runtime_error {
  int index;
  explicit DivergenceError(int k)
      : std::runtime_error("iterate diverged at k=" + std::to_string(k)), index(k) {}
};

struct RunConfig {
  MethodId method = MethodId::PEG;
  double gamma = 0.1;
  int iterations = 0;  // N
  Vec x0;
  // EAG anchoring coefficients; defaults to beta_k = 1/(k+2).
  std::function<double(int)> anchor = [](int k) { return 1.0 / (k + 2); };
};

/// Full record of a method run. Every operator evaluation made (or needed by
/// the diagnostics) is stored once; nothing is recomputed downstream.
struct Trajectory {
  MethodId method = MethodId::PEG;
  double gamma = 0.0;
  bool unconstrained = true;
  std::vector<Vec> xs;   // x^0 .. x^N
  std::vector<Vec> xts;  // xtilde^0 .. xtilde^{N-1} (mirrors xs for OG)
  std::vector<Vec> gs;   // F(x^k)
  std::vector<Vec> gts;  // F(xtilde^k)
  Vec gt_init;           // F(xtilde^{-1}) = 0, stored explicitly

  int N() const { return static_cast<int>(xs.size()) - 1; }
  int dim() const { return xs.empty() ? 0 : static_cast<int>(xs.front().size()); }
  // F(xtilde^{k}) honoring the k = -1 convention.
  const Vec& gt(int k) const { return k < 0 ? gt_init : gts.at(k); }
};

Trajectory run(const OperatorSpec& F, const FeasibleSet& set, const RunConfig& cfg);

/// Reinterprets an unconstrained PEG trajectory's xtilde-sequence as an OG
/// trajectory; running OG from xtilde^0 with the same gamma reproduces it.
Trajectory og_from_peg(const Trajectory& peg);

struct EagDemoResult {
  Trajectory eag, peg, eg;
  double dist_eag = 0.0, dist_peg = 0.0, dist_eg = 0.0;         // to w^s = 0
  double manifold_eag = 0.0, manifold_peg = 0.0, manifold_eg = 0.0;
};

/// Example run on the deep-linear toy from w0 = offset*(1,1,1): EAG is pulled
/// into the spurious stationary point while PEG/EG escape it.
EagDemoResult run_eag_demo(double init_offset, double gamma = 0.05, int iters = 4000);

/// Finds a solution x* of the VI: a linear solve for affine unconstrained
/// operators, otherwise projected extragradient iterations down to `tol`
/// (validated via the VI residual before returning).
Vec solve_star(const OperatorSpec& F, const FeasibleSet& set, double tol = 1e-12,
               long max_iter = 4000000);

/// Natural residual ||x - proj(x - F(x))||.
double vi_residual(const OperatorSpec& F, const FeasibleSet& set, const Vec& x);

void write_trajectory_csv(std::ostream& os, const Trajectory& t);
extern const char* const kTrajectoryCsvColumns;  // schema prefix (coord counts vary)

}  // namespace vilab
