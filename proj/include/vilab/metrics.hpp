#pragma once

#include <iosfwd>
#include <optional>

#include "vilab/methods.hpp"

namespace vilab {

struct GapEstimate {
  double upper_bound = 0.0;
  double radius = 0.0;  // R used in the restricted gap
  std::optional<double> exact_value;
};

enum class GapMode { Unconstrained, Constrained };

/// ||x^{k+1} - x^k||^2 for 0 <= k < N.
double residual_sq(const Trajectory& t, int k);

// Radius constants used by the restricted gap function.
double radius_unconstrained(const Trajectory& t, const Vec& xstar);  // (sqrt(41)/3)||x0-x*||
double h0_sq(const Trajectory& t, const Vec& xstar, double L);       // 3||x0-x*||^2 + ||F(x0)||^2/(30 L^2)
double h0gamma_sq(const Trajectory& t, const Vec& xstar, double L);
double radius_constrained_simple(const Trajectory& t, const Vec& xstar, double L);

/// Computable upper bound on Gap_{F,R}(x^k). Unconstrained mode:
/// ||F(x^k)|| (||x^k-x*|| + R); constrained mode (k >= 1):
/// (1/gamma)||x^k - x^{k-1} - gamma (F(x^k) - F(xt^{k-1}))|| (||x^k-x*|| + H0).
GapEstimate gap_upper_bound(const Trajectory& t, int k, const Vec& xstar, GapMode mode,
                            double L);

/// Exact restricted gap for affine monotone F: the concave maximization of
/// <F(y), x - y> over {y in X : ||y - x*|| <= R} by projected gradient
/// ascent (tolerance 1e-8, iteration cap 1e5 with stall detection).
double exact_gap_affine(const OperatorSpec& F, const FeasibleSet& X, const Vec& x,
                        const Vec& xstar, double R);

// Theorem-rate reference curves (unit-free; multiply by instance constants).
double theorem1_norm_bound(double L, double gamma, double dist0_sq, int k);
double theorem1_gap_bound(double L, double gamma, double dist0_sq, int k);
double theorem2_residual_bound(double h0gamma_sq_value, int k);
double theorem2_gap_bound(double L, double h0_sq_value, int k);

void write_metrics_csv(std::ostream& os, const Trajectory& t, const Vec& xstar, double L,
                       GapMode mode);
extern const char* const kMetricsCsvHeader;

}  // namespace vilab
