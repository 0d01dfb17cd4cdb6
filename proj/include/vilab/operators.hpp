#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "vilab/linalg.hpp"

namespace vilab {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotMonotone : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedOperator : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class OpKind { Zero, AffineMonotone, BilinearSaddle, ScaledRotation, DeepLinearToy, Sampled };

/// An operator F together with a Lipschitz constant. Instances are immutable
/// after construction and evaluation is pure, so they can be shared freely
/// across workers.
class OperatorSpec {
 public:
  static OperatorSpec zero(int dim);
  // F(x) = A x + b. Requires A + A^T PSD (min eigenvalue >= -1e-10);
  // violating matrices are rejected, not repaired.
  static OperatorSpec affine(Mat A, Vec b);
  // F(x, y) = (B y + c1, -B^T x + c2); the linear part is skew.
  static OperatorSpec bilinear(Mat B, Vec c1, Vec c2);
  // F(x) = omega * [[0, 1], [-1, 0]] x on R^2.
  static OperatorSpec scaled_rotation(double omega);
  // Gradient of f(w) = (y - w3 w2 w1 x)^2; non-monotone by design.
  static OperatorSpec deep_linear_toy(double x_data, double y_data);
  // Stored (point, value) pairs only; no interpolation is attempted.
  static OperatorSpec sampled(std::vector<std::pair<Vec, Vec>> pts, double lipschitz = 0.0);

  OpKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double lipschitz() const { return lipschitz_; }
  /// False for DeepLinearToy and Sampled (unknown is treated as false).
  bool monotone() const { return monotone_; }

  Vec operator()(const Vec& x) const;

  // Affine-like access: the linear part A and offset b of F(x) = A x + b.
  // Valid for Zero, AffineMonotone, BilinearSaddle, ScaledRotation.
  const Mat& linear() const;
  const Vec& offset() const;
  const std::vector<std::pair<Vec, Vec>>& samples() const { return samples_; }
  double toy_x() const { return toy_x_; }
  double toy_y() const { return toy_y_; }

 private:
  OperatorSpec() = default;
  OpKind kind_ = OpKind::Zero;
  int dim_ = 0;
  double lipschitz_ = 0.0;
  bool monotone_ = true;
  Mat A_;
  Vec b_;
  double toy_x_ = 0.0, toy_y_ = 0.0;
  std::vector<std::pair<Vec, Vec>> samples_;
};

enum class SetKind { Unconstrained, Box, Ball, Halfspace, Product };

/// A closed convex feasible set with an exact Euclidean projection.
class FeasibleSet {
 public:
  static FeasibleSet unconstrained(int dim);
  static FeasibleSet box(Vec lo, Vec hi);
  static FeasibleSet ball(Vec center, double radius);
  static FeasibleSet halfspace(Vec normal, double offset);  // <normal, x> <= offset
  static FeasibleSet product(std::vector<FeasibleSet> parts);

  SetKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_unconstrained() const { return kind_ == SetKind::Unconstrained; }
  bool contains(const Vec& x, double tol = 1e-12) const;

  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  const Vec& center() const { return center_; }
  double radius() const { return radius_; }
  const Vec& normal() const { return normal_; }
  double offset() const { return offset_; }
  const std::vector<FeasibleSet>& parts() const { return parts_; }

 private:
  FeasibleSet() = default;
  SetKind kind_ = SetKind::Unconstrained;
  int dim_ = 0;
  Vec lo_, hi_;
  Vec center_;
  double radius_ = 0.0;
  Vec normal_;
  double offset_ = 0.0;
  std::vector<FeasibleSet> parts_;
};

Vec evaluate(const OperatorSpec& F, const Vec& x);
Vec project(const FeasibleSet& set, const Vec& x);

/// Seeded affine monotone test instance: A = f*S + (1-f)*P with S skew and
/// P = Q diag(U[0,1]) Q^T, rescaled so the spectral norm equals L exactly.
/// The offset b is random with norm of order L. Deterministic per seed.
OperatorSpec random_monotone(uint64_t seed, int d, double L, double skew_fraction = 0.5);

/// Spectral norm of the linear part for affine-like kinds; throws
/// UnsupportedOperator for DeepLinearToy and Sampled.
double lipschitz_estimate(const OperatorSpec& F);

/// Small deterministic RNG facade (uniform/gaussian built from raw mt19937_64
/// draws so sequences do not depend on the standard library's distributions).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}
  double uniform();                 // [0, 1)
  double uniform(double a, double b);
  double gaussian();                // Box-Muller
  Vec vec_uniform(int d, double a, double b);
  Vec vec_gaussian(int d);

 private:
  uint64_t next_raw();
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vilab
