#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "vilab/linalg.hpp"

namespace vilab::certify {

// Exact rational arithmetic throughout; no floating point in this module.
using Rat = boost::multiprecision::cpp_rational;

/// Polynomial in q = gamma * L with rational coefficients (c[i] * q^i).
struct GammaPoly {
  std::vector<Rat> c;

  GammaPoly() = default;
  GammaPoly(const Rat& constant) : c{constant} { trim(); }  // NOLINT(implicit)
  GammaPoly(long num, long den) : c{Rat(num, den)} { trim(); }

  static GammaPoly q(int degree = 1, const Rat& coeff = 1);

  void trim();
  bool zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  Rat eval(const Rat& x) const;
  GammaPoly derivative() const;
};

GammaPoly operator+(const GammaPoly& a, const GammaPoly& b);
GammaPoly operator-(const GammaPoly& a, const GammaPoly& b);
GammaPoly operator-(const GammaPoly& a);
GammaPoly operator*(const GammaPoly& a, const GammaPoly& b);
bool operator==(const GammaPoly& a, const GammaPoly& b);
std::string to_string(const GammaPoly& p);

/// Exact divmod: a = q*b + r with deg r < deg b.
std::pair<GammaPoly, GammaPoly> divmod(const GammaPoly& a, const GammaPoly& b);
GammaPoly poly_gcd(GammaPoly a, GammaPoly b);  // monic

/// Exact decision of p(x) >= 0 for all x in [lo, hi]: endpoint signs plus a
/// Sturm-sequence count of odd-multiplicity roots in the interior (square-free
/// decomposition by Yun's algorithm).
bool poly_nonneg_on(const GammaPoly& p, const Rat& lo, const Rat& hi);

struct SymbolBasis {
  std::vector<std::string> names;
  int size() const { return static_cast<int>(names.size()); }
  int index(const std::string& name) const;
};

/// Vector-valued linear combination of basis symbols with GammaPoly
/// coefficients.
struct LinForm {
  std::vector<GammaPoly> coef;
  explicit LinForm(int n = 0) : coef(n) {}
};

LinForm symbol(const SymbolBasis& basis, const std::string& name);
LinForm operator+(const LinForm& a, const LinForm& b);
LinForm operator-(const LinForm& a, const LinForm& b);
LinForm operator*(const GammaPoly& s, const LinForm& a);

/// Symmetric matrix of GammaPoly entries over a SymbolBasis, representing a
/// quadratic form in the symbols.
struct QuadForm {
  int n = 0;
  std::vector<GammaPoly> m;  // row-major n*n, kept symmetric
  explicit QuadForm(int dim = 0) : n(dim), m(static_cast<size_t>(dim) * dim) {}
  GammaPoly& at(int i, int j) { return m[static_cast<size_t>(i) * n + j]; }
  const GammaPoly& at(int i, int j) const { return m[static_cast<size_t>(i) * n + j]; }
};

QuadForm inner(const LinForm& a, const LinForm& b);  // <a, b>
QuadForm norm_sq(const LinForm& a);
QuadForm operator+(const QuadForm& a, const QuadForm& b);
QuadForm operator-(const QuadForm& a, const QuadForm& b);
QuadForm operator*(const GammaPoly& s, const QuadForm& a);
bool operator==(const QuadForm& a, const QuadForm& b);

struct WeightedConstraint {
  QuadForm form;  // normalized ">= 0" form
  GammaPoly weight;
  std::string note;
};

struct SquareTerm {
  LinForm form;
  GammaPoly coeff;
  std::string note;
};

/// A range claim: poly >= 0 on (0, hi]; `in_q_squared` means the polynomial
/// and endpoint live in the variable s = q^2 (used to state irrational
/// q-thresholds like sqrt(2)/3 exactly).
struct SignClaim {
  GammaPoly poly;
  Rat hi;
  bool in_q_squared = false;
  std::string note;
};

/// target == sum_i weight_i * constraint_i + sum_j coeff_j * ||form_j||^2,
/// coefficient by coefficient, with all weights/coeffs nonnegative on
/// (0, q_hi].
struct Certificate {
  std::string name;
  SymbolBasis basis;
  std::vector<WeightedConstraint> constraints;
  std::vector<SquareTerm> squares;
  QuadForm target;
  Rat q_hi = 1;
  std::vector<SignClaim> claims;
};

struct VerifyResult {
  bool valid = true;
  std::string detail;
  int bad_row = -1, bad_col = -1, bad_degree = -1;
};

VerifyResult verify_certificate(const Certificate& cert);

Certificate lemma1_certificate();            // weights 2, 3
Certificate lemma1_certificate_perturbed();  // weights 2, 31/10: must fail
Certificate lemma2_certificate();            // weights 4q, 5q^2, 4, 2, 2, 2

/// The three standard norm identities, verified as exact
/// identities-plus-squares for rational alpha > 0.
VerifyResult verify_appendix_a(const Rat& alpha);

std::string certificate_report(const Certificate& cert, const VerifyResult& res);

// Floating-point evaluation helpers (cross-validation lives in the tests).
Vec eval_linform(const LinForm& f, const std::vector<Vec>& assignment, double q);
double eval_quadform(const QuadForm& f, const std::vector<Vec>& assignment, double q);

}  // namespace vilab::certify
