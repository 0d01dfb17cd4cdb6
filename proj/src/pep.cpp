#include "vilab/pep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vilab {

std::string pep_method_name(PepMethod m) {
  switch (m) {
    case PepMethod::PEG: return "peg";
    case PepMethod::OG: return "og";
    case PepMethod::ProjPEG: return "proj-peg";
    case PepMethod::ProjOG: return "proj-og";
  }
  return "?";
}

std::string pep_objective_name(PepObjective o) {
  switch (o) {
    case PepObjective::LastNormSq: return "last_norm_sq";
    case PepObjective::DeltaNormSq: return "delta_norm_sq";
    case PepObjective::DeltaNormSqTilde: return "delta_norm_sq_tilde";
    case PepObjective::LastResidualSq: return "last_residual_sq";
  }
  return "?";
}

std::string operator_class_name(OperatorClass c) {
  return c == OperatorClass::MonotoneLipschitz ? "monotone_lipschitz" : "cocoercive";
}

namespace {

LinExpr operator-(const LinExpr& a, const LinExpr& b) {
  LinExpr r(static_cast<int>(a.c.size()));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

LinExpr axpy_expr(const LinExpr& a, double s, const LinExpr& b) {
  LinExpr r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += s * b.c[i];
  return r;
}

bool same_expr(const LinExpr& a, const LinExpr& b) {
  for (size_t i = 0; i < a.c.size(); ++i)
    if (a.c[i] != b.c[i]) return false;
  return true;
}

// (a b^T + b a^T)/2 so that Tr(M G) = <a, b> in the Gram geometry.
Mat sym_outer(const LinExpr& a, const LinExpr& b) {
  const int n = static_cast<int>(a.c.size());
  Mat M(n, n);
  for (int i = 0; i < n; ++i) {
    if (a.c[i] == 0.0 && b.c[i] == 0.0) continue;
    for (int j = 0; j < n; ++j)
      M(i, j) = 0.5 * (a.c[i] * b.c[j] + b.c[i] * a.c[j]);
  }
  return M;
}

Mat outer(const LinExpr& a) { return sym_outer(a, a); }

struct ProjectionRecord {
  int index = 0;          // iterate index of the projected point
  std::string name;
  LinExpr output;         // the projected point (a basis symbol)
  LinExpr pre;            // the pre-projection point
};

struct Builder {
  PepSpec spec;
  int H = 0;  // horizon of the built chain
  std::vector<std::string> basis;
  std::vector<PepSample> samples;
  std::vector<ProjectionRecord> projections;

  int sym(const std::string& name) {
    for (size_t i = 0; i < basis.size(); ++i)
      if (basis[i] == name) return static_cast<int>(i);
    throw std::logic_error("unknown symbol " + name);
  }
  LinExpr e(const std::string& name) {
    LinExpr x(static_cast<int>(basis.size()));
    x.c[sym(name)] = 1.0;
    return x;
  }
  LinExpr zero() const { return LinExpr(static_cast<int>(basis.size())); }
};

// Unconstrained PEG chain: basis (x*, x0, g0, gt1, g1, ..., gtH, gH); the
// iterates are substituted through the recursion
//   x1 = x0 - g*g0, xt^k = x^k - g*gt^{k-1}, x^{k+1} = x^k - g*gt^k.
void build_peg(Builder& b) {
  const int H = b.H;
  b.basis = {"x*", "x0", "g0"};
  for (int k = 1; k <= H; ++k) {
    b.basis.push_back("gt" + std::to_string(k));
    b.basis.push_back("g" + std::to_string(k));
  }
  const double g = b.spec.gamma;
  std::vector<LinExpr> x(H + 1, b.zero());
  x[0] = b.e("x0");
  auto gt = [&](int k) { return k == 0 ? b.e("g0") : b.e("gt" + std::to_string(k)); };
  for (int k = 1; k <= H; ++k) x[k] = axpy_expr(x[k - 1], -g, gt(k - 1));
  b.samples.push_back({"x*", kStarIndex, true, b.e("x*"), b.zero()});
  for (int k = 0; k <= H; ++k)
    b.samples.push_back({"x" + std::to_string(k), k, true, x[k],
                         b.e(k == 0 ? "g0" : "g" + std::to_string(k))});
  // xt^0 = x^0 is aliased away; xt^k for k >= 1.
  for (int k = 1; k <= H; ++k)
    b.samples.push_back({"xt" + std::to_string(k), k, true,
                         axpy_expr(x[k], -g, gt(k - 1)), gt(k)});
}

// OG chain as in the OG-form PEP: basis (x*, xt0, gt0, ..., gtH) with
//   xt1 = xt0 - g*gt0, xt^{k+1} = xt^k - 2g*gt^k + g*gt^{k-1}.
void build_og(Builder& b) {
  const int H = b.H;
  b.basis = {"x*", "xt0", "gt0"};
  for (int k = 1; k <= H; ++k) b.basis.push_back("gt" + std::to_string(k));
  const double g = b.spec.gamma;
  std::vector<LinExpr> xt(H + 1, b.zero());
  xt[0] = b.e("xt0");
  auto gt = [&](int k) { return b.e("gt" + std::to_string(k)); };
  if (H >= 1) xt[1] = axpy_expr(xt[0], -g, gt(0));
  for (int k = 1; k < H; ++k)
    xt[k + 1] = axpy_expr(axpy_expr(xt[k], -2.0 * g, gt(k)), g, gt(k - 1));
  b.samples.push_back({"x*", kStarIndex, true, b.e("x*"), b.zero()});
  for (int k = 0; k <= H; ++k)
    b.samples.push_back({"xt" + std::to_string(k), k, true, xt[k], gt(k)});
}

// Constrained PEG chain: every projection output is a fresh symbol and the
// solution carries a free value g* (constrained via <g*, y - x*> >= 0).
void build_proj_peg(Builder& b) {
  const int H = b.H;
  b.basis = {"x*", "g*", "x0", "g0"};
  for (int k = 1; k <= H; ++k) {
    b.basis.push_back("xt" + std::to_string(k));
    b.basis.push_back("gt" + std::to_string(k));
    b.basis.push_back("x" + std::to_string(k));
    b.basis.push_back("g" + std::to_string(k));
  }
  const double g = b.spec.gamma;
  auto x = [&](int k) { return b.e("x" + std::to_string(k)); };
  auto gt = [&](int k) { return k == 0 ? b.e("g0") : b.e("gt" + std::to_string(k)); };
  b.samples.push_back({"x*", kStarIndex, true, b.e("x*"), b.e("g*")});
  for (int k = 0; k <= H; ++k)
    b.samples.push_back({"x" + std::to_string(k), k, true, x(k),
                         b.e(k == 0 ? "g0" : "g" + std::to_string(k))});
  for (int k = 1; k <= H; ++k)
    b.samples.push_back(
        {"xt" + std::to_string(k), k, true, b.e("xt" + std::to_string(k)), gt(k)});
  // x^k = proj[x^{k-1} - g*gt^{k-1}], xt^k = proj[x^k - g*gt^{k-1}].
  for (int k = 1; k <= H; ++k) {
    b.projections.push_back({k, "x" + std::to_string(k), x(k),
                             axpy_expr(x(k - 1), -g, gt(k - 1))});
    b.projections.push_back({k, "xt" + std::to_string(k), b.e("xt" + std::to_string(k)),
                             axpy_expr(x(k), -g, gt(k - 1))});
  }
}

// Constrained OG chain (Proj-OG): only xtilde points are projected/sampled;
// x^{k+1} = xt^k + g(gt^{k-1} - gt^k) stays a linear expression (it is not
// projected, exactly as the recursion is stated).
void build_proj_og(Builder& b) {
  const int H = b.H;
  b.basis = {"x*", "g*", "x0", "gt0"};
  for (int k = 1; k <= H; ++k) {
    b.basis.push_back("xt" + std::to_string(k));
    b.basis.push_back("gt" + std::to_string(k));
  }
  const double g = b.spec.gamma;
  auto xt = [&](int k) { return k == 0 ? b.e("x0") : b.e("xt" + std::to_string(k)); };
  auto gt = [&](int k) { return b.e("gt" + std::to_string(k)); };
  std::vector<LinExpr> x(H + 1, b.zero());
  x[0] = b.e("x0");
  if (H >= 1) x[1] = axpy_expr(x[0], -g, gt(0));  // F(xt^{-1}) = 0 convention
  for (int k = 1; k < H; ++k)
    x[k + 1] = axpy_expr(axpy_expr(xt(k), g, gt(k - 1)), -g, gt(k));
  b.samples.push_back({"x*", kStarIndex, true, b.e("x*"), b.e("g*")});
  for (int k = 0; k <= H; ++k)
    b.samples.push_back({"xt" + std::to_string(k), k, true, xt(k), gt(k)});
  for (int k = 1; k <= H; ++k)
    b.projections.push_back(
        {k, "xt" + std::to_string(k), xt(k), axpy_expr(x[k], -g, gt(k - 1))});
}

}  // namespace

SdpProblem build_pep(const PepSpec& spec) {
  if (spec.N < 1) throw std::invalid_argument("build_pep: N >= 1 required");
  if (spec.gamma <= 0.0 || spec.L <= 0.0)
    throw std::invalid_argument("build_pep: gamma and L must be positive");
  if (spec.distance_t && *spec.distance_t < 1)
    throw std::invalid_argument("build_pep: distance_t >= 1 required");
  const bool og_form = spec.method == PepMethod::OG || spec.method == PepMethod::ProjOG;
  if (og_form && spec.objective == PepObjective::DeltaNormSq)
    throw std::invalid_argument("build_pep: DeltaNormSq needs the x-sample chain");

  Builder b;
  b.spec = spec;
  b.H = spec.N + (spec.objective == PepObjective::DeltaNormSq ? 1 : 0);
  switch (spec.method) {
    case PepMethod::PEG: build_peg(b); break;
    case PepMethod::OG: build_og(b); break;
    case PepMethod::ProjPEG: build_proj_peg(b); break;
    case PepMethod::ProjOG: build_proj_og(b); break;
  }

  SdpProblem p;
  p.spec = spec;
  p.horizon = b.H;
  p.basis = b.basis;
  p.gram_dim = static_cast<int>(b.basis.size());
  p.samples = b.samples;

  const double L = spec.L;
  // Interpolation constraints for every retained sample pair.
  const int S = static_cast<int>(b.samples.size());
  for (int a = 0; a < S; ++a)
    for (int c = a + 1; c < S; ++c) {
      const PepSample& P = b.samples[a];
      const PepSample& Q = b.samples[c];
      if (same_expr(P.point, Q.point)) continue;  // degenerate duplicate pair
      LinExpr dx = P.point - Q.point;
      LinExpr dg = P.value - Q.value;
      const std::string pair_label = "(" + P.name + "," + Q.name + ")";
      if (spec.cls == OperatorClass::MonotoneLipschitz) {
        p.constraints.push_back(
            {(-1.0) * sym_outer(dg, dx), Sense::LessEq, 0.0,
             {ConstraintKind::Monotonicity, P.index, Q.index, "mono" + pair_label}});
        p.constraints.push_back(
            {outer(dg) - (L * L) * outer(dx), Sense::LessEq, 0.0,
             {ConstraintKind::Lipschitz, P.index, Q.index, "lip" + pair_label}});
      } else {
        p.constraints.push_back(
            {outer(dg) - L * sym_outer(dg, dx), Sense::LessEq, 0.0,
             {ConstraintKind::Cocoercivity, P.index, Q.index, "coco" + pair_label}});
      }
    }

  const bool constrained =
      spec.method == PepMethod::ProjPEG || spec.method == PepMethod::ProjOG;
  if (constrained) {
    // VI optimality of x*: <g*, y - x*> >= 0 for every sampled y in X.
    const PepSample& star = b.samples.front();
    for (int c = 1; c < S; ++c) {
      const PepSample& Y = b.samples[c];
      if (!Y.in_set) continue;
      p.constraints.push_back(
          {(-1.0) * sym_outer(star.value, Y.point - star.point), Sense::LessEq, 0.0,
           {ConstraintKind::StarOptimality, kStarIndex, Y.index, "star_opt(" + Y.name + ")"}});
    }
    // Projection property <pre - out, y - out> <= 0 for all sampled y in X.
    for (const auto& pr : b.projections)
      for (int c = 0; c < S; ++c) {
        const PepSample& Y = b.samples[c];
        if (!Y.in_set || same_expr(Y.point, pr.output)) continue;
        p.constraints.push_back(
            {sym_outer(pr.pre - pr.output, Y.point - pr.output), Sense::LessEq, 0.0,
             {ConstraintKind::Projection, pr.index, Y.index,
              "proj(" + pr.name + ";" + Y.name + ")"}});
      }
  }

  // Normalization: unit initial distance.
  {
    LinExpr d = b.samples[1].point - b.samples[0].point;  // x0 (or xt0) minus x*
    p.constraints.push_back({outer(d), Sense::LessEq, 1.0,
                             {ConstraintKind::Normalization, kStarIndex, 0, "norm"}});
  }

  // Objective.
  auto sample_value = [&](const std::string& name) -> const LinExpr& {
    for (const auto& s : p.samples)
      if (s.name == name) return s.value;
    throw std::logic_error("objective sample missing: " + name);
  };
  auto sample_point = [&](const std::string& name) -> const LinExpr& {
    for (const auto& s : p.samples)
      if (s.name == name) return s.point;
    throw std::logic_error("objective sample missing: " + name);
  };
  const int H = b.H;
  const std::string xh = (og_form ? "xt" : "x") + std::to_string(H);
  const std::string xh1 = (og_form ? "xt" : "x") + std::to_string(H - 1);
  switch (spec.objective) {
    case PepObjective::LastNormSq:
      p.objective = outer(sample_value(xh));
      break;
    case PepObjective::DeltaNormSq:  // H = N + 1
      p.objective = outer(sample_value(xh)) - outer(sample_value(xh1));
      break;
    case PepObjective::DeltaNormSqTilde: {
      // xtilde^0 aliases x^0 on the PEG chain.
      const std::string prev = (!og_form && H - 1 == 0) ? "x0" : "xt" + std::to_string(H - 1);
      p.objective =
          outer(sample_value("xt" + std::to_string(H))) - outer(sample_value(prev));
      break;
    }
    case PepObjective::LastResidualSq:
      p.objective = outer(sample_point(xh) - sample_point(xh1));
      break;
  }

  if (spec.distance_t) return apply_distance_filter(p, *spec.distance_t);
  return p;
}

SdpProblem apply_distance_filter(const SdpProblem& p, int t) {
  if (t < 1) throw std::invalid_argument("apply_distance_filter: t >= 1 required");
  SdpProblem q = p;
  q.spec.distance_t = t;
  q.constraints.clear();
  for (const auto& c : p.constraints) {
    const auto& tag = c.tag;
    const bool keep = tag.kind == ConstraintKind::Normalization ||
                      tag.i == kStarIndex || tag.j == kStarIndex ||
                      std::abs(tag.i - tag.j) <= t;
    if (keep) q.constraints.push_back(c);
  }
  return q;
}

double objective_value(const SdpProblem& p, const Mat& G) {
  double s = 0.0;
  for (int i = 0; i < p.gram_dim; ++i)
    for (int j = 0; j < p.gram_dim; ++j) s += p.objective(i, j) * G(i, j);
  return s;
}

double constraint_violation(const SdpProblem& p, int idx, const Mat& G) {
  const auto& c = p.constraints.at(idx);
  double s = 0.0;
  for (int i = 0; i < p.gram_dim; ++i)
    for (int j = 0; j < p.gram_dim; ++j) s += c.mat(i, j) * G(i, j);
  const double over = s - c.rhs;
  return c.sense == Sense::LessEq ? over : std::fabs(over);
}

void export_sdpa(const SdpProblem& p, const std::string& path) {
  if (p.constraints.empty())
    throw std::invalid_argument("export_sdpa: empty constraint list");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("export_sdpa: cannot open " + path);
  const int m = static_cast<int>(p.constraints.size());
  int n_ineq = 0;
  std::vector<int> slack_slot(m, 0);
  for (int i = 0; i < m; ++i)
    if (p.constraints[i].sense == Sense::LessEq) slack_slot[i] = ++n_ineq;

  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };

  os << "\"sampled performance estimation problem (" << pep_method_name(p.spec.method)
     << ", " << pep_objective_name(p.spec.objective) << ", N=" << p.spec.N << ")\n";
  os << m << "\n";
  os << (n_ineq > 0 ? 2 : 1) << "\n";
  os << p.gram_dim;
  if (n_ineq > 0) os << " -" << n_ineq;
  os << "\n";
  for (int i = 0; i < m; ++i) os << (i ? " " : "") << fmt(p.constraints[i].rhs);
  os << "\n";

  auto emit = [&](int matno, const Mat& M, int blk) {
    for (int i = 0; i < M.rows; ++i)
      for (int j = i; j < M.cols; ++j)
        if (M(i, j) != 0.0)
          os << matno << " " << blk << " " << i + 1 << " " << j + 1 << " " << fmt(M(i, j))
             << "\n";
  };
  emit(0, p.objective, 1);
  for (int i = 0; i < m; ++i) {
    emit(i + 1, p.constraints[i].mat, 1);
    if (slack_slot[i] > 0)
      os << i + 1 << " 2 " << slack_slot[i] << " " << slack_slot[i] << " 1\n";
  }
}

SdpaData import_sdpa(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("import_sdpa: cannot open " + path);
  SdpaData d;
  std::string line;
  // Skip comment lines, then read header fields tolerant of {} , separators.
  auto next_data_line = [&]() -> std::string {
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      if (line[0] == '"' || line[0] == '*') continue;
      return line;
    }
    throw std::runtime_error("import_sdpa: truncated file");
  };
  auto strip = [](std::string s) {
    for (auto& ch : s)
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    return s;
  };
  d.n_constraints = std::stoi(next_data_line());
  const int nblocks = std::stoi(next_data_line());
  {
    std::istringstream ss(strip(next_data_line()));
    int v;
    while (ss >> v) d.block_sizes.push_back(v);
    if (static_cast<int>(d.block_sizes.size()) != nblocks)
      throw std::runtime_error("import_sdpa: block size count mismatch");
  }
  {
    std::istringstream ss(strip(next_data_line()));
    double v;
    while (ss >> v) d.c.push_back(v);
    if (static_cast<int>(d.c.size()) != d.n_constraints)
      throw std::runtime_error("import_sdpa: rhs count mismatch");
  }
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '"' || line[0] == '*') continue;
    std::istringstream ss(line);
    SdpaData::Entry e;
    if (ss >> e.mat >> e.blk >> e.i >> e.j >> e.v) d.entries.push_back(e);
  }
  return d;
}

SdpProblem sdpa_to_problem(const SdpaData& d) {
  if (d.block_sizes.empty()) throw std::runtime_error("sdpa_to_problem: no blocks");
  const int n = d.block_sizes[0];
  if (n <= 0) throw std::runtime_error("sdpa_to_problem: first block must be dense");
  SdpProblem p;
  p.gram_dim = n;
  p.objective = Mat(n, n);
  p.constraints.resize(d.n_constraints);
  for (auto& c : p.constraints) {
    c.mat = Mat(n, n);
    c.sense = Sense::Eq;
  }
  for (int i = 0; i < d.n_constraints; ++i) p.constraints[i].rhs = d.c[i];
  for (const auto& e : d.entries) {
    if (e.blk == 1) {
      Mat& M = e.mat == 0 ? p.objective : p.constraints[e.mat - 1].mat;
      M(e.i - 1, e.j - 1) = e.v;
      M(e.j - 1, e.i - 1) = e.v;
    } else if (e.mat >= 1) {
      p.constraints[e.mat - 1].sense = Sense::LessEq;  // slack entry
    }
  }
  return p;
}

ReconstructedInstance reconstruct_instance(const Mat& G, const SdpProblem& p) {
  if (G.rows != p.gram_dim || G.cols != p.gram_dim)
    throw std::invalid_argument("reconstruct_instance: Gram size mismatch");
  Vec vals;
  Mat V;
  linalg::jacobi_eigh(G, vals, V);
  const double lmax = std::max(vals.empty() ? 0.0 : vals.back(), 0.0);
  if (!vals.empty() && vals.front() < -1e-8 * std::max(1.0, lmax))
    throw std::invalid_argument("reconstruct_instance: G indefinite beyond tolerance");
  std::vector<int> keep;
  for (int i = p.gram_dim - 1; i >= 0; --i)
    if (vals[i] > 1e-7 * lmax && vals[i] > 0.0) keep.push_back(i);
  ReconstructedInstance r;
  r.dimension = std::max<int>(1, static_cast<int>(keep.size()));
  // Factor rows: sqrt(lambda) * eigvec^T, dominant direction first.
  Mat F(r.dimension, p.gram_dim);
  for (size_t d = 0; d < keep.size(); ++d) {
    const double s = std::sqrt(vals[keep[d]]);
    for (int j = 0; j < p.gram_dim; ++j) F(static_cast<int>(d), j) = s * V(j, keep[d]);
  }
  Mat Grec;
  {
    Mat Ft = F.transposed();
    linalg::ref::gemm(Ft, F, Grec);
  }
  r.gram_error = linalg::frob_norm(Grec - G);

  auto apply = [&](const LinExpr& ex) {
    Vec v(r.dimension, 0.0);
    for (int j = 0; j < p.gram_dim; ++j)
      if (ex.c[j] != 0.0)
        for (int i = 0; i < r.dimension; ++i) v[i] += ex.c[j] * F(i, j);
    return v;
  };
  for (const auto& s : p.samples) {
    r.labels.push_back(s.name);
    r.indices.push_back(s.index);
    r.points.push_back(apply(s.point));
    r.values.push_back(apply(s.value));
  }
  for (size_t i = 0; i < p.constraints.size(); ++i)
    r.constraint_residuals.push_back(
        constraint_violation(p, static_cast<int>(i), Grec));
  return r;
}

Mat pep_gram_from_run(const SdpProblem& p, const OperatorSpec& F, const FeasibleSet& set,
                      const Vec& x0, const Vec& xstar) {
  const int H = p.horizon;
  const double g = p.spec.gamma;
  const int d = F.dim();
  std::vector<Vec> cols(p.gram_dim, Vec(d, 0.0));
  auto put = [&](const std::string& name, const Vec& v) {
    for (int i = 0; i < p.gram_dim; ++i)
      if (p.basis[i] == name) {
        cols[i] = v;
        return;
      }
    throw std::logic_error("pep_gram_from_run: missing symbol " + name);
  };
  auto stepv = [&](const Vec& base, double s, const Vec& dir) {
    Vec y = base;
    linalg::axpy(s, dir, y);
    return y;
  };

  put("x*", xstar);
  switch (p.spec.method) {
    case PepMethod::PEG: {
      std::vector<Vec> x(H + 1), gt(H + 1), gv(H + 1);
      x[0] = x0;
      gv[0] = F(x[0]);
      gt[0] = gv[0];
      put("x0", x[0]);
      put("g0", gv[0]);
      for (int k = 1; k <= H; ++k) {
        x[k] = stepv(x[k - 1], -g, gt[k - 1]);
        Vec xt = stepv(x[k], -g, gt[k - 1]);
        gt[k] = F(xt);
        gv[k] = F(x[k]);
        put("gt" + std::to_string(k), gt[k]);
        put("g" + std::to_string(k), gv[k]);
      }
      break;
    }
    case PepMethod::OG: {
      std::vector<Vec> xt(H + 1), gt(H + 1);
      xt[0] = x0;
      gt[0] = F(xt[0]);
      put("xt0", xt[0]);
      put("gt0", gt[0]);
      for (int k = 1; k <= H; ++k) {
        xt[k] = (k == 1) ? stepv(xt[0], -g, gt[0])
                         : stepv(stepv(xt[k - 1], -2.0 * g, gt[k - 1]), g, gt[k - 2]);
        gt[k] = F(xt[k]);
        put("gt" + std::to_string(k), gt[k]);
      }
      break;
    }
    case PepMethod::ProjPEG: {
      std::vector<Vec> x(H + 1), gt(H + 1), gv(H + 1);
      x[0] = project(set, x0);
      gv[0] = F(x[0]);
      gt[0] = gv[0];
      put("x0", x[0]);
      put("g0", gv[0]);
      put("g*", F(xstar));
      for (int k = 1; k <= H; ++k) {
        x[k] = project(set, stepv(x[k - 1], -g, gt[k - 1]));
        Vec xt = project(set, stepv(x[k], -g, gt[k - 1]));
        gt[k] = F(xt);
        gv[k] = F(x[k]);
        put("x" + std::to_string(k), x[k]);
        put("xt" + std::to_string(k), xt);
        put("gt" + std::to_string(k), gt[k]);
        put("g" + std::to_string(k), gv[k]);
      }
      break;
    }
    case PepMethod::ProjOG: {
      std::vector<Vec> x(H + 1), xt(H + 1), gt(H + 1);
      x[0] = project(set, x0);
      xt[0] = x[0];
      gt[0] = F(xt[0]);
      put("x0", x[0]);
      put("gt0", gt[0]);
      put("g*", F(xstar));
      for (int k = 1; k <= H; ++k) {
        x[k] = (k == 1) ? stepv(x[0], -g, gt[0])
                        : stepv(stepv(xt[k - 1], g, gt[k - 2]), -g, gt[k - 1]);
        xt[k] = project(set, stepv(x[k], -g, gt[k - 1]));
        gt[k] = F(xt[k]);
        put("xt" + std::to_string(k), xt[k]);
        put("gt" + std::to_string(k), gt[k]);
      }
      break;
    }
  }
  Mat Vm(d, p.gram_dim);
  for (int j = 0; j < p.gram_dim; ++j)
    for (int i = 0; i < d; ++i) Vm(i, j) = cols[j][i];
  Mat G;
  {
    Mat Vt = Vm.transposed();
    linalg::ref::gemm(Vt, Vm, G);
  }
  return G;
}

}  // namespace vilab
