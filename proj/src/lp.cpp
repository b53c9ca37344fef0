#include "iidm/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "iidm/errors.hpp"

namespace iidm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxBaseDegree = 64;
}  // namespace

int LinearProgram::add_row(LpRow row) {
  rows.push_back(std::move(row));
  return static_cast<int>(rows.size()) - 1;
}

Objective parse_objective(const std::string& name) {
  if (name == "unweighted") return Objective::kUnweighted;
  if (name == "vertex" || name == "vertex_weighted") return Objective::kVertexWeighted;
  if (name == "edge" || name == "edge_weighted") return Objective::kEdgeWeighted;
  throw ValidationError("unknown objective '" + name + "'", "/objective");
}

namespace {

LinearProgram empty_lp(const Instance& inst) {
  LinearProgram lp;
  lp.num_vars = inst.num_edges();
  lp.objective.assign(lp.num_vars, 0.0);
  lp.upper.assign(lp.num_vars, kInf);
  for (int e = 0; e < lp.num_vars; ++e) {
    const Edge& ed = inst.edges[e];
    lp.var_names.push_back(inst.offline[ed.u].id + "-" + inst.online[ed.v].id);
  }
  return lp;
}

void require_unit_rates(const Instance& inst) {
  for (size_t v = 0; v < inst.online.size(); ++v)
    if (inst.online[v].r != 1.0)
      throw ValidationError("base LP needs unit rates; split integral rates first",
                            "/online/" + std::to_string(v) + "/r");
}

}  // namespace

LinearProgram build_base_lp(const Instance& inst, Objective obj) {
  require_unit_rates(inst);
  LinearProgram lp = empty_lp(inst);
  for (int e = 0; e < lp.num_vars; ++e) {
    const Edge& ed = inst.edges[e];
    switch (obj) {
      case Objective::kUnweighted: lp.objective[e] = 1.0; break;
      case Objective::kVertexWeighted: lp.objective[e] = inst.offline[ed.u].w; break;
      case Objective::kEdgeWeighted: lp.objective[e] = ed.w; break;
    }
  }
  for (int u = 0; u < inst.num_offline(); ++u) {
    if (static_cast<int>(inst.adj_u[u].size()) > kMaxBaseDegree)
      throw ValidationError("offline degree exceeds 64 in base-LP mode",
                            "/offline/" + std::to_string(u));
    if (inst.adj_u[u].empty()) continue;
    LpRow row{{}, 1.0, "u:" + inst.offline[u].id};
    for (int e : inst.adj_u[u]) row.coef.push_back({e, 1.0});
    lp.add_row(std::move(row));
  }
  for (int v = 0; v < inst.num_online(); ++v) {
    if (inst.adj_v[v].empty()) continue;
    LpRow row{{}, 1.0, "v:" + inst.online[v].id};
    for (int e : inst.adj_v[v]) row.coef.push_back({e, 1.0});
    lp.add_row(std::move(row));
  }
  const double single = 1.0 - std::exp(-1.0);
  for (int e = 0; e < lp.num_vars; ++e)
    lp.add_row({{{e, 1.0}}, single, "e:" + lp.var_names[e]});
  const double pair = 1.0 - std::exp(-2.0);
  for (int u = 0; u < inst.num_offline(); ++u) {
    const auto& a = inst.adj_u[u];
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = i + 1; j < a.size(); ++j)
        lp.add_row({{{a[i], 1.0}, {a[j], 1.0}}, pair,
                    "p:" + lp.var_names[a[i]] + "+" + lp.var_names[a[j]]});
  }
  return lp;
}

LinearProgram build_bmatch_lp(const Instance& inst, int b) {
  if (b < 1) throw ValidationError("capacity b must be >= 1", "/b");
  LinearProgram lp = empty_lp(inst);
  for (int e = 0; e < lp.num_vars; ++e) {
    const Edge& ed = inst.edges[e];
    lp.objective[e] = ed.w * ed.p;
    lp.upper[e] = inst.online[ed.v].r;
  }
  for (int u = 0; u < inst.num_offline(); ++u) {
    if (inst.adj_u[u].empty()) continue;
    LpRow row{{}, static_cast<double>(b), "u:" + inst.offline[u].id};
    for (int e : inst.adj_u[u]) row.coef.push_back({e, inst.edges[e].p});
    lp.add_row(std::move(row));
  }
  for (int v = 0; v < inst.num_online(); ++v) {
    if (inst.adj_v[v].empty()) continue;
    LpRow row{{}, inst.online[v].r, "v:" + inst.online[v].id};
    for (int e : inst.adj_v[v]) row.coef.push_back({e, 1.0});
    lp.add_row(std::move(row));
  }
  return lp;
}

LinearProgram build_stoch_lp(const Instance& inst) { return build_bmatch_lp(inst, 1); }

LinearProgram build_uniform_lp(const Instance& inst, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("probe probability out of (0,1]", "/p");
  if (inst.uniform_p && *inst.uniform_p != p)
    throw ValidationError("uniform_p flag differs from requested p", "/flags/uniform_p");
  for (size_t e = 0; e < inst.edges.size(); ++e)
    if (inst.edges[e].p != p)
      throw ValidationError("uniform LP needs every probe_prob equal to p",
                            "/edges/" + std::to_string(e) + "/p");
  require_unit_rates(inst);
  LinearProgram lp = empty_lp(inst);
  for (int e = 0; e < lp.num_vars; ++e) lp.objective[e] = p;
  for (int u = 0; u < inst.num_offline(); ++u) {
    if (inst.adj_u[u].empty()) continue;
    LpRow row{{}, 1.0, "u:" + inst.offline[u].id};
    for (int e : inst.adj_u[u]) row.coef.push_back({e, p});
    lp.add_row(std::move(row));
  }
  for (int v = 0; v < inst.num_online(); ++v) {
    if (inst.adj_v[v].empty()) continue;
    LpRow row{{}, 1.0, "v:" + inst.online[v].id};
    for (int e : inst.adj_v[v]) row.coef.push_back({e, 1.0});
    lp.add_row(std::move(row));
  }
  return lp;
}

std::optional<LpRow> separate_uniform(const Instance& inst, const std::vector<double>& x,
                                      double p) {
  const int smax = static_cast<int>(std::floor(2.0 / p + 1e-12));
  double best = 1e-8;
  std::optional<LpRow> out;
  for (int u = 0; u < inst.num_offline(); ++u) {
    std::vector<int> a = inst.adj_u[u];
    std::stable_sort(a.begin(), a.end(), [&](int i, int j) { return x[i] > x[j]; });
    double prefix = 0.0;
    for (int s = 1; s <= std::min<int>(smax, a.size()); ++s) {
      prefix += x[a[s - 1]];
      const double rhs = 1.0 - std::exp(-s * p);
      const double viol = prefix * p - rhs;
      if (viol > best) {
        best = viol;
        LpRow row{{}, rhs, "c:" + inst.offline[u].id + "/" + std::to_string(s)};
        std::vector<int> members(a.begin(), a.begin() + s);
        std::sort(members.begin(), members.end());
        for (int e : members) row.coef.push_back({e, p});
        out = std::move(row);
      }
    }
  }
  return out;
}

double objective_value(const LinearProgram& lp, const std::vector<double>& x) {
  double s = 0.0;
  for (int j = 0; j < lp.num_vars; ++j) s += lp.objective[j] * x[j];
  return s;
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (const LpRow& r : lp.rows) {
    double a = 0.0;
    for (auto [j, c] : r.coef) a += c * x[j];
    worst = std::max(worst, a - r.rhs);
  }
  for (int j = 0; j < lp.num_vars; ++j) {
    worst = std::max(worst, -x[j]);
    if (std::isfinite(lp.upper[j])) worst = std::max(worst, x[j] - lp.upper[j]);
  }
  return worst;
}

namespace {

// Revised simplex on  max c'x, Ax + s = b, x, s >= 0  with an explicit
// dense basis inverse.
class DenseSimplex {
 public:
  DenseSimplex(int n, std::vector<double> c, std::vector<std::vector<std::pair<int, double>>> cols,
               std::vector<double> b, const SolveOptions& opt)
      : n_(n), m_(static_cast<int>(b.size())), c_(std::move(c)), cols_(std::move(cols)),
        b_(std::move(b)), opt_(opt) {}

  long run() {
    binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[idx(i, i)] = 1.0;
    basis_.resize(m_);
    pos_.assign(n_ + m_, -1);
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      pos_[n_ + i] = i;
    }
    xb_ = b_;
    std::vector<double> y(m_), alpha(m_);
    long it = 0;
    for (;; ++it) {
      if (it >= opt_.max_iterations) throw InternalError("simplex iteration cap exceeded");
      if (it > 0 && it % 200 == 0 && m_ <= 800) reinvert();
      std::fill(y.begin(), y.end(), 0.0);
      for (int i = 0; i < m_; ++i) {
        const double cb = cost(basis_[i]);
        if (cb == 0.0) continue;
        const double* row = &binv_[idx(i, 0)];
        for (int k = 0; k < m_; ++k) y[k] += cb * row[k];
      }
      int enter = -1;
      for (int j = 0; j < n_ + m_ && enter < 0; ++j) {
        if (pos_[j] >= 0) continue;
        double d = cost(j);
        if (j < n_) {
          for (auto [r, a] : cols_[j]) d -= y[r] * a;
        } else {
          d -= y[j - n_];
        }
        if (d > opt_.cost_tol) enter = j;
      }
      if (enter < 0) return it;
      column(enter, alpha);
      int leave = -1;
      double theta = kInf;
      for (int i = 0; i < m_; ++i) {
        if (alpha[i] <= opt_.pivot_tol) continue;
        const double t = std::max(0.0, xb_[i]) / alpha[i];
        if (t < theta - 1e-12 || (t <= theta + 1e-12 && basis_[i] < basis_[leave])) {
          if (t < theta) theta = t;
          leave = i;
        }
      }
      if (leave < 0) throw InternalError("LP is unbounded");
      pivot(leave, enter, alpha);
    }
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = std::max(0.0, xb_[i]);
    return x;
  }

 private:
  size_t idx(int i, int k) const { return static_cast<size_t>(i) * m_ + k; }
  double cost(int j) const { return j < n_ ? c_[j] : 0.0; }

  void column(int j, std::vector<double>& alpha) const {
    std::fill(alpha.begin(), alpha.end(), 0.0);
    if (j >= n_) {
      const int r = j - n_;
      for (int i = 0; i < m_; ++i) alpha[i] = binv_[idx(i, r)];
      return;
    }
    for (auto [r, a] : cols_[j])
      for (int i = 0; i < m_; ++i) alpha[i] += binv_[idx(i, r)] * a;
  }

  void pivot(int r, int enter, const std::vector<double>& alpha) {
    const double piv = alpha[r];
    double* rowr = &binv_[idx(r, 0)];
    for (int k = 0; k < m_; ++k) rowr[k] /= piv;
    xb_[r] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      const double a = alpha[i];
      double* rowi = &binv_[idx(i, 0)];
      for (int k = 0; k < m_; ++k) rowi[k] -= a * rowr[k];
      xb_[i] -= a * xb_[r];
    }
    pos_[basis_[r]] = -1;
    basis_[r] = enter;
    pos_[enter] = r;
  }

  // Rebuilds B^{-1} from scratch (Gauss-Jordan, partial pivoting).
  void reinvert() {
    std::vector<double> bm(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (j >= n_) {
        bm[idx(j - n_, i)] = 1.0;
      } else {
        for (auto [r, a] : cols_[j]) bm[idx(r, i)] = a;
      }
    }
    std::vector<double> inv(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) inv[idx(i, i)] = 1.0;
    for (int col = 0; col < m_; ++col) {
      int p = col;
      for (int i = col + 1; i < m_; ++i)
        if (std::fabs(bm[idx(i, col)]) > std::fabs(bm[idx(p, col)])) p = i;
      if (std::fabs(bm[idx(p, col)]) < 1e-14) return;  // keep the updated inverse
      if (p != col)
        for (int k = 0; k < m_; ++k) {
          std::swap(bm[idx(p, k)], bm[idx(col, k)]);
          std::swap(inv[idx(p, k)], inv[idx(col, k)]);
        }
      const double d = bm[idx(col, col)];
      for (int k = 0; k < m_; ++k) {
        bm[idx(col, k)] /= d;
        inv[idx(col, k)] /= d;
      }
      for (int i = 0; i < m_; ++i) {
        if (i == col) continue;
        const double a = bm[idx(i, col)];
        if (a == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          bm[idx(i, k)] -= a * bm[idx(col, k)];
          inv[idx(i, k)] -= a * inv[idx(col, k)];
        }
      }
    }
    binv_ = std::move(inv);
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (int k = 0; k < m_; ++k) s += binv_[idx(i, k)] * b_[k];
      xb_[i] = s;
    }
  }

  int n_, m_;
  std::vector<double> c_;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> b_;
  SolveOptions opt_;
  std::vector<double> binv_;
  std::vector<int> basis_, pos_;
  std::vector<double> xb_;
};

bool bound_implied(const LinearProgram& lp, int j) {
  for (const LpRow& r : lp.rows) {
    double aj = 0.0;
    bool nonneg = true;
    for (auto [k, c] : r.coef) {
      if (c < 0.0) nonneg = false;
      if (k == j) aj += c;
    }
    if (nonneg && aj > 0.0 && r.rhs / aj <= lp.upper[j] + 1e-12) return true;
  }
  return false;
}

FracSolution solve_once(const LinearProgram& lp, const SolveOptions& opt) {
  std::vector<std::vector<std::pair<int, double>>> cols(lp.num_vars);
  std::vector<double> b;
  for (const LpRow& r : lp.rows) {
    if (r.rhs < 0.0) throw InternalError("negative right-hand side; slack basis infeasible");
    const int i = static_cast<int>(b.size());
    std::map<int, double> merged;
    for (auto [j, c] : r.coef) merged[j] += c;
    for (auto [j, c] : merged)
      if (c != 0.0) cols[j].push_back({i, c});
    b.push_back(r.rhs);
  }
  for (int j = 0; j < lp.num_vars; ++j) {
    if (!std::isfinite(lp.upper[j]) || bound_implied(lp, j)) continue;
    cols[j].push_back({static_cast<int>(b.size()), 1.0});
    b.push_back(lp.upper[j]);
  }
  DenseSimplex sx(lp.num_vars, lp.objective, std::move(cols), std::move(b), opt);
  FracSolution sol;
  sol.iterations = static_cast<int>(sx.run());
  sol.f = sx.primal();
  sol.objective = objective_value(lp, sol.f);
  return sol;
}

}  // namespace

FracSolution solve(LinearProgram& lp, const Separator& separator, const SolveOptions& opt) {
  if (static_cast<int>(lp.objective.size()) != lp.num_vars)
    throw InternalError("objective length mismatch");
  if (lp.upper.size() != static_cast<size_t>(lp.num_vars)) lp.upper.resize(lp.num_vars, kInf);
  for (const LpRow& r : lp.rows)
    for (auto [j, c] : r.coef)
      if (j < 0 || j >= lp.num_vars || !std::isfinite(c))
        throw InternalError("row '" + r.name + "' references a bad variable or coefficient");
  int cuts = 0;
  long iters = 0;
  std::set<std::vector<int>> seen;
  for (;;) {
    FracSolution sol = solve_once(lp, opt);
    iters += sol.iterations;
    if (max_violation(lp, sol.f) > opt.feas_tol)
      throw InternalError("simplex output violates a row beyond tolerance");
    std::optional<LpRow> cut = separator ? separator(sol.f) : std::nullopt;
    if (!cut) {
      sol.cuts = cuts;
      sol.iterations = static_cast<int>(iters);
      sol.rows = static_cast<int>(lp.rows.size());
      return sol;
    }
    std::vector<int> sig;
    for (auto [j, c] : cut->coef) sig.push_back(j);
    if (!seen.insert(sig).second) throw InternalError("separator repeated an existing cut");
    if (++cuts > opt.max_cuts) throw InternalError("cutting-plane cap exceeded");
    lp.add_row(std::move(*cut));
  }
}

std::string export_mps(const LinearProgram& lp, const std::string& name) {
  std::ostringstream os;
  char buf[160];
  auto rname = [](size_t i) {
    char b[16];
    std::snprintf(b, sizeof b, "R%07zu", i + 1);
    return std::string(b);
  };
  auto cname = [](int j) {
    char b[16];
    std::snprintf(b, sizeof b, "X%07d", j + 1);
    return std::string(b);
  };
  os << "NAME          " << name << "\n";
  os << "* maximization written as minimization of the negated objective\n";
  os << "ROWS\n N  OBJ\n";
  for (size_t i = 0; i < lp.rows.size(); ++i) os << " L  " << rname(i) << "\n";
  std::vector<std::vector<std::pair<size_t, double>>> cols(lp.num_vars);
  for (size_t i = 0; i < lp.rows.size(); ++i)
    for (auto [j, c] : lp.rows[i].coef) cols[j].push_back({i, c});
  os << "COLUMNS\n";
  for (int j = 0; j < lp.num_vars; ++j) {
    std::snprintf(buf, sizeof buf, "    %-8s  %-8s  %12.10g\n", cname(j).c_str(), "OBJ",
                  -lp.objective[j]);
    os << buf;
    for (auto [i, c] : cols[j]) {
      std::snprintf(buf, sizeof buf, "    %-8s  %-8s  %12.10g\n", cname(j).c_str(),
                    rname(i).c_str(), c);
      os << buf;
    }
  }
  os << "RHS\n";
  for (size_t i = 0; i < lp.rows.size(); ++i) {
    std::snprintf(buf, sizeof buf, "    %-8s  %-8s  %12.10g\n", "RHS", rname(i).c_str(),
                  lp.rows[i].rhs);
    os << buf;
  }
  bool any = false;
  for (int j = 0; j < lp.num_vars; ++j) {
    if (!std::isfinite(lp.upper[j])) continue;
    if (!any) os << "BOUNDS\n";
    any = true;
    std::snprintf(buf, sizeof buf, " UP %-8s  %-8s  %12.10g\n", "BND", cname(j).c_str(),
                  lp.upper[j]);
    os << buf;
  }
  os << "ENDATA\n";
  return os.str();
}

FracSolution solve_for(const Instance& inst, LpKind kind, Objective obj, int b) {
  switch (kind) {
    case LpKind::kBase: {
      LinearProgram lp = build_base_lp(inst, obj);
      return solve(lp);
    }
    case LpKind::kStoch: {
      LinearProgram lp = build_stoch_lp(inst);
      return solve(lp);
    }
    case LpKind::kBMatch: {
      LinearProgram lp = build_bmatch_lp(inst, b);
      return solve(lp);
    }
    case LpKind::kUniform: {
      const double p = inst.uniform_p ? *inst.uniform_p
                                      : (inst.edges.empty() ? 1.0 : inst.edges.front().p);
      LinearProgram lp = build_uniform_lp(inst, p);
      return solve(lp, [&](const std::vector<double>& x) { return separate_uniform(inst, x, p); });
    }
  }
  throw InternalError("unknown LP kind");
}

}  // namespace iidm
