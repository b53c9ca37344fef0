#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iidm/instance.hpp"

namespace iidm {

// max c'x  s.t.  A x <= b,  0 <= x <= upper.  Every builder below produces
// b >= 0, so x = 0 is feasible and the slack basis is a valid start.
struct LpRow {
  std::vector<std::pair<int, double>> coef;
  double rhs = 0.0;
  std::string name;
};

struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<double> upper;  // +inf when absent
  std::vector<std::string> var_names;

  int add_row(LpRow row);
};

enum class Objective { kUnweighted, kVertexWeighted, kEdgeWeighted };

Objective parse_objective(const std::string& name);

struct FracSolution {
  std::vector<double> f;
  double objective = 0.0;
  int iterations = 0;
  int cuts = 0;
  int rows = 0;
};

LinearProgram build_base_lp(const Instance& inst, Objective obj);
LinearProgram build_stoch_lp(const Instance& inst);
LinearProgram build_bmatch_lp(const Instance& inst, int b);
LinearProgram build_uniform_lp(const Instance& inst, double p);

// Most violated uniform-family row for solution x, or nothing. The rows
// are Sum_{e in S} f_e p <= 1 - exp(-|S| p) over S subset of one
// offline neighborhood with |S| <= 2/p.
std::optional<LpRow> separate_uniform(const Instance& inst,
                                      const std::vector<double>& x, double p);

using Separator = std::function<std::optional<LpRow>(const std::vector<double>&)>;

struct SolveOptions {
  double pivot_tol = 1e-9;
  double cost_tol = 1e-9;
  double feas_tol = 1e-8;
  long max_iterations = 1000000;
  int max_cuts = 100000;
};

// Dense revised simplex, Bland's rule. With a separator, repeats
// solve -> separate -> add row until no violated row is returned; added
// rows are appended to `lp`.
FracSolution solve(LinearProgram& lp, const Separator& separator = nullptr,
                   const SolveOptions& opt = {});

// Largest row violation max(0, a'x - b) and bound violation.
double max_violation(const LinearProgram& lp, const std::vector<double>& x);

double objective_value(const LinearProgram& lp, const std::vector<double>& x);

// Fixed-column MPS text, rows in construction order.
std::string export_mps(const LinearProgram& lp, const std::string& name = "IIDM");

// Picks the LP an algorithm family needs and solves it.
enum class LpKind { kBase, kStoch, kBMatch, kUniform };
FracSolution solve_for(const Instance& inst, LpKind kind, Objective obj, int b = 1);

}  // namespace iidm
