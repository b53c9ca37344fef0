#include <doctest.h>

#include <cmath>
#include <set>

#include "iidm/errors.hpp"
#include "iidm/lp.hpp"
#include "iidm/rng.hpp"
#include "support.hpp"

using namespace iidm;
using testing::E;

namespace {

const double kE1 = 1.0 - std::exp(-1.0);
const double kE2 = 1.0 - std::exp(-2.0);

// Every subset S of an offline neighborhood with |S| <= 2/p.
double brute_uniform_violation(const Instance& inst, const std::vector<double>& f, double p) {
  const int smax = static_cast<int>(std::floor(2.0 / p + 1e-12));
  double worst = 0.0;
  for (int u = 0; u < inst.num_offline(); ++u) {
    const auto& a = inst.adj_u[u];
    const int d = static_cast<int>(a.size());
    REQUIRE(d <= 12);
    for (int mask = 1; mask < (1 << d); ++mask) {
      const int s = __builtin_popcount(mask);
      if (s > smax) continue;
      double sum = 0.0;
      for (int i = 0; i < d; ++i)
        if (mask >> i & 1) sum += f[a[i]];
      worst = std::max(worst, sum * p - (1.0 - std::exp(-s * p)));
    }
  }
  return worst;
}

double feasible_scale(const LinearProgram& lp, const std::vector<double>& dir) {
  double t = 1e300;
  for (const auto& r : lp.rows) {
    double s = 0;
    for (auto [j, c] : r.coef) s += c * dir[j];
    if (s > 1e-15) t = std::min(t, r.rhs / s);
  }
  for (int j = 0; j < lp.num_vars; ++j)
    if (dir[j] > 0 && std::isfinite(lp.upper[j])) t = std::min(t, lp.upper[j] / dir[j]);
  return t;
}

Instance random_unit(int nu, int nv, double density, std::uint64_t seed,
                     std::pair<double, double> w = {1, 1}, std::pair<double, double> p = {1, 1}) {
  RandomParams rp;
  rp.num_u = nu;
  rp.num_v = nv;
  rp.density = density;
  rp.weight = w;
  rp.p = p;
  rp.seed = seed;
  return gen_random(rp);
}

}  // namespace

TEST_CASE("base LP: small optima") {
  Instance single = testing::make(1, 1, {{0, 0}});
  LinearProgram lp = build_base_lp(single, Objective::kUnweighted);
  FracSolution s = solve(lp);
  CHECK(s.f[0] == doctest::Approx(kE1).epsilon(1e-12));

  Instance two = testing::make(1, 2, {{0, 0}, {0, 1}});
  LinearProgram lp2 = build_base_lp(two, Objective::kUnweighted);
  FracSolution s2 = solve(lp2);
  CHECK(s2.objective == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));

  Instance vw = testing::make(2, 1, {{0, 0}, {1, 0}}, {}, {2.0, 1.0});
  LinearProgram lp3 = build_base_lp(vw, Objective::kVertexWeighted);
  FracSolution s3 = solve(lp3);
  CHECK(s3.f[0] == doctest::Approx(kE1));
  CHECK(s3.f[1] == doctest::Approx(1.0 - kE1));

  Instance k22 = testing::make(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  LinearProgram lp4 = build_base_lp(k22, Objective::kUnweighted);
  FracSolution s4 = solve(lp4);
  CHECK(s4.objective == doctest::Approx(testing::brute_force_lp(lp4)).epsilon(1e-10));
  CHECK(s4.objective == doctest::Approx(2.0 * (1.0 - std::exp(-2.0))).epsilon(1e-10));
}

TEST_CASE("base LP: row structure") {
  Instance inst = testing::make(2, 3, {{0, 0}, {0, 1}, {0, 2}, {1, 1}});
  LinearProgram lp = build_base_lp(inst, Objective::kEdgeWeighted);
  // 2 u-rows, 3 v-rows, 4 single-edge rows, C(3,2) pair rows at u0.
  CHECK(lp.rows.size() == 2 + 3 + 4 + 3);
  int pairs = 0;
  for (const auto& r : lp.rows)
    if (r.coef.size() == 2 && std::fabs(r.rhs - kE2) < 1e-12) ++pairs;
  CHECK(pairs == 3);

  Instance nonunit = testing::make(1, 1, {{0, 0}}, {2.0});
  CHECK_THROWS_AS(build_base_lp(nonunit, Objective::kUnweighted), ValidationError);

  std::vector<E> star;
  for (int j = 0; j < 65; ++j) star.push_back({0, j});
  CHECK_THROWS_AS(build_base_lp(testing::make(1, 65, star), Objective::kUnweighted),
                  ValidationError);
}

TEST_CASE("stochastic and b-matching LPs") {
  Instance one = testing::make(1, 1, {{0, 0, 1.0, 0.5}}, {4.0});
  LinearProgram lp = build_stoch_lp(one);
  FracSolution s = solve(lp);
  CHECK(s.f[0] == doctest::Approx(2.0));
  CHECK(s.objective == doctest::Approx(1.0));

  Instance two = testing::make(1, 2, {{0, 0, 1.0, 1.0}, {0, 1, 1.0, 0.5}});
  LinearProgram lp2 = build_stoch_lp(two);
  bool found = false;
  for (const auto& r : lp2.rows)
    if (r.name.rfind("u:", 0) == 0) {
      found = true;
      REQUIRE(r.coef.size() == 2);
      CHECK(r.coef[0].second == 1.0);
      CHECK(r.coef[1].second == 0.5);
      CHECK(r.rhs == 1.0);
    }
  CHECK(found);

  LinearProgram b1 = build_bmatch_lp(two, 1);
  CHECK(export_mps(b1) == export_mps(lp2));

  Instance big = testing::make(1, 1, {{0, 0}}, {5.0});
  LinearProgram b3 = build_bmatch_lp(big, 3);
  CHECK(solve(b3).f[0] == doctest::Approx(3.0));

  Instance pair = testing::make(1, 2, {{0, 0}, {0, 1}});
  LinearProgram b2 = build_bmatch_lp(pair, 2);
  CHECK(solve(b2).objective == doctest::Approx(2.0));
  CHECK_THROWS_AS(build_bmatch_lp(pair, 0), ValidationError);

  // p = 1 and unit rates: plain matching polytope.
  Instance k22 = testing::make(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  LinearProgram m = build_stoch_lp(k22);
  CHECK(solve(m).objective == doctest::Approx(2.0));
}

TEST_CASE("uniform separation") {
  Instance one = testing::make(1, 1, {{0, 0}});
  one.uniform_p = 1.0;
  auto cut = separate_uniform(one, {0.7}, 1.0);
  REQUIRE(cut.has_value());
  CHECK(cut->rhs == doctest::Approx(kE1));
  CHECK_FALSE(separate_uniform(one, {0.5}, 1.0).has_value());

  Instance two = testing::make(1, 2, {{0, 0, 1, 0.5}, {0, 1, 1, 0.5}});
  auto c2 = separate_uniform(two, {0.9, 0.9}, 0.5);
  REQUIRE(c2.has_value());
  CHECK(c2->coef.size() == 2);

  LinearProgram lp = build_uniform_lp(one, 1.0);
  FracSolution s = solve(lp, [&](const std::vector<double>& x) {
    return separate_uniform(one, x, 1.0);
  });
  CHECK(s.f[0] == doctest::Approx(kE1).epsilon(1e-10));
  CHECK(s.cuts == 1);

  Instance no_flag = testing::make(1, 1, {{0, 0, 1, 0.5}});
  CHECK_THROWS_AS(build_uniform_lp(no_flag, 0.4), ValidationError);
}

TEST_CASE("uniform LP: brute-force subset scan and cut count") {
  for (double p : {1.0, 0.5, 0.3, 0.2}) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      Instance inst = random_unit(4, 10, 0.8, seed, {1, 1}, {p, p});
      for (int u = 0; u < inst.num_offline(); ++u) REQUIRE(inst.adj_u[u].size() <= 12);
      LinearProgram lp = build_uniform_lp(inst, p);
      const size_t base_rows = lp.rows.size();
      FracSolution s = solve(lp, [&](const std::vector<double>& x) {
        return separate_uniform(inst, x, p);
      });
      CHECK(brute_uniform_violation(inst, s.f, p) <= 1e-8);
      CHECK(max_violation(lp, s.f) <= 1e-8);
      // Each cut is a distinct subset row, so the number of subsets bounds the loop.
      long cap = 0;
      const int smax = static_cast<int>(std::floor(2.0 / p + 1e-12));
      for (int u = 0; u < inst.num_offline(); ++u) {
        const int d = static_cast<int>(inst.adj_u[u].size());
        for (int mask = 1; mask < (1 << d); ++mask) cap += __builtin_popcount(mask) <= smax;
      }
      CHECK(static_cast<long>(lp.rows.size() - base_rows) <= cap);
      CHECK(s.cuts == static_cast<int>(lp.rows.size() - base_rows));
      std::set<std::vector<std::pair<int, double>>> distinct;
      for (size_t i = base_rows; i < lp.rows.size(); ++i) {
        auto c = lp.rows[i].coef;
        std::sort(c.begin(), c.end());
        distinct.insert(c);
      }
      CHECK(distinct.size() == lp.rows.size() - base_rows);
    }
  }
}

TEST_CASE("simplex matches vertex enumeration on random small LPs") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Instance inst = random_unit(3, 3, 0.6, seed, {0.5, 4.0});
    if (inst.num_edges() == 0 || inst.num_edges() > 6) continue;
    for (Objective obj : {Objective::kUnweighted, Objective::kEdgeWeighted}) {
      LinearProgram lp = build_base_lp(inst, obj);
      const double oracle = testing::brute_force_lp(lp);
      FracSolution s = solve(lp);
      CHECK(s.objective == doctest::Approx(oracle).epsilon(1e-9));
      CHECK(max_violation(lp, s.f) <= 1e-8);
    }
    Instance st = random_unit(3, 3, 0.6, seed + 100, {0.5, 4.0}, {0.2, 1.0});
    if (st.num_edges() == 0 || st.num_edges() > 6) continue;
    LinearProgram lps = build_stoch_lp(st);
    CHECK(solve(lps).objective == doctest::Approx(testing::brute_force_lp(lps)).epsilon(1e-9));
  }
}

TEST_CASE("solver beats random feasible points") {
  Rng rng = make_rng(42);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Instance inst = random_unit(5, 5, 0.6, seed, {0.1, 3.0});
    LinearProgram lp = build_base_lp(inst, Objective::kEdgeWeighted);
    FracSolution s = solve(lp);
    REQUIRE(max_violation(lp, s.f) <= 1e-8);
    for (int k = 0; k < 1000; ++k) {
      std::vector<double> dir(lp.num_vars);
      for (double& d : dir) d = uniform01(rng) < 0.3 ? 0.0 : uniform01(rng);
      const double t = feasible_scale(lp, dir) * uniform01(rng);
      if (!std::isfinite(t) || t > 1e200) continue;
      for (double& d : dir) d *= t;
      REQUIRE(max_violation(lp, dir) <= 1e-9);
      CHECK(objective_value(lp, dir) <= s.objective + 1e-9);
    }
  }
}

TEST_CASE("degenerate objective and MPS export") {
  Instance inst = testing::make(2, 2, {{0, 0}, {1, 1}});
  inst.edges[0].w = inst.edges[1].w = 0.0;
  LinearProgram lp = build_base_lp(inst, Objective::kEdgeWeighted);
  FracSolution s = solve(lp);
  CHECK(s.objective == 0.0);
  for (double x : s.f) CHECK(x == 0.0);

  const std::string mps = export_mps(lp, "T");
  for (const char* key : {"NAME", "ROWS", "COLUMNS", "RHS", "ENDATA"})
    CHECK(mps.find(key) != std::string::npos);
  CHECK(mps.find("R0000006") != std::string::npos);  // one ROWS line per row
  // Row order: u-rows, v-rows, single-edge rows, pair rows.
  std::string kinds;
  for (const auto& r : lp.rows) kinds += r.name[0];
  CHECK(kinds == "uuvvee");
}

TEST_CASE("solve_for dispatch") {
  Instance inst = random_unit(4, 4, 0.7, 11, {1, 2});
  FracSolution a = solve_for(inst, LpKind::kBase, Objective::kEdgeWeighted);
  LinearProgram lp = build_base_lp(inst, Objective::kEdgeWeighted);
  CHECK(a.objective == doctest::Approx(solve(lp).objective));
  for (double x : a.f) {
    CHECK(x >= -1e-12);
    CHECK(x <= kE1 + 1e-9);
  }
}
