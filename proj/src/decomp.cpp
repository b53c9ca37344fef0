#include "iidm/decomp.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "iidm/errors.hpp"

namespace iidm {

namespace {

void fill_partners(const Instance& inst, MatchingPlan& plan) {
  plan.partner.assign(plan.matchings.size(), std::vector<int>(inst.num_online(), -1));
  for (size_t i = 0; i < plan.matchings.size(); ++i)
    for (int e : plan.matchings[i]) plan.partner[i][inst.edges[e].v] = e;
}

template <class T>
void shuffle_in_place(std::vector<T>& xs, Rng& rng) {
  for (size_t i = xs.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(xs[i - 1], xs[std::min(j, i - 1)]);
  }
}

}  // namespace

MatchingPlan decompose(const Instance& inst, const std::vector<int>& F, int k) {
  IIDM_CHECK(static_cast<int>(F.size()) == inst.num_edges(), "F length mismatch");
  if (k < 1) throw ValidationError("k must be >= 1", "/k");
  const int nu = inst.num_offline();
  const int nodes = nu + inst.num_online();
  std::vector<int> deg(nodes, 0);
  for (int e = 0; e < inst.num_edges(); ++e) {
    if (F[e] < 0) throw ValidationError("negative multiplicity", "/F/" + std::to_string(e));
    deg[inst.edges[e].u] += F[e];
    deg[nu + inst.edges[e].v] += F[e];
  }
  for (int x = 0; x < nodes; ++x)
    if (deg[x] > k)
      throw ValidationError("multigraph degree " + std::to_string(deg[x]) + " exceeds k",
                            x < nu ? "/offline/" + std::to_string(x)
                                   : "/online/" + std::to_string(x - nu));

  // at[x*k + c] = copy colored c at node x, or -1.
  std::vector<int> copy_edge;
  for (int e = 0; e < inst.num_edges(); ++e)
    for (int t = 0; t < F[e]; ++t) copy_edge.push_back(e);
  std::vector<int> at(static_cast<size_t>(nodes) * k, -1);
  std::vector<int> color(copy_edge.size(), -1);
  auto ends = [&](int c) {
    const Edge& ed = inst.edges[copy_edge[c]];
    return std::pair<int, int>{ed.u, nu + ed.v};
  };
  auto free_color = [&](int x) {
    for (int c = 0; c < k; ++c)
      if (at[static_cast<size_t>(x) * k + c] < 0) return c;
    return -1;
  };
  std::vector<int> path;
  for (int cp = 0; cp < static_cast<int>(copy_edge.size()); ++cp) {
    const auto [u, v] = ends(cp);
    const int a = free_color(u);
    const int b = free_color(v);
    IIDM_CHECK(a >= 0 && b >= 0, "no free color under the degree bound");
    if (at[static_cast<size_t>(v) * k + a] >= 0) {
      // Flip the a/b alternating path that starts at v with color a. In a
      // bipartite graph it cannot reach u, so a becomes free at v.
      path.clear();
      int x = v, want = a;
      for (;;) {
        const int c = at[static_cast<size_t>(x) * k + want];
        if (c < 0) break;
        path.push_back(c);
        const auto [p, q] = ends(c);
        x = (x == p) ? q : p;
        want = (want == a) ? b : a;
      }
      for (int c : path) {
        const auto [p, q] = ends(c);
        at[static_cast<size_t>(p) * k + color[c]] = -1;
        at[static_cast<size_t>(q) * k + color[c]] = -1;
      }
      for (int c : path) {
        color[c] = (color[c] == a) ? b : a;
        const auto [p, q] = ends(c);
        at[static_cast<size_t>(p) * k + color[c]] = c;
        at[static_cast<size_t>(q) * k + color[c]] = c;
      }
      IIDM_CHECK(at[static_cast<size_t>(u) * k + a] < 0, "alternating path reached u");
    }
    color[cp] = a;
    at[static_cast<size_t>(u) * k + a] = cp;
    at[static_cast<size_t>(v) * k + a] = cp;
  }

  MatchingPlan plan;
  plan.kind = MatchingPlan::Kind::kProper;
  plan.matchings.assign(k, {});
  for (size_t cp = 0; cp < copy_edge.size(); ++cp) plan.matchings[color[cp]].push_back(copy_edge[cp]);
  for (auto& m : plan.matchings) std::sort(m.begin(), m.end());
  fill_partners(inst, plan);
  IIDM_CHECK(count_plan_violations(inst, F, plan) == 0, "decomposition is not a partition");
  return plan;
}

MatchingPlan pm3(const Instance& inst, const std::vector<int>& F, Rng& rng) {
  MatchingPlan plan = decompose(inst, F, 3);
  shuffle_in_place(plan.matchings, rng);
  fill_partners(inst, plan);
  return plan;
}

MatchingPlan pm2(const Instance& inst, const std::vector<int>& F, Rng& rng) {
  MatchingPlan plan = decompose(inst, F, 2);
  if (bernoulli(rng, 0.5)) std::swap(plan.matchings[0], plan.matchings[1]);
  fill_partners(inst, plan);
  return plan;
}

MatchingPlan pm_star(const Instance& inst, const std::vector<int>& F, double y1, double y2,
                     Rng& rng) {
  if (!(y1 >= 0.0 && y1 <= 1.0)) throw ValidationError("y1 outside [0,1]", "/y1");
  if (!(y2 >= 0.0 && y2 <= 1.0)) throw ValidationError("y2 outside [0,1]", "/y2");
  IIDM_CHECK(static_cast<int>(F.size()) == inst.num_edges(), "F length mismatch");
  MatchingPlan plan;
  plan.kind = MatchingPlan::Kind::kPseudo;
  plan.matchings.assign(2, {});
  for (int v = 0; v < inst.num_online(); ++v) {
    int large = -1, fv = 0;
    std::vector<int> smalls;
    for (int e : inst.adj_v[v]) {
      if (F[e] <= 0) continue;
      fv += F[e];
      if (F[e] == 2) {
        if (large >= 0)
          throw ValidationError("two large edges at one online vertex", "/online/" + std::to_string(v));
        large = e;
      } else if (F[e] == 1) {
        smalls.push_back(e);
      } else {
        throw ValidationError("F_e > 2 not supported by PM*", "/F/" + std::to_string(e));
      }
    }
    if (fv > 3) throw ValidationError("F_v > 3 not supported by PM*", "/online/" + std::to_string(v));
    if (fv == 0) continue;
    if (large >= 0) {
      plan.matchings[0].push_back(large);
      if (!smalls.empty()) plan.matchings[1].push_back(smalls[0]);
      continue;
    }
    std::array<int, 3> slot{-1, -1, -1};
    for (size_t i = 0; i < smalls.size(); ++i) slot[i] = smalls[i];
    for (int i = 2; i > 0; --i) {
      const int j = std::min(i, static_cast<int>(uniform01(rng) * (i + 1)));
      std::swap(slot[i], slot[j]);
    }
    const bool take1 = bernoulli(rng, y1);
    const bool take2 = bernoulli(rng, y2);
    if (take1 && slot[0] >= 0) plan.matchings[0].push_back(slot[0]);
    if (take2 && slot[1] >= 0) plan.matchings[1].push_back(slot[1]);
  }
  fill_partners(inst, plan);
  return plan;
}

int count_plan_violations(const Instance& inst, const std::vector<int>& F,
                          const MatchingPlan& plan) {
  int bad = 0;
  const bool proper = plan.kind == MatchingPlan::Kind::kProper;
  std::vector<int> used(inst.num_edges(), 0);
  for (const auto& m : plan.matchings) {
    std::vector<char> seen_u(inst.num_offline(), 0), seen_v(inst.num_online(), 0);
    for (int e : m) {
      ++used[e];
      const Edge& ed = inst.edges[e];
      if (seen_v[ed.v]++) ++bad;
      if (proper && seen_u[ed.u]++) ++bad;
    }
  }
  for (int e = 0; e < inst.num_edges(); ++e) {
    if (proper && used[e] != F[e]) ++bad;
    if (!proper && used[e] > F[e]) ++bad;
  }
  return bad;
}

}  // namespace iidm
