#include "iidm/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iidm/errors.hpp"

namespace iidm {

namespace {

constexpr double kSnap = 1e-12;

class ResidueRounder {
 public:
  ResidueRounder(const Instance& inst, std::vector<double> residue)
      : inst_(inst), a_(std::move(residue)), nodes_(inst.num_offline() + inst.num_online()) {
    for (int e = 0; e < inst.num_edges(); ++e) {
      if (!fractional(e)) continue;
      nodes_[end_u(e)].push_back(e);
      nodes_[end_v(e)].push_back(e);
    }
    on_walk_.assign(nodes_.size(), -1);
  }

  // Rounds every residue to 0 or 1.
  std::vector<double> run(Rng& rng) {
    int cursor = 0;
    std::vector<int> walk_nodes, walk_edges, cyc;
    for (;;) {
      while (cursor < static_cast<int>(a_.size()) && !fractional(cursor)) ++cursor;
      if (cursor == static_cast<int>(a_.size())) break;
      // First pass from the u-end of the smallest fractional edge; if it
      // dies out, restart from the dead end so the path is maximal.
      int dead_end = -1;
      if (!walk(end_u(cursor), cursor, walk_nodes, walk_edges, cyc, dead_end)) {
        walk(dead_end, -1, walk_nodes, walk_edges, cyc, dead_end);
      }
      shift(cyc, rng);
    }
    return a_;
  }

 private:
  int end_u(int e) const { return inst_.edges[e].u; }
  int end_v(int e) const { return inst_.num_offline() + inst_.edges[e].v; }
  int other(int e, int node) const { return node == end_u(e) ? end_v(e) : end_u(e); }
  bool fractional(int e) const { return a_[e] > 0.0 && a_[e] < 1.0; }

  // Smallest-id fractional edge at `node` other than `skip`.
  int next_edge(int node, int skip) {
    auto& lst = nodes_[node];
    lst.erase(std::remove_if(lst.begin(), lst.end(), [&](int e) { return !fractional(e); }),
              lst.end());
    for (int e : lst)
      if (e != skip) return e;
    return -1;
  }

  // Walks from `start`. Returns true with `cyc` holding a cycle, or false
  // with `cyc` holding a path ending at a node of fractional degree one
  // (reported through `dead_end`).
  bool walk(int start, int first_edge, std::vector<int>& nodes, std::vector<int>& edges,
            std::vector<int>& cyc, int& dead_end) {
    for (int x : nodes) on_walk_[x] = -1;
    nodes.assign(1, start);
    edges.clear();
    on_walk_[start] = 0;
    int cur = start, prev = -1;
    bool is_cycle = false;
    for (;;) {
      const int e = (edges.empty() && first_edge >= 0) ? first_edge : next_edge(cur, prev);
      if (e < 0) break;
      edges.push_back(e);
      const int nxt = other(e, cur);
      if (on_walk_[nxt] >= 0) {
        cyc.assign(edges.begin() + on_walk_[nxt], edges.end());
        is_cycle = true;
        break;
      }
      on_walk_[nxt] = static_cast<int>(nodes.size());
      nodes.push_back(nxt);
      prev = e;
      cur = nxt;
    }
    for (int x : nodes) on_walk_[x] = -1;
    if (!is_cycle) {
      cyc = edges;
      dead_end = cur;
    }
    return is_cycle;
  }

  void shift(const std::vector<int>& cyc, Rng& rng) {
    double alpha = 1.0, beta = 1.0;
    for (size_t i = 0; i < cyc.size(); ++i) {
      const double x = a_[cyc[i]];
      if (i % 2 == 0) {
        alpha = std::min(alpha, 1.0 - x);
        beta = std::min(beta, x);
      } else {
        alpha = std::min(alpha, x);
        beta = std::min(beta, 1.0 - x);
      }
    }
    IIDM_CHECK(alpha > 0.0 && beta > 0.0, "dependent rounding step with zero mass");
    const bool up = uniform01(rng) < beta / (alpha + beta);
    const double d = up ? alpha : -beta;
    for (size_t i = 0; i < cyc.size(); ++i) {
      double& x = a_[cyc[i]];
      x += (i % 2 == 0) ? d : -d;
      if (x < kSnap) x = 0.0;
      if (x > 1.0 - kSnap) x = 1.0;
    }
  }

  const Instance& inst_;
  std::vector<double> a_;
  std::vector<std::vector<int>> nodes_;
  std::vector<int> on_walk_;
};

}  // namespace

IntegralVector dr(const Instance& inst, const std::vector<double>& f, int k, Rng& rng,
                  bool extended) {
  if (static_cast<int>(f.size()) != inst.num_edges())
    throw ValidationError("fractional vector length differs from edge count", "/f");
  if (!extended && k != 2 && k != 3)
    throw ValidationError("k must be 2 or 3 (other values need the extended flag)", "/k");
  if (k < 1) throw ValidationError("k must be >= 1", "/k");
  IntegralVector out;
  out.k = k;
  out.F.assign(f.size(), 0);
  std::vector<double> residue(f.size(), 0.0);
  for (size_t e = 0; e < f.size(); ++e) {
    if (!(f[e] >= -kSnap && f[e] <= 1.0 + kSnap))
      throw ValidationError("f_e outside [0,1]", "/f/" + std::to_string(e));
    const double x = std::clamp(f[e], 0.0, 1.0) * k;
    const double r = std::round(x);
    if (std::fabs(x - r) <= kSnap) {
      out.F[e] = static_cast<int>(r);
    } else {
      const double fl = std::floor(x);
      out.F[e] = static_cast<int>(fl);
      residue[e] = x - fl;
    }
  }
  ResidueRounder rr(inst, std::move(residue));
  const std::vector<double> rounded = rr.run(rng);
  for (size_t e = 0; e < f.size(); ++e)
    if (rounded[e] >= 1.0) out.F[e] += 1;
  return out;
}

ThirdsVector dr_thirds(const Instance& inst, const std::vector<double>& f, Rng& rng) {
  for (size_t e = 0; e < f.size(); ++e)
    if (f[e] > 2.0 / 3.0 + kSnap)
      throw ValidationError("f_e > 2/3 cannot be rounded to thirds", "/f/" + std::to_string(e));
  IntegralVector F = dr(inst, f, 3, rng);
  return ThirdsVector{std::move(F.F)};
}

std::vector<int> offline_degrees(const Instance& inst, const std::vector<int>& F) {
  std::vector<int> d(inst.num_offline(), 0);
  for (int e = 0; e < inst.num_edges(); ++e) d[inst.edges[e].u] += F[e];
  return d;
}

std::vector<int> online_degrees(const Instance& inst, const std::vector<int>& F) {
  std::vector<int> d(inst.num_online(), 0);
  for (int e = 0; e < inst.num_edges(); ++e) d[inst.edges[e].v] += F[e];
  return d;
}

int count_rounding_violations(const Instance& inst, const std::vector<double>& f,
                              const IntegralVector& F) {
  int bad = 0;
  const double k = F.k;
  auto within = [](double target, long got) {
    const double lo = std::floor(target + kSnap * 10), hi = std::ceil(target - kSnap * 10);
    return got >= static_cast<long>(std::min(lo, hi)) && got <= static_cast<long>(std::max(lo, hi));
  };
  for (int e = 0; e < inst.num_edges(); ++e)
    if (!within(k * f[e], F.F[e])) ++bad;
  std::vector<double> fu(inst.num_offline(), 0.0), fv(inst.num_online(), 0.0);
  for (int e = 0; e < inst.num_edges(); ++e) {
    fu[inst.edges[e].u] += f[e];
    fv[inst.edges[e].v] += f[e];
  }
  const auto du = offline_degrees(inst, F.F);
  const auto dv = online_degrees(inst, F.F);
  for (int u = 0; u < inst.num_offline(); ++u)
    if (!within(k * fu[u], du[u])) ++bad;
  for (int v = 0; v < inst.num_online(); ++v)
    if (!within(k * fv[v], dv[v])) ++bad;
  return bad;
}

}  // namespace iidm
