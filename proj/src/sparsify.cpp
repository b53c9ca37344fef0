#include "iidm/sparsify.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <tuple>

#include "iidm/errors.hpp"

namespace iidm {

namespace {

struct HGraph {
  // (neighbor, edge id) lists restricted to H_e > 0.
  std::vector<std::vector<std::pair<int, int>>> nu, nv;

  HGraph(const Instance& inst, const std::vector<int>& h)
      : nu(inst.num_offline()), nv(inst.num_online()) {
    for (int e = 0; e < inst.num_edges(); ++e) {
      if (h[e] <= 0) continue;
      nu[inst.edges[e].u].push_back({inst.edges[e].v, e});
      nv[inst.edges[e].v].push_back({inst.edges[e].u, e});
    }
  }

  int edge(int u, int v) const {
    for (const auto& [w, e] : nu[u])
      if (w == v) return e;
    return -1;
  }
};

struct CycleEdges {
  int a, b, c, d;  // (u1,v1) (u1,v2) (u2,v1) (u2,v2)
};

CycleEdges cycle_edges(const HGraph& g, const Cycle4& c) {
  return {g.edge(c.u1, c.v1), g.edge(c.u1, c.v2), g.edge(c.u2, c.v1), g.edge(c.u2, c.v2)};
}

bool still_a(const HGraph& g, const std::vector<int>& h, const Cycle4& c, int thick) {
  const CycleEdges ce = cycle_edges(g, c);
  const std::array<int, 4> es{ce.a, ce.b, ce.c, ce.d};
  int t = 0;
  for (int e : es) {
    if (e < 0 || h[e] <= 0) return false;
    if (h[e] == 2) ++t;
  }
  return t == thick;
}

}  // namespace

std::string cycle_type_name(CycleType t) {
  switch (t) {
    case CycleType::kC1: return "C1";
    case CycleType::kC2: return "C2";
    case CycleType::kC3: return "C3";
  }
  return "?";
}

std::vector<int> thirds_offline(const Instance& inst, const ThirdsVector& H) {
  std::vector<int> s(inst.num_offline(), 0);
  for (int e = 0; e < inst.num_edges(); ++e) s[inst.edges[e].u] += H.h[e];
  return s;
}

std::vector<int> thirds_online(const Instance& inst, const ThirdsVector& H) {
  std::vector<int> s(inst.num_online(), 0);
  for (int e = 0; e < inst.num_edges(); ++e) s[inst.edges[e].v] += H.h[e];
  return s;
}

CycleReport find_cycles4(const Instance& inst, const ThirdsVector& H) {
  IIDM_CHECK(static_cast<int>(H.h.size()) == inst.num_edges(), "H length mismatch");
  const HGraph g(inst, H.h);
  CycleReport rep;
  for (int u1 = 0; u1 < inst.num_offline(); ++u1) {
    const auto& nb = g.nu[u1];
    for (size_t i = 0; i < nb.size(); ++i) {
      for (size_t j = 0; j < nb.size(); ++j) {
        const int v1 = nb[i].first, v2 = nb[j].first;
        if (v1 >= v2) continue;
        for (const auto& [u2, e21] : g.nv[v1]) {
          if (u2 <= u1) continue;
          const int e22 = g.edge(u2, v2);
          if (e22 < 0) continue;
          const int e11 = nb[i].second, e12 = nb[j].second;
          const bool t11 = H.h[e11] == 2, t12 = H.h[e12] == 2;
          const bool t21 = H.h[e21] == 2, t22 = H.h[e22] == 2;
          const int thick = t11 + t12 + t21 + t22;
          Cycle4 c{u1, u2, std::min(v1, v2), std::max(v1, v2), CycleType::kC3};
          if (thick == 2) {
            IIDM_CHECK((t11 && t22) || (t12 && t21), "adjacent thick edges in a 4-cycle");
            c.type = CycleType::kC1;
            rep.c1.push_back(c);
          } else if (thick == 1) {
            c.type = CycleType::kC2;
            rep.c2.push_back(c);
          } else {
            IIDM_CHECK(thick == 0, "4-cycle with three or more thick edges");
            rep.c3.push_back(c);
          }
        }
      }
    }
  }
  auto key = [](const Cycle4& c) { return std::tuple(c.u1, c.u2, c.v1, c.v2); };
  for (auto* l : {&rep.c1, &rep.c2, &rep.c3})
    std::sort(l->begin(), l->end(), [&](const Cycle4& x, const Cycle4& y) { return key(x) < key(y); });
  return rep;
}

ThirdsVector break_cycles(const Instance& inst, const ThirdsVector& H) {
  ThirdsVector out = H;
  const auto su0 = thirds_offline(inst, H);
  const auto sv0 = thirds_online(inst, H);
  const size_t c1_initial = find_cycles4(inst, H).c1.size();
  const int cap = 4 * inst.num_edges() + 8;
  for (int iter = 0;; ++iter) {
    IIDM_CHECK(iter <= cap, "cycle breaking did not terminate");
    const CycleReport rep = find_cycles4(inst, out);
    if (rep.c2.empty() && rep.c3.empty()) break;
    for (const Cycle4& c : rep.c2) {
      const HGraph g(inst, out.h);
      if (!still_a(g, out.h, c, 1)) continue;
      const CycleEdges ce = cycle_edges(g, c);
      // Relabel so the thick edge is (a, b); a' and b' are the far ends.
      int ab, abp, apb, apbp;
      if (out.h[ce.a] == 2) {
        ab = ce.a; abp = ce.b; apb = ce.c; apbp = ce.d;
      } else if (out.h[ce.b] == 2) {
        ab = ce.b; abp = ce.a; apb = ce.d; apbp = ce.c;
      } else if (out.h[ce.c] == 2) {
        ab = ce.c; abp = ce.d; apb = ce.a; apbp = ce.b;
      } else {
        ab = ce.d; abp = ce.c; apb = ce.b; apbp = ce.a;
      }
      out.h[ab] = 1;
      out.h[abp] = 2;
      out.h[apb] = 2;
      out.h[apbp] = 0;
    }
    const HGraph g(inst, out.h);
    for (const Cycle4& c : rep.c3) {
      if (!still_a(g, out.h, c, 0)) continue;
      const CycleEdges ce = cycle_edges(g, c);
      out.h[ce.a] = 2;
      out.h[ce.d] = 2;
      out.h[ce.b] = 0;
      out.h[ce.c] = 0;
      break;
    }
  }
  IIDM_CHECK(thirds_offline(inst, out) == su0, "cycle breaking changed an offline sum");
  IIDM_CHECK(thirds_online(inst, out) == sv0, "cycle breaking changed an online sum");
  const CycleReport fin = find_cycles4(inst, out);
  IIDM_CHECK(fin.c2.empty() && fin.c3.empty(), "C2/C3 cycles remain");
  IIDM_CHECK(fin.c1.size() <= c1_initial, "cycle breaking created a C1 cycle");
  return out;
}

ModifiedVector second_modification(const Instance& inst, const ThirdsVector& H) {
  ModifiedVector out;
  out.h.resize(H.h.size());
  for (size_t e = 0; e < H.h.size(); ++e) out.h[e] = H.h[e] / 3.0;
  out.case_tag.assign(inst.num_online(), 0);
  const auto hu = thirds_offline(inst, H);

  // Whether offline u carries a thick edge other than e.
  auto other_thick = [&](int u, int e) {
    for (int x : inst.adj_u[u])
      if (x != e && H.h[x] == 2) return true;
    return false;
  };

  for (int v = 0; v < inst.num_online(); ++v) {
    std::vector<int> es;
    int hv = 0;
    for (int e : inst.adj_v[v])
      if (H.h[e] > 0) {
        es.push_back(e);
        hv += H.h[e];
      }
    if (hv != 3) continue;
    int tag = 0;
    if (es.size() == 2) {
      int thick = es[0], thin = es[1];
      if (H.h[thick] != 2) std::swap(thick, thin);
      IIDM_CHECK(H.h[thick] == 2 && H.h[thin] == 1, "two-neighbor signature must be thick+thin");
      const int T = hu[inst.edges[thick].u], S = hu[inst.edges[thin].u];
      double xt = 0, xs = 0;
      if (T == 3 && S == 1) { tag = 1; xs = 0.1; xt = 0.9; }
      else if (T == 3 && S == 2) { tag = 2; xs = 0.15; xt = 0.85; }
      else if (T == 2 && S == 3) { tag = 3; xt = 0.6; xs = 0.4; }
      else if (T == 2 && S == 1) { tag = 8; xs = 0.25; xt = 0.75; }
      else if (T == 2 && S == 2) { tag = 9; xs = 0.3; xt = 0.7; }
      else if (T == 3 && S == 3) {
        const bool thick_side = other_thick(inst.edges[thin].u, thin);
        tag = thick_side ? 11 : 12;
        xs = thick_side ? kX1 : kX2;
        xt = 1.0 - xs;
      }
      if (tag) {
        out.h[thick] = xt;
        out.h[thin] = xs;
      }
    } else if (es.size() == 3) {
      std::array<int, 3> k{hu[inst.edges[es[0]].u], hu[inst.edges[es[1]].u],
                           hu[inst.edges[es[2]].u]};
      std::array<int, 3> s = k;
      std::sort(s.begin(), s.end());
      // Output per neighbor, keyed by its H_u in thirds (index 1..3).
      std::array<double, 4> val{0, 0, 0, 0};
      if (s == std::array<int, 3>{1, 3, 3}) { tag = 4; val[1] = 0.1; val[3] = 0.45; }
      else if (s == std::array<int, 3>{2, 3, 3}) { tag = 5; val[2] = 0.2; val[3] = 0.4; }
      else if (s == std::array<int, 3>{1, 2, 3}) { tag = 6; val[1] = 0.15; val[2] = 0.2; val[3] = 0.65; }
      else if (s == std::array<int, 3>{1, 1, 3}) { tag = 7; val[1] = 0.1; val[3] = 0.8; }
      else if (s == std::array<int, 3>{2, 2, 3}) { tag = 10; val[2] = 0.25; val[3] = 0.5; }
      if (tag)
        for (int i = 0; i < 3; ++i) out.h[es[i]] = val[k[i]];
    }
    out.case_tag[v] = tag;
  }
  return out;
}

std::vector<int> sample_list(const Instance& inst, int v, const std::vector<double>& hp,
                             Rng& rng) {
  std::vector<int> es;
  std::vector<double> w;
  double total = 0.0;
  for (int e : inst.adj_v[v]) {
    if (hp[e] < 0.0) throw ValidationError("negative list mass", "/h/" + std::to_string(e));
    if (hp[e] > 0.0) {
      es.push_back(e);
      w.push_back(hp[e]);
      total += hp[e];
    }
  }
  if (total > 1.0 + 1e-9)
    throw ValidationError("list masses exceed 1", "/online/" + std::to_string(v));
  std::vector<int> out;
  double r = uniform01(rng);
  if (r >= total) return out;
  double mass = 1.0;  // first draw: normalizer 1 (drop mass included)
  while (!es.empty()) {
    const double x = r * mass;
    size_t pick = es.size() - 1;
    double acc = 0.0;
    for (size_t i = 0; i < es.size(); ++i) {
      acc += w[i];
      if (x < acc) {
        pick = i;
        break;
      }
    }
    out.push_back(es[pick]);
    mass = 0.0;
    es.erase(es.begin() + pick);
    w.erase(w.begin() + pick);
    for (double y : w) mass += y;
    r = uniform01(rng);
  }
  return out;
}

}  // namespace iidm
