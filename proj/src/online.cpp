#include "iidm/online.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iidm/errors.hpp"

namespace iidm {

namespace {

RunResult empty_result(const Instance& inst, bool stochastic = false) {
  RunResult r;
  r.edge_matches.assign(inst.num_edges(), 0);
  r.offline_matches.assign(inst.num_offline(), 0);
  if (stochastic) {
    r.edge_probes.assign(inst.num_edges(), 0);
    r.edge_successes.assign(inst.num_edges(), 0);
  }
  return r;
}

void record(const Instance& inst, RunResult& r, int e, double w) {
  ++r.edge_matches[e];
  ++r.offline_matches[inst.edges[e].u];
  r.total += w;
}

// Per online type: neighbor edges and cumulative selection masses f_e / r_v.
struct ChoiceTable {
  std::vector<int> start;
  std::vector<int> edge;
  std::vector<double> cum;

  ChoiceTable(const Instance& inst, const std::vector<double>& f) {
    start.assign(inst.num_online() + 1, 0);
    for (int v = 0; v < inst.num_online(); ++v) {
      double acc = 0.0;
      for (int e : inst.adj_v[v]) {
        if (f[e] <= 0.0) continue;
        acc += f[e] / inst.online[v].r;
        edge.push_back(e);
        cum.push_back(acc);
      }
      IIDM_CHECK(acc <= 1.0 + 1e-7, "selection masses at an online type exceed 1");
      start[v + 1] = static_cast<int>(edge.size());
    }
  }

  int pick(int v, double x) const {
    for (int i = start[v]; i < start[v + 1]; ++i)
      if (x < cum[i]) return edge[i];
    return -1;
  }
};

}  // namespace

ArrivalSampler::ArrivalSampler(const Instance& inst) {
  const int m = inst.num_online();
  IIDM_CHECK(m > 0, "no online types");
  double total = 0.0;
  for (const auto& t : inst.online) total += t.r;
  prob_.resize(m);
  alias_.assign(m, 0);
  std::vector<double> scaled(m);
  std::vector<int> small, large;
  for (int v = 0; v < m; ++v) {
    scaled[v] = inst.online[v].r / total * m;
    (scaled[v] < 1.0 ? small : large).push_back(v);
  }
  while (!small.empty() && !large.empty()) {
    const int s = small.back(), l = large.back();
    small.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (int v : large) prob_[v] = 1.0;
  for (int v : small) prob_[v] = 1.0;
}

int ArrivalSampler::draw(Rng& rng) const {
  const double x = uniform01(rng) * static_cast<double>(prob_.size());
  const int i = std::min(static_cast<int>(x), static_cast<int>(prob_.size()) - 1);
  return (x - i < prob_[i]) ? i : alias_[i];
}

std::vector<int> ArrivalSampler::sample(int n, Rng& rng) const {
  std::vector<int> out(n);
  for (int t = 0; t < n; ++t) out[t] = draw(rng);
  return out;
}

std::vector<int> sample_arrivals(const Instance& inst, Rng& rng) {
  return ArrivalSampler(inst).sample(inst.n, rng);
}

std::vector<double> attenuate(const Instance& inst, const std::vector<double>& f, double eta) {
  std::vector<double> out = f;
  std::vector<double> big_u(inst.num_offline(), 0.0), big_v(inst.num_online(), 0.0);
  for (int e = 0; e < inst.num_edges(); ++e) {
    if (f[e] <= 0.5) continue;
    const Edge& ed = inst.edges[e];
    big_u[ed.u] = std::max(big_u[ed.u], f[e]);
    big_v[ed.v] = std::max(big_v[ed.v], f[e]);
  }
  for (int e = 0; e < inst.num_edges(); ++e) {
    const Edge& ed = inst.edges[e];
    if (f[e] > 0.5) {
      out[e] = f[e] + eta;
      continue;
    }
    const double fl = std::max(big_u[ed.u], big_v[ed.v]);
    if (fl > 0.5) out[e] = f[e] * (1.0 - (fl + eta)) / (1.0 - fl);
  }
  std::vector<double> su(inst.num_offline(), 0.0), sv(inst.num_online(), 0.0);
  for (int e = 0; e < inst.num_edges(); ++e) {
    IIDM_CHECK(out[e] >= 0.0 && out[e] <= 1.0, "attenuated value outside [0,1]");
    su[inst.edges[e].u] += out[e];
    sv[inst.edges[e].v] += out[e];
  }
  for (double s : su) IIDM_CHECK(s <= 1.0 + 1e-9, "attenuation broke an offline sum");
  for (double s : sv) IIDM_CHECK(s <= 1.0 + 1e-9, "attenuation broke an online sum");
  return out;
}

RunResult play_ew0(const Instance& inst, const MatchingPlan& plan, const std::vector<int>& arrivals) {
  RunResult r = empty_result(inst);
  std::vector<int> seen(inst.num_online(), 0);
  const int k = std::min(plan.size(), 2);
  for (int v : arrivals) {
    const int c = seen[v]++;
    if (c >= k) continue;
    const int e = plan.partner[c][v];
    if (e < 0 || r.offline_matches[inst.edges[e].u] > 0) continue;
    record(inst, r, e, inst.edges[e].w);
  }
  return r;
}

RunResult play_ew1(const Instance& inst, const std::vector<int>& F, const MatchingPlan& plan,
                   double h, const std::vector<int>& arrivals, Rng& rng) {
  IIDM_CHECK(plan.size() == 3, "EW1 needs three matchings");
  // Gamma-2 small edges: the offline end also carries a large edge.
  std::vector<char> has_large(inst.num_offline(), 0);
  for (int e = 0; e < inst.num_edges(); ++e)
    if (F[e] == 2) has_large[inst.edges[e].u] = 1;
  RunResult r = empty_result(inst);
  std::vector<int> seen(inst.num_online(), 0);
  for (int v : arrivals) {
    const int c = seen[v]++;
    if (c >= 3) continue;
    const int e = plan.partner[c][v];
    if (e < 0 || r.offline_matches[inst.edges[e].u] > 0) continue;
    if (c == 2 && F[e] == 1 && has_large[inst.edges[e].u] && !bernoulli(rng, h)) continue;
    record(inst, r, e, inst.edges[e].w);
  }
  return r;
}

RunResult play_ew2(const Instance& inst, const MatchingPlan& plan, const std::vector<int>& arrivals) {
  return play_ew0(inst, plan, arrivals);
}

RunResult run_ew0(const Instance& inst, const std::vector<double>& f,
                  const std::vector<int>& arrivals, Rng& rng) {
  const IntegralVector F = dr(inst, f, 2, rng);
  const MatchingPlan plan = pm2(inst, F.F, rng);
  return play_ew0(inst, plan, arrivals);
}

RunResult run_ew07(const Instance& inst, const std::vector<double>& f,
                   const std::vector<int>& arrivals, Rng& rng, double eta) {
  return run_ew0(inst, attenuate(inst, f, eta), arrivals, rng);
}

RunResult run_ew1(const Instance& inst, const std::vector<int>& F, double h,
                  const std::vector<int>& arrivals, Rng& rng) {
  if (!(h >= 0.0 && h <= 1.0)) throw ValidationError("h outside [0,1]", "/h");
  const MatchingPlan plan = pm3(inst, F, rng);
  return play_ew1(inst, F, plan, h, arrivals, rng);
}

RunResult run_ew2(const Instance& inst, const std::vector<int>& F, double y1, double y2,
                  const std::vector<int>& arrivals, Rng& rng) {
  const MatchingPlan plan = pm_star(inst, F, y1, y2, rng);
  return play_ew2(inst, plan, arrivals);
}

RunResult run_ew(const Instance& inst, const std::vector<double>& f, const AlgorithmParams& params,
                 const std::vector<int>& arrivals, Rng& rng) {
  if (!(params.q_ew1 >= 0.0 && params.q_ew1 <= 1.0))
    throw ValidationError("mixture weight outside [0,1]", "/q");
  const bool use_ew1 = bernoulli(rng, params.q_ew1);
  const IntegralVector F = dr(inst, f, 3, rng);
  return use_ew1 ? run_ew1(inst, F.F, params.h, arrivals, rng)
                 : run_ew2(inst, F.F, params.y1, params.y2, arrivals, rng);
}

RunResult play_rla(const Instance& inst, const std::vector<double>& hp,
                   const std::vector<int>& arrivals, Rng& rng) {
  RunResult r = empty_result(inst);
  for (int v : arrivals) {
    for (int e : sample_list(inst, v, hp, rng)) {
      const int u = inst.edges[e].u;
      if (r.offline_matches[u] > 0) continue;
      record(inst, r, e, inst.offline[u].w);
      break;
    }
  }
  return r;
}

RunResult run_vw(const Instance& inst, const std::vector<double>& f,
                 const std::vector<int>& arrivals, Rng& rng) {
  const ThirdsVector H = dr_thirds(inst, f, rng);
  const ThirdsVector Hb = break_cycles(inst, H);
  const ModifiedVector mod = second_modification(inst, Hb);
  return play_rla(inst, mod.h, arrivals, rng);
}

RunResult run_smb(const Instance& inst, int b, const std::vector<double>& f,
                  const std::vector<int>& arrivals, Rng& rng) {
  if (b < 1) throw ValidationError("b must be >= 1", "/b");
  const ChoiceTable table(inst, f);
  RunResult r = empty_result(inst, true);
  for (int v : arrivals) {
    const int e = table.pick(v, uniform01(rng));
    if (e < 0) continue;
    const int u = inst.edges[e].u;
    if (r.offline_matches[u] >= b) continue;
    ++r.probes;
    ++r.edge_probes[e];
    if (uniform01(rng) >= inst.edges[e].p) continue;
    ++r.successes;
    ++r.edge_successes[e];
    record(inst, r, e, inst.edges[e].w);
  }
  return r;
}

RunResult run_sm(const Instance& inst, const std::vector<double>& f,
                 const std::vector<int>& arrivals, Rng& rng) {
  return run_smb(inst, 1, f, arrivals, rng);
}

TwoChoice gen_two_choice_list(const std::vector<double>& masses, Rng& rng) {
  double total = 0.0;
  for (double m : masses) {
    if (m < 0.0) throw ValidationError("negative two-choice mass", "/f");
    total += m;
  }
  if (total > 1.0 + 1e-9) throw ValidationError("two-choice masses exceed 1", "/f");
  auto locate = [&](double x) {
    double acc = 0.0;
    for (size_t i = 0; i < masses.size(); ++i) {
      acc += masses[i];
      if (x < acc) return static_cast<int>(i);
    }
    return -1;
  };
  const double x = uniform01(rng);
  double y = x + 0.5;
  if (y >= 1.0) y -= 1.0;
  return {locate(x), locate(y)};
}

RunResult run_unifp(const Instance& inst, const std::vector<double>& f, double p,
                    const std::vector<int>& arrivals, Rng& rng, bool second_probe) {
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("probe probability outside (0,1]", "/p");
  RunResult r = empty_result(inst, true);
  std::vector<std::vector<double>> masses(inst.num_online());
  for (int v = 0; v < inst.num_online(); ++v)
    for (int e : inst.adj_v[v]) masses[v].push_back(std::max(0.0, f[e]) / inst.online[v].r);
  // Probes e; returns true on success.
  auto probe = [&](int e) {
    ++r.probes;
    ++r.edge_probes[e];
    if (uniform01(rng) >= p) return false;
    ++r.successes;
    ++r.edge_successes[e];
    record(inst, r, e, inst.edges[e].w);
    return true;
  };
  for (int v : arrivals) {
    const TwoChoice tc = gen_two_choice_list(masses[v], rng);
    const int e1 = tc.first >= 0 ? inst.adj_v[v][tc.first] : -1;
    const int e2 = tc.second >= 0 ? inst.adj_v[v][tc.second] : -1;
    auto available = [&](int e) { return e >= 0 && r.offline_matches[inst.edges[e].u] == 0; };
    if (available(e1)) {
      if (probe(e1) || !second_probe) continue;
      if (e2 != e1 && available(e2)) probe(e2);
    } else if (available(e2)) {
      probe(e2);
    }
  }
  return r;
}

int count_run_violations(const Instance& inst, const RunResult& r, int capacity, int rounds,
                         bool vertex_weighted) {
  int bad = 0;
  long matches = 0;
  double total = 0.0;
  std::vector<int> per_u(inst.num_offline(), 0);
  for (int e = 0; e < inst.num_edges(); ++e) {
    matches += r.edge_matches[e];
    per_u[inst.edges[e].u] += r.edge_matches[e];
    const double w = vertex_weighted ? inst.offline[inst.edges[e].u].w : inst.edges[e].w;
    total += w * r.edge_matches[e];
    if (!r.edge_successes.empty() && r.edge_matches[e] > r.edge_successes[e]) ++bad;
    if (!r.edge_probes.empty() && r.edge_successes[e] > r.edge_probes[e]) ++bad;
  }
  if (matches > rounds) ++bad;
  for (int u = 0; u < inst.num_offline(); ++u) {
    if (per_u[u] != r.offline_matches[u]) ++bad;
    if (r.offline_matches[u] > capacity) ++bad;
  }
  if (std::fabs(total - r.total) > 1e-9 * (1.0 + std::fabs(total))) ++bad;
  if (r.successes > r.probes) ++bad;
  return bad;
}

}  // namespace iidm
