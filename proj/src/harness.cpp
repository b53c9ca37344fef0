#include "iidm/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "iidm/errors.hpp"
#include "iidm/rounding.hpp"

namespace iidm {

namespace {

constexpr long kBlock = 256;

bool unit_rates(const Instance& inst) {
  for (const auto& t : inst.online)
    if (t.r != 1.0) return false;
  return true;
}

double parse_double(const std::string& key, const std::string& s) {
  try {
    size_t pos = 0;
    const double x = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'", "/params/" + key);
  }
}

struct Sums {
  long trials = 0;
  double total = 0.0, total_sq = 0.0;
  std::vector<double> edge, offline;
  long violations = 0;

  void add(const RunResult& r) {
    ++trials;
    total += r.total;
    total_sq += r.total * r.total;
    for (size_t e = 0; e < edge.size(); ++e) edge[e] += r.edge_matches[e];
    for (size_t u = 0; u < offline.size(); ++u) offline[u] += r.offline_matches[u];
  }

  void merge(const Sums& o) {
    trials += o.trials;
    total += o.total;
    total_sq += o.total_sq;
    for (size_t e = 0; e < edge.size(); ++e) edge[e] += o.edge[e];
    for (size_t u = 0; u < offline.size(); ++u) offline[u] += o.offline[u];
    violations += o.violations;
  }
};

double bound_of(const Instance& inst, Algorithm alg, const std::vector<double>& f) {
  double s = 0.0;
  for (int e = 0; e < inst.num_edges(); ++e) {
    const Edge& ed = inst.edges[e];
    if (alg == Algorithm::kVw) s += inst.offline[ed.u].w * f[e];
    else if (is_stochastic(alg)) s += ed.w * ed.p * f[e];
    else s += ed.w * f[e];
  }
  return s;
}

}  // namespace

Algorithm parse_algorithm(const std::string& name) {
  static const std::map<std::string, Algorithm> names = {
      {"ew0", Algorithm::kEw0}, {"ew07", Algorithm::kEw07}, {"ew1", Algorithm::kEw1},
      {"ew2", Algorithm::kEw2}, {"ew", Algorithm::kEw},     {"vw", Algorithm::kVw},
      {"sm", Algorithm::kSm},   {"unifp", Algorithm::kUnifp}, {"smb", Algorithm::kSmb}};
  auto it = names.find(name);
  if (it == names.end()) throw ValidationError("unknown algorithm '" + name + "'", "/alg");
  return it->second;
}

std::string algorithm_name(Algorithm alg) {
  switch (alg) {
    case Algorithm::kEw0: return "ew0";
    case Algorithm::kEw07: return "ew07";
    case Algorithm::kEw1: return "ew1";
    case Algorithm::kEw2: return "ew2";
    case Algorithm::kEw: return "ew";
    case Algorithm::kVw: return "vw";
    case Algorithm::kSm: return "sm";
    case Algorithm::kUnifp: return "unifp";
    case Algorithm::kSmb: return "smb";
  }
  return "?";
}

bool is_stochastic(Algorithm alg) {
  return alg == Algorithm::kSm || alg == Algorithm::kSmb || alg == Algorithm::kUnifp;
}

AlgorithmParams parse_params(const ParamMap& params) {
  AlgorithmParams p;
  for (const auto& [k, v] : params) {
    if (k == "q") p.q_ew1 = parse_double(k, v);
    else if (k == "h") p.h = parse_double(k, v);
    else if (k == "y1") p.y1 = parse_double(k, v);
    else if (k == "y2") p.y2 = parse_double(k, v);
    else if (k == "eta") p.eta = parse_double(k, v);
    else if (k == "b") {
      const double b = parse_double(k, v);
      if (b < 1 || b != std::floor(b)) throw ValidationError("b must be a positive integer", "/params/b");
      p.b = static_cast<int>(b);
    } else if (k == "second_probe") {
      if (v == "1" || v == "true") p.second_probe = true;
      else if (v == "0" || v == "false") p.second_probe = false;
      else throw ValidationError("expected true/false", "/params/second_probe");
    } else {
      throw ValidationError("unknown parameter '" + k + "'", "/params/" + k);
    }
  }
  return p;
}

Prepared prepare(const Instance& raw, Algorithm alg, const AlgorithmParams& params) {
  require_valid(raw);
  Prepared prep{alg, params, raw, {}, 0.0, false};
  const bool base = !(alg == Algorithm::kSm || alg == Algorithm::kSmb);
  if (alg == Algorithm::kUnifp) {
    if (!raw.uniform_p) throw ValidationError("unifp needs the uniform_p flag", "/flags/uniform_p");
    for (size_t e = 0; e < raw.edges.size(); ++e)
      if (raw.edges[e].w != 1.0)
        throw ValidationError("unifp is unweighted; edge weight must be 1",
                              "/edges/" + std::to_string(e) + "/w");
  }
  if (!is_stochastic(alg))
    for (size_t e = 0; e < raw.edges.size(); ++e)
      if (raw.edges[e].p != 1.0)
        throw ValidationError("algorithm " + algorithm_name(alg) + " needs probe_prob = 1",
                              "/edges/" + std::to_string(e) + "/p");
  if (base && !unit_rates(raw)) prep.inst = split_unit_rates(raw);
  const Instance& inst = prep.inst;

  if (inst.has_target()) {
    prep.lp.f = inst.target_f;
    prep.from_target = true;
  } else {
    switch (alg) {
      case Algorithm::kVw:
        prep.lp = solve_for(inst, LpKind::kBase, Objective::kVertexWeighted);
        break;
      case Algorithm::kSm: prep.lp = solve_for(inst, LpKind::kStoch, Objective::kEdgeWeighted); break;
      case Algorithm::kSmb:
        prep.lp = solve_for(inst, LpKind::kBMatch, Objective::kEdgeWeighted, params.b);
        break;
      case Algorithm::kUnifp:
        prep.lp = solve_for(inst, LpKind::kUniform, Objective::kUnweighted);
        break;
      default: prep.lp = solve_for(inst, LpKind::kBase, Objective::kEdgeWeighted); break;
    }
  }
  prep.lp_bound = bound_of(inst, alg, prep.lp.f);
  prep.lp.objective = prep.lp_bound;
  return prep;
}

RunResult run_trial(const Prepared& prep, Rng& rng) {
  const Instance& inst = prep.inst;
  const auto& f = prep.lp.f;
  const auto& P = prep.params;
  const std::vector<int> arrivals = sample_arrivals(inst, rng);
  switch (prep.alg) {
    case Algorithm::kEw0: return run_ew0(inst, f, arrivals, rng);
    case Algorithm::kEw07: return run_ew07(inst, f, arrivals, rng, P.eta);
    case Algorithm::kEw1: return run_ew1(inst, dr(inst, f, 3, rng).F, P.h, arrivals, rng);
    case Algorithm::kEw2: return run_ew2(inst, dr(inst, f, 3, rng).F, P.y1, P.y2, arrivals, rng);
    case Algorithm::kEw: return run_ew(inst, f, P, arrivals, rng);
    case Algorithm::kVw: return run_vw(inst, f, arrivals, rng);
    case Algorithm::kSm: return run_sm(inst, f, arrivals, rng);
    case Algorithm::kSmb: return run_smb(inst, P.b, f, arrivals, rng);
    case Algorithm::kUnifp:
      return run_unifp(inst, f, *inst.uniform_p, arrivals, rng, P.second_probe);
  }
  throw InternalError("unknown algorithm");
}

RatioEstimate estimate_ratio(const Prepared& prep, long trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw ValidationError("trials must be >= 1", "/trials");
  if (threads < 1) threads = 1;
  const Instance& inst = prep.inst;
  const long blocks = (trials + kBlock - 1) / kBlock;
  const int capacity = prep.alg == Algorithm::kSmb ? prep.params.b : 1;
  const bool vw = prep.alg == Algorithm::kVw;

  std::vector<Sums> partial(blocks);
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    try {
      for (long b; !failed && (b = next.fetch_add(1)) < blocks;) {
        Sums s;
        s.edge.assign(inst.num_edges(), 0.0);
        s.offline.assign(inst.num_offline(), 0.0);
        const long hi = std::min(trials, (b + 1) * kBlock);
        for (long t = b * kBlock; t < hi; ++t) {
          Rng rng = make_rng(trial_seed(seed, static_cast<std::uint64_t>(t)));
          const RunResult r = run_trial(prep, rng);
          s.violations += count_run_violations(inst, r, capacity, inst.n, vw);
          s.add(r);
        }
        partial[b] = std::move(s);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  const int nt = static_cast<int>(std::min<long>(threads, blocks));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  Sums all;
  all.edge.assign(inst.num_edges(), 0.0);
  all.offline.assign(inst.num_offline(), 0.0);
  for (const Sums& s : partial) all.merge(s);

  RatioEstimate out;
  out.alg = algorithm_name(prep.alg);
  out.trials = trials;
  out.seed = seed;
  const double T = static_cast<double>(trials);
  out.alg_mean = all.total / T;
  const double var =
      trials > 1 ? std::max(0.0, (all.total_sq - T * out.alg_mean * out.alg_mean) / (T - 1)) : 0.0;
  out.alg_sd = std::sqrt(var);
  out.lp_bound = prep.lp_bound;
  out.ratio = prep.lp_bound > 0 ? out.alg_mean / prep.lp_bound : 0.0;
  out.ci95 = prep.lp_bound > 0 ? 1.96 * out.alg_sd / std::sqrt(T) / prep.lp_bound : 0.0;
  out.violations = all.violations;
  const bool stoch = is_stochastic(prep.alg);
  for (int e = 0; e < inst.num_edges(); ++e) {
    const Edge& ed = inst.edges[e];
    EdgeStat st;
    st.u = inst.offline[ed.u].id;
    st.v = inst.online[ed.v].id;
    st.f = prep.lp.f[e];
    st.p_match = all.edge[e] / T;
    const double denom = stoch ? st.f * ed.p : st.f;
    st.ratio = denom > 1e-12 ? st.p_match / denom : 0.0;
    st.weight = st.p_match * (vw ? inst.offline[ed.u].w : ed.w);
    out.edges.push_back(st);
  }
  for (int u = 0; u < inst.num_offline(); ++u) out.offline_freq.push_back(all.offline[u] / T);
  return out;
}

RatioEstimate estimate_ratio(const Instance& inst, const std::string& alg, const ParamMap& params,
                             long trials, std::uint64_t seed, int threads) {
  const Prepared prep = prepare(inst, parse_algorithm(alg), parse_params(params));
  return estimate_ratio(prep, trials, seed, threads);
}

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

std::string run_csv(const RatioEstimate& r) {
  std::ostringstream os;
  os << "alg,trials,seed,alg_mean,lp_bound,ratio,ci95\n"
     << r.alg << ',' << r.trials << ',' << r.seed << ',' << fmt(r.alg_mean) << ','
     << fmt(r.lp_bound) << ',' << fmt(r.ratio) << ',' << fmt(r.ci95) << '\n';
  return os.str();
}

std::string edge_csv(const RatioEstimate& r) {
  std::ostringstream os;
  os << "u,v,f_e,p_match,ratio_e\n";
  for (const auto& e : r.edges)
    os << e.u << ',' << e.v << ',' << fmt(e.f) << ',' << fmt(e.p_match) << ',' << fmt(e.ratio)
       << '\n';
  return os.str();
}

std::string estimate_json(const RatioEstimate& r, bool with_edges, int indent) {
  nlohmann::ordered_json j;
  j["alg"] = r.alg;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["alg_mean"] = r.alg_mean;
  j["lp_bound"] = r.lp_bound;
  j["ratio"] = r.ratio;
  j["ci95"] = r.ci95;
  if (with_edges) {
    auto& arr = j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : r.edges)
      arr.push_back({{"u", e.u}, {"v", e.v}, {"f_e", e.f}, {"p_match", e.p_match},
                     {"ratio_e", e.ratio}});
  }
  return j.dump(indent);
}

}  // namespace iidm
