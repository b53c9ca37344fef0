// iidm: command-line front end.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "iidm/analytic.hpp"
#include "iidm/errors.hpp"
#include "iidm/harness.hpp"
#include "iidm/rounding.hpp"

using namespace iidm;
using ojson = nlohmann::ordered_json;

namespace {

struct Common {
  std::string instance;
  std::string alg = "ew";
  long trials = 1000;
  std::uint64_t seed = 1;
  std::vector<std::string> params;
  std::string out;
  std::string format = "csv";
  int threads = 1;
};

ParamMap to_map(const std::vector<std::string>& kv) {
  ParamMap m;
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("expected k=v, got '" + s + "'", "/params");
    m[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return m;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw ValidationError("cannot write '" + c.out + "'", "/out");
  f << text;
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

Prepared load_prepared(const Common& c, ParamMap& pm) {
  const Instance inst = load_instance(c.instance);
  return prepare(inst, parse_algorithm(c.alg), parse_params(pm));
}

void cmd_solve(const Common& c) {
  ParamMap pm = to_map(c.params);
  const Prepared p = load_prepared(c, pm);
  const Instance& inst = p.inst;
  if (c.format == "json") {
    ojson j;
    j["alg"] = c.alg;
    j["objective"] = p.lp_bound;
    j["iterations"] = p.lp.iterations;
    j["cuts"] = p.lp.cuts;
    j["rows"] = p.lp.rows;
    j["from_target"] = p.from_target;
    auto& arr = j["f"] = ojson::array();
    for (int e = 0; e < inst.num_edges(); ++e)
      arr.push_back({{"u", inst.offline[inst.edges[e].u].id},
                     {"v", inst.online[inst.edges[e].v].id},
                     {"f", p.lp.f[e]}});
    emit(c, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "u,v,f_e\n";
    for (int e = 0; e < inst.num_edges(); ++e)
      os << inst.offline[inst.edges[e].u].id << ',' << inst.online[inst.edges[e].v].id << ','
         << num(p.lp.f[e]) << '\n';
    emit(c, os.str());
  }
}

void cmd_round(const Common& c, int k) {
  ParamMap pm = to_map(c.params);
  const Prepared p = load_prepared(c, pm);
  const Instance& inst = p.inst;
  Rng rng = make_rng(trial_seed(c.seed, 0));
  const IntegralVector F = dr(inst, p.lp.f, k, rng);
  IIDM_CHECK(count_rounding_violations(inst, p.lp.f, F) == 0, "rounding guarantees violated");
  if (c.format == "json") {
    ojson j;
    j["k"] = k;
    j["seed"] = c.seed;
    auto& arr = j["F"] = ojson::array();
    for (int e = 0; e < inst.num_edges(); ++e)
      arr.push_back({{"u", inst.offline[inst.edges[e].u].id},
                     {"v", inst.online[inst.edges[e].v].id},
                     {"f", p.lp.f[e]},
                     {"F", F.F[e]}});
    emit(c, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "u,v,f_e,F_e\n";
    for (int e = 0; e < inst.num_edges(); ++e)
      os << inst.offline[inst.edges[e].u].id << ',' << inst.online[inst.edges[e].v].id << ','
         << num(p.lp.f[e]) << ',' << F.F[e] << '\n';
    emit(c, os.str());
  }
}

RatioEstimate simulate(const Common& c) {
  ParamMap pm = to_map(c.params);
  const Prepared p = load_prepared(c, pm);
  const RatioEstimate r = estimate_ratio(p, c.trials, c.seed, c.threads);
  IIDM_CHECK(r.violations == 0, "per-trial capacity or accounting check failed");
  return r;
}

void cmd_analytic(const Common& c, bool gamma) {
  if (gamma) {
    const auto table = gamma_tables();
    if (c.format == "json") {
      ojson arr = ojson::array();
      for (const auto& g : table)
        arr.push_back({{"family", g.family}, {"name", g.name}, {"method", g.method},
                       {"pr_g", g.pr_g}, {"computed", g.computed}, {"reference", g.reference},
                       {"matches", g.matches}, {"note", g.note}});
      emit(c, arr.dump(2) + "\n");
    } else {
      std::ostringstream os;
      os << "family,name,method,pr_g,computed,reference,matches,note\n";
      for (const auto& g : table)
        os << g.family << ',' << g.name << ',' << g.method << ',' << num(g.pr_g) << ','
           << num(g.computed) << ',' << num(g.reference) << ',' << (g.matches ? "yes" : "no") << ",\""
           << g.note << "\"\n";
      emit(c, os.str());
    }
    return;
  }
  const auto rows = constants_report();
  if (c.format == "json") {
    ojson arr = ojson::array();
    for (const auto& r : rows)
      arr.push_back({{"name", r.name}, {"computed", r.computed}, {"reference", r.reference},
                     {"diff", r.diff()}, {"verdict", r.verdict()}});
    emit(c, arr.dump(2) + "\n");
  } else {
    emit(c, constants_csv(rows));
  }
}

void cmd_generate(const Common& c, const std::string& gadget, int m, int pad) {
  Instance inst;
  if (!gadget.empty()) {
    inst = gen_gadget(parse_gadget_kind(gadget), m, pad);
  } else {
    const ParamMap pm = to_map(c.params);
    RandomParams rp;
    rp.seed = c.seed;
    auto get = [&](const std::string& k, double d) {
      auto it = pm.find(k);
      return it == pm.end() ? d : std::stod(it->second);
    };
    for (const auto& [k, v] : pm)
      if (k != "u" && k != "v" && k != "density" && k != "wmin" && k != "wmax" && k != "pmin" &&
          k != "pmax" && k != "horizon")
        throw ValidationError("unknown generator parameter '" + k + "'", "/params/" + k);
    rp.num_u = static_cast<int>(get("u", 4));
    rp.num_v = static_cast<int>(get("v", 4));
    rp.density = get("density", 1.0);
    rp.weight = {get("wmin", 1.0), get("wmax", 1.0)};
    rp.p = {get("pmin", 1.0), get("pmax", 1.0)};
    rp.horizon = static_cast<int>(get("horizon", 0));
    inst = gen_random(rp);
  }
  emit(c, to_json(inst, 2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online stochastic matching under known i.i.d. arrivals"};
  app.require_subcommand(1);
  Common c;

  auto add_common = [&](CLI::App* s, bool needs_instance) {
    auto* opt = s->add_option("--instance", c.instance, "instance JSON");
    if (needs_instance) opt->required();
    s->add_option("--alg", c.alg, "ew0|ew07|ew1|ew2|ew|vw|sm|unifp|smb");
    s->add_option("--seed", c.seed, "master seed");
    s->add_option("--param", c.params, "k=v parameter; repeatable or comma-separated")->delimiter(',');
    s->add_option("--out", c.out, "output path (default stdout)");
    s->add_option("--format", c.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* solve = app.add_subcommand("solve", "solve the algorithm's LP and print f");
  add_common(solve, true);

  int k = 3;
  auto* round = app.add_subcommand("round", "solve, then apply DR[k] once");
  add_common(round, true);
  round->add_option("--k", k, "scale factor")->check(CLI::Range(1, 64));

  auto* sim = app.add_subcommand("simulate", "run-level ratio estimate");
  add_common(sim, true);
  sim->add_option("--trials", c.trials, "number of trials")->check(CLI::PositiveNumber);
  sim->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);

  auto* rep = app.add_subcommand("report", "per-edge match report");
  add_common(rep, true);
  rep->add_option("--trials", c.trials, "number of trials")->check(CLI::PositiveNumber);
  rep->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);

  bool gamma = false;
  auto* ana = app.add_subcommand("analytic", "constants report");
  add_common(ana, false);
  ana->add_flag("--gamma", gamma, "print the certificate table instead");

  std::string gadget;
  int m = 1, pad = 0;
  auto* gen = app.add_subcommand("generate", "write a gadget or random instance");
  add_common(gen, false);
  gen->add_option("--gadget", gadget,
                  "c1_cycle|c2_cycle|c3_cycle|second_mod_chain|single_edge_padded");
  gen->add_option("--copies", m, "gadget copies")->check(CLI::PositiveNumber);
  gen->add_option("--pad", pad, "pad online types to this horizon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*solve) cmd_solve(c);
    else if (*round) cmd_round(c, k);
    else if (*sim) {
      const RatioEstimate r = simulate(c);
      emit(c, c.format == "json" ? estimate_json(r, false) + "\n" : run_csv(r));
    } else if (*rep) {
      const RatioEstimate r = simulate(c);
      emit(c, c.format == "json" ? estimate_json(r, true) + "\n" : edge_csv(r));
    } else if (*ana) cmd_analytic(c, gamma);
    else if (*gen) cmd_generate(c, gadget, m, pad);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
