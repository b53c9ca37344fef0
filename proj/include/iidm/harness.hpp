#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "iidm/instance.hpp"
#include "iidm/lp.hpp"
#include "iidm/online.hpp"

namespace iidm {

enum class Algorithm { kEw0, kEw07, kEw1, kEw2, kEw, kVw, kSm, kUnifp, kSmb };

Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm alg);
bool is_stochastic(Algorithm alg);

using ParamMap = std::map<std::string, std::string>;

// Reads q, h, y1, y2, eta, b, second_probe; unknown keys are rejected.
AlgorithmParams parse_params(const ParamMap& params);

// Instance and fractional solution an algorithm runs on. Base-LP
// algorithms need unit rates, so integral rates are split first. A gadget
// carrying target_f uses it in place of the LP solution.
struct Prepared {
  Algorithm alg;
  AlgorithmParams params;
  Instance inst;
  FracSolution lp;
  double lp_bound = 0.0;
  bool from_target = false;
};

Prepared prepare(const Instance& inst, Algorithm alg, const AlgorithmParams& params);

// One trial: offline randomization and arrivals drawn from `rng`.
RunResult run_trial(const Prepared& prep, Rng& rng);

struct EdgeStat {
  std::string u, v;
  double f = 0.0;
  double p_match = 0.0;   // mean matches per trial
  double ratio = 0.0;     // p_match / (f_e p_e) in stochastic modes, p_match / f_e otherwise
  double weight = 0.0;    // mean matched weight per trial
};

struct RatioEstimate {
  std::string alg;
  long trials = 0;
  std::uint64_t seed = 0;
  double alg_mean = 0.0;
  double alg_sd = 0.0;
  double lp_bound = 0.0;
  double ratio = 0.0;
  double ci95 = 0.0;
  std::vector<EdgeStat> edges;
  std::vector<double> offline_freq;  // Pr[u matched] (mean count under SM_b)
  long violations = 0;               // count_run_violations summed over trials
};

// Trials are grouped in fixed blocks; blocks are merged in order, so the
// result does not depend on `threads`.
RatioEstimate estimate_ratio(const Prepared& prep, long trials, std::uint64_t seed,
                             int threads = 1);
RatioEstimate estimate_ratio(const Instance& inst, const std::string& alg,
                             const ParamMap& params, long trials, std::uint64_t seed,
                             int threads = 1);

std::string run_csv(const RatioEstimate& r);
std::string edge_csv(const RatioEstimate& r);
std::string estimate_json(const RatioEstimate& r, bool with_edges, int indent = 2);

}  // namespace iidm
