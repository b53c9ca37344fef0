#pragma once

#include <cstdint>
#include <vector>

#include "iidm/decomp.hpp"
#include "iidm/instance.hpp"
#include "iidm/rng.hpp"
#include "iidm/sparsify.hpp"

namespace iidm {

struct RunResult {
  double total = 0.0;
  std::vector<int> edge_matches;   // per edge; may exceed 1 only under SM_b
  std::vector<int> offline_matches;
  long probes = 0;
  long successes = 0;
  std::vector<int> edge_probes;     // stochastic modes only
  std::vector<int> edge_successes;
};

struct AlgorithmParams {
  double q_ew1 = 0.850749;  // weight on EW1 in the EW mixture
  double h = 0.537815;
  double y1 = 0.687;
  double y2 = 1.0;
  double eta = 0.0142;
  int b = 1;
  bool second_probe = false;  // unifp: probe the second choice after a failed first probe
};

// Draws one online type per round with Pr[v] = r_v / n (Walker alias table).
class ArrivalSampler {
 public:
  explicit ArrivalSampler(const Instance& inst);
  int draw(Rng& rng) const;
  std::vector<int> sample(int n, Rng& rng) const;

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
};

std::vector<int> sample_arrivals(const Instance& inst, Rng& rng);

// Large edges (f > 1/2) gain eta; a small edge next to a large edge is
// scaled by (1 - f_l - eta) / (1 - f_l) for the largest adjacent f_l.
std::vector<double> attenuate(const Instance& inst, const std::vector<double>& f,
                              double eta = 0.0142);

// Online play against a fixed plan. Totals use edge weights w_e.
RunResult play_ew0(const Instance& inst, const MatchingPlan& plan, const std::vector<int>& arrivals);
RunResult play_ew1(const Instance& inst, const std::vector<int>& F, const MatchingPlan& plan,
                   double h, const std::vector<int>& arrivals, Rng& rng);
RunResult play_ew2(const Instance& inst, const MatchingPlan& plan, const std::vector<int>& arrivals);

// Full pipelines: offline randomization (rounding, decomposition) then play.
RunResult run_ew0(const Instance& inst, const std::vector<double>& f,
                  const std::vector<int>& arrivals, Rng& rng);
RunResult run_ew07(const Instance& inst, const std::vector<double>& f,
                   const std::vector<int>& arrivals, Rng& rng, double eta = 0.0142);
RunResult run_ew1(const Instance& inst, const std::vector<int>& F, double h,
                  const std::vector<int>& arrivals, Rng& rng);
RunResult run_ew2(const Instance& inst, const std::vector<int>& F, double y1, double y2,
                  const std::vector<int>& arrivals, Rng& rng);
RunResult run_ew(const Instance& inst, const std::vector<double>& f, const AlgorithmParams& params,
                 const std::vector<int>& arrivals, Rng& rng);

// Vertex-weighted: DR3, cycle breaking, second modification, random lists.
// Totals use offline weights w_u.
RunResult run_vw(const Instance& inst, const std::vector<double>& f,
                 const std::vector<int>& arrivals, Rng& rng);
RunResult play_rla(const Instance& inst, const std::vector<double>& hp,
                   const std::vector<int>& arrivals, Rng& rng);

// Stochastic rewards. SM_b keeps u available until it is matched b times.
RunResult run_sm(const Instance& inst, const std::vector<double>& f,
                 const std::vector<int>& arrivals, Rng& rng);
RunResult run_smb(const Instance& inst, int b, const std::vector<double>& f,
                  const std::vector<int>& arrivals, Rng& rng);

struct TwoChoice {
  int first = -1;   // index into the mass vector, -1 = drop
  int second = -1;
};

// Intervals of length f_i laid on [0,1); X uniform; first covers X, second
// covers (X + 1/2) mod 1.
TwoChoice gen_two_choice_list(const std::vector<double>& masses, Rng& rng);

RunResult run_unifp(const Instance& inst, const std::vector<double>& f, double p,
                    const std::vector<int>& arrivals, Rng& rng, bool second_probe = false);

// Per-trial consistency: capacity, one match per round, and accounting.
int count_run_violations(const Instance& inst, const RunResult& r, int capacity, int rounds,
                         bool vertex_weighted);

}  // namespace iidm
