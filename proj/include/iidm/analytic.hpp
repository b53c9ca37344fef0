#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace iidm {

struct BaseProbs {
  double p1 = 0.0;  // edge only in M1
  double p2 = 0.0;  // edge only in M2
  double pb = 0.0;  // edge in both
};

BaseProbs base_probs(long n);

// Asymptotic (n -> infinity) values.
const BaseProbs& base_probs_limit();

// Warm-up EW0 ratio of an edge with LP value f.
double ew0_ratio(double f, const BaseProbs& P = base_probs_limit());

// Attenuated ratio of an edge with LP value f. `f_large` is the largest
// adjacent large edge (f > 1/2) for a small edge, or 0 if there is none.
double ew07_ratio(double f, double eta, double f_large = 0.0,
                  const BaseProbs& P = base_probs_limit());
// Worst case over f <= 1 - 1/e of the attenuated analysis.
double ew07_worst(double eta, const BaseProbs& P = base_probs_limit());

struct Ew1Ratios {
  double large = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

// Closed-form constants.
Ew1Ratios ew1_ratios(double h);
// Same quantities from the underlying sums (large edge) and integrals.
Ew1Ratios ew1_ratios_derived(double h, long n = 100000);
// Conditional match probability of a large edge present in M1 and M2
// (before averaging over the three placements).
double ew1_large_both(double h, long n = 100000);
// h at which the two small-edge types balance.
double ew1_balance_h();

struct Ew2Ratios {
  double large = 0.0;
  double small = 0.0;
};

Ew2Ratios ew2_ratios(double y1, double y2);
// Small-edge ratio per configuration: 1a, 1b, 2a, 2b, 3a, 3b, 4a, 4b.
std::array<double, 8> ew2_small_configs(double y1, double y2);

struct MixResult {
  double weight_ew1 = 0.0;
  double ratio = 0.0;
};

// Guaranteed ratio of the mixture with weight q on EW1, minimized over
// f in [0, 1 - 1/e]; a1/b1 are EW1's large/small ratios, a2/b2 EW2's.
double mix_ratio(double q, double a1, double b1, double a2, double b2);
// Same inner minimum by brute force over a grid of f values.
double mix_ratio_grid(double q, double a1, double b1, double a2, double b2, int points = 10000);
MixResult mix_optimize(double a1, double b1, double a2, double b2);

// Probability a list led by a rate-x offline neighbor arrives before the
// second arrival of a rate-y list, closed form and finite-horizon sum.
double g_prob_closed(double x, double y);
double g_prob_sum(double x, double y, long n);

struct ChainConfig {
  double b = 0.0, c = 0.0, d = 0.0;
  // Extra arrival rate of lists led by u1 (ob) and u2 (oc) coming from
  // their other online neighbors.
  double ob = 0.0, oc = 1.0 / 3.0;
  long n = 2000;
};

using Matrix5 = std::array<std::array<double, 5>, 5>;

Matrix5 chain_matrix(const ChainConfig& cfg);
// Mass in the absorbing state after n steps (repeated squaring).
double g_prob_markov(const ChainConfig& cfg);

double p_u_combine(double pr_b, const std::vector<double>& pr_g);

struct GammaEntry {
  std::string family;   // "H=1", "H=2/3", "H=1/3"
  std::string name;     // alpha1, beta3, ...
  std::string method;   // closed | markov
  double pr_g = 0.0;
  double computed = 0.0;
  double reference = 0.0;
  bool matches = false;
  std::string note;
};

std::vector<GammaEntry> gamma_tables(long chain_steps = 2000);

struct VwRatios {
  double h1_three = 0.0;   // offline H_u = 1 with three thin neighbors
  double h1_two = 0.0;     // offline H_u = 1 with one thick and one thin
  double h23 = 0.0;        // H_u = 2/3
  double h13 = 0.0;        // H_u = 1/3
};

// Worst-case per-class ratios assembled from gamma_tables.
VwRatios vw_ratios(const std::vector<GammaEntry>& table);

struct ModExample {
  double before = 0.0;  // P_u for H
  double after = 0.0;   // P_u for H' with (0.9, 0.1) on v1
};

ModExample modification_example();

struct VwMix {
  double value = 0.0;
  std::array<double, 3> q{};
};

// Minimum of the vertex-weighted mixture over q1 + q2 + q3 = 1,
// q1 <= cap (pass cap >= 1 to remove the cap).
VwMix vw_mix_min(double c1 = 0.72933, double c2 = 0.735622, double c3 = 0.7847,
                 double cap = -1.0);

double uniform_F(double f, double q);
std::pair<double, double> uniform_delta_max();  // (value, s)
double uniform_delta(double s);

double bmatch_bound(double b, double eps);

struct ConstantRow {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;
  double tol = 0.0;

  double diff() const;
  std::string verdict() const;
};

std::vector<ConstantRow> constants_report();
std::string constants_csv(const std::vector<ConstantRow>& rows);

}  // namespace iidm
