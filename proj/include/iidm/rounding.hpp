#pragma once

#include <vector>

#include "iidm/instance.hpp"
#include "iidm/rng.hpp"

namespace iidm {

struct IntegralVector {
  std::vector<int> F;
  int k = 1;
};

// Integer thirds {0,1,2} per edge; H_e = F_e / 3.
struct ThirdsVector {
  std::vector<int> h;

  double value(int e) const { return h[e] / 3.0; }
};

// Scale by k and round dependently: the integer part is kept, fractional
// residues are rounded along maximal paths / cycles of the residue graph.
// Guarantees Pr[F_e = ceil(k f_e)] = k f_e - floor(k f_e) and
// F_w in {floor(k f_w), ceil(k f_w)} for every vertex w.
IntegralVector dr(const Instance& inst, const std::vector<double>& f, int k, Rng& rng,
                  bool extended = false);

// dr with k = 3; requires f_e <= 2/3.
ThirdsVector dr_thirds(const Instance& inst, const std::vector<double>& f, Rng& rng);

// Per-vertex sums of an integral vector.
std::vector<int> offline_degrees(const Instance& inst, const std::vector<int>& F);
std::vector<int> online_degrees(const Instance& inst, const std::vector<int>& F);

// Checks the two deterministic guarantees; returns the number of violations.
int count_rounding_violations(const Instance& inst, const std::vector<double>& f,
                              const IntegralVector& F);

}  // namespace iidm
