#pragma once

#include <string>
#include <vector>

#include "iidm/instance.hpp"
#include "iidm/rng.hpp"
#include "iidm/rounding.hpp"

namespace iidm {

enum class CycleType { kC1, kC2, kC3 };

struct Cycle4 {
  int u1, u2, v1, v2;  // u1 < u2, v1 < v2
  CycleType type;
};

struct CycleReport {
  std::vector<Cycle4> c1, c2, c3;

  bool empty() const { return c1.empty() && c2.empty() && c3.empty(); }
};

// All 4-cycles of G_H (edges with H_e > 0), classified by number of thick
// (H_e = 2/3) edges.
CycleReport find_cycles4(const Instance& inst, const ThirdsVector& H);

// Repeatedly breaks every C2 and then one C3 until neither remains.
// Vertex sums are preserved and the number of C1 cycles never grows
// (all three checked before returning).
ThirdsVector break_cycles(const Instance& inst, const ThirdsVector& H);

struct ModifiedVector {
  std::vector<double> h;          // H'_e
  std::vector<int> case_tag;      // per online v: 1..12, or 0 if untouched
};

inline constexpr double kX1 = 0.2744;
inline constexpr double kX2 = 0.15877;

// Rewrites H on the neighborhood of each online v whose (H_e, H_u)
// signature is one of the twelve tabulated cases.
ModifiedVector second_modification(const Instance& inst, const ThirdsVector& H);

// Per-vertex sums of a thirds vector, in thirds.
std::vector<int> thirds_offline(const Instance& inst, const ThirdsVector& H);
std::vector<int> thirds_online(const Instance& inst, const ThirdsVector& H);

// Random preference list over the neighbors of v (edge ids). The first
// entry is drawn proportionally to H'_e, with mass 1 - sum H' meaning the
// arrival is dropped (empty list); each further entry is drawn
// proportionally among the rest.
std::vector<int> sample_list(const Instance& inst, int v, const std::vector<double>& hp,
                             Rng& rng);

std::string cycle_type_name(CycleType t);

}  // namespace iidm
