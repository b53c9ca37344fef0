#pragma once

#include <vector>

#include "iidm/instance.hpp"
#include "iidm/rng.hpp"
#include "iidm/rounding.hpp"

namespace iidm {

struct MatchingPlan {
  enum class Kind { kProper, kPseudo };

  Kind kind = Kind::kProper;
  // matchings[i] lists edge ids; an edge with F_e = 2 appears in two of them.
  std::vector<std::vector<int>> matchings;
  // partner[i][v]: edge of matching i at online v, or -1.
  std::vector<std::vector<int>> partner;

  int size() const { return static_cast<int>(matchings.size()); }
  int edge_at(int i, int v) const { return partner[i][v]; }
};

// Bipartite edge coloring of the multigraph with F_e copies of e using k
// colors. Throws ValidationError if some vertex has degree above k.
MatchingPlan decompose(const Instance& inst, const std::vector<int>& F, int k);

// decompose with k = 3, matchings in uniformly random order.
MatchingPlan pm3(const Instance& inst, const std::vector<int>& F, Rng& rng);

// decompose with k = 2, the two matchings swapped with probability 1/2.
MatchingPlan pm2(const Instance& inst, const std::vector<int>& F, Rng& rng);

// Pseudo-matchings M1, M2 built per online vertex from its F-neighborhood:
// large (F = 2) plus small goes deterministically to (M1, M2); a lone large
// edge goes to M1; one to three small edges fill three slots (missing slots
// are dummies), permuted uniformly, slot 1 kept in M1 w.p. y1 and slot 2 in
// M2 w.p. y2.
MatchingPlan pm_star(const Instance& inst, const std::vector<int>& F, double y1, double y2,
                     Rng& rng);

// Violations of the plan against F: a vertex used twice in one matching
// (online side only for pseudo plans) or, for proper plans, an edge whose
// multiplicity across matchings differs from F_e.
int count_plan_violations(const Instance& inst, const std::vector<int>& F,
                          const MatchingPlan& plan);

}  // namespace iidm
