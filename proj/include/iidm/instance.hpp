#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace iidm {

struct OfflineVertex {
  std::string id;
  double w = 1.0;
};

struct OnlineType {
  std::string id;
  double r = 1.0;
};

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
  double p = 1.0;
};

// Bipartite instance. Offline vertices and online types are referenced by
// position; `id` strings are only used for persistence and reports.
struct Instance {
  std::vector<OfflineVertex> offline;
  std::vector<OnlineType> online;
  std::vector<Edge> edges;
  int n = 0;
  bool integral_rates = false;
  std::optional<double> uniform_p;

  // Optional annotations carried by gadgets: a fractional vector to use in
  // place of an LP solution (thirds-valued for the cycle gadgets) and the
  // edges a report should single out.
  std::vector<double> target_f;
  std::vector<int> tracked;

  int num_offline() const { return static_cast<int>(offline.size()); }
  int num_online() const { return static_cast<int>(online.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  // Incident edge ids, ascending. Rebuilt by finalize().
  std::vector<std::vector<int>> adj_u;
  std::vector<std::vector<int>> adj_v;

  void finalize();
  bool has_target() const { return !target_f.empty(); }
  bool stochastic() const;
  double rate_sum() const;
};

bool operator==(const Instance& a, const Instance& b);

struct Violation {
  std::string path;  // JSON pointer of the offending field
  std::string rule;
};

// Every broken invariant. Empty iff valid.
std::vector<Violation> validate(const Instance& inst);

// Throws ValidationError with the first violation.
void require_valid(const Instance& inst);

// Orders ids naturally (integers numerically, otherwise lexicographic),
// renumbers edges by (u, v) and rebuilds adjacency.
void canonicalize_order(Instance& inst);

// Splits an online type with integral rate k into k unit-rate copies so
// that |V| = n. Throws if some rate is not integral.
Instance split_unit_rates(const Instance& inst);

bool rates_integral(const Instance& inst, double tol = 1e-9);

enum class GadgetKind {
  kC1Cycle,
  kC2Cycle,
  kC3Cycle,
  kSecondModChain,
  kSingleEdgePadded,
};

GadgetKind parse_gadget_kind(const std::string& name);
std::string gadget_name(GadgetKind kind);

// m disjoint copies; unit rates; `pad_to` (if larger) appends isolated
// online types so that n = pad_to.
Instance gen_gadget(GadgetKind kind, int m, int pad_to = 0);

struct RandomParams {
  int num_u = 2;
  int num_v = 2;
  double density = 1.0;
  std::pair<double, double> weight{1.0, 1.0};
  std::pair<double, double> p{1.0, 1.0};
  std::uint64_t seed = 0;
  // Horizon for non-unit rates; 0 means unit rates (n = num_v).
  int horizon = 0;
};

Instance gen_random(const RandomParams& params);

std::string to_json(const Instance& inst, int indent = -1);
Instance from_json(const std::string& text);
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace iidm
