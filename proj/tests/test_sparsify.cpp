#include <doctest.h>

#include <map>

#include "iidm/errors.hpp"
#include "iidm/sparsify.hpp"
#include "support.hpp"

using namespace iidm;
using testing::E;

namespace {

ThirdsVector thirds_of(const Instance& inst) {
  ThirdsVector H;
  for (double f : inst.target_f) H.h.push_back(static_cast<int>(std::lround(3 * f)));
  return H;
}

// Instance with online v0 whose neighborhood is given as (thirds on the
// v0 edge, H_u in thirds, u has an outside thick edge). Each u is topped up
// to H_u by private pendant online vertices.
struct Built {
  Instance inst;
  ThirdsVector H;
  std::vector<int> v0_edges;
};

Built star_case(const std::vector<std::tuple<int, int, bool>>& shape) {
  std::vector<E> es;
  std::vector<int> h;
  int nv = 1;
  for (size_t i = 0; i < shape.size(); ++i) {
    es.push_back({static_cast<int>(i), 0});
    h.push_back(std::get<0>(shape[i]));
  }
  for (size_t i = 0; i < shape.size(); ++i) {
    auto [he, hu, thick] = shape[i];
    int rest = hu - he;
    if (thick) {
      es.push_back({static_cast<int>(i), nv++});
      h.push_back(2);
      rest -= 2;
    }
    for (; rest > 0; --rest) {
      es.push_back({static_cast<int>(i), nv++});
      h.push_back(1);
    }
  }
  Built b;
  b.inst = testing::make(static_cast<int>(shape.size()), nv, es);
  // make() keeps edge order, so h lines up with edge ids.
  b.H.h = h;
  for (size_t i = 0; i < shape.size(); ++i) b.v0_edges.push_back(static_cast<int>(i));
  return b;
}

}  // namespace

TEST_CASE("find_cycles4 on the cycle gadgets") {
  Instance c1 = gen_gadget(GadgetKind::kC1Cycle, 1);
  CycleReport r1 = find_cycles4(c1, thirds_of(c1));
  CHECK(r1.c1.size() == 1);
  CHECK(r1.c2.empty());
  CHECK(r1.c3.empty());

  Instance c3 = gen_gadget(GadgetKind::kC3Cycle, 1);
  CycleReport r3 = find_cycles4(c3, thirds_of(c3));
  CHECK(r3.c3.size() == 1);
  CHECK(r3.c1.empty());

  Instance path = testing::make(2, 2, {{0, 0}, {0, 1}, {1, 1}});
  CHECK(find_cycles4(path, ThirdsVector{{1, 2, 1}}).empty());
  CHECK(cycle_type_name(CycleType::kC2) == "C2");
}

TEST_CASE("break_cycles: single C2, C3, C1") {
  Instance c2 = gen_gadget(GadgetKind::kC2Cycle, 1);
  const ThirdsVector H2 = thirds_of(c2);
  const ThirdsVector B2 = break_cycles(c2, H2);
  CHECK(thirds_offline(c2, B2) == thirds_offline(c2, H2));
  CHECK(thirds_online(c2, B2) == thirds_online(c2, H2));
  // Thick (u0,v0) -> thin, (u0,v1) and (u1,v0) -> thick, (u1,v1) removed.
  CHECK(B2.h == std::vector<int>{1, 2, 2, 0});

  Instance c3 = gen_gadget(GadgetKind::kC3Cycle, 1);
  const ThirdsVector B3 = break_cycles(c3, thirds_of(c3));
  CHECK(B3.h == std::vector<int>{2, 0, 0, 2});

  Instance c1 = gen_gadget(GadgetKind::kC1Cycle, 1);
  CHECK(break_cycles(c1, thirds_of(c1)).h == thirds_of(c1).h);
}

TEST_CASE("break_cycles: random DR3 outputs") {
  Rng rng = make_rng(31);
  for (int t = 0; t < 300; ++t) {
    RandomParams rp;
    rp.num_u = 6;
    rp.num_v = 6;
    rp.density = 0.6;
    rp.seed = 7000 + t;
    Instance inst = gen_random(rp);
    if (inst.num_edges() == 0) continue;
    const FracSolution f = solve_for(inst, LpKind::kBase, Objective::kUnweighted);
    const ThirdsVector H = dr_thirds(inst, f.f, rng);
    const size_t c1 = find_cycles4(inst, H).c1.size();
    const ThirdsVector B = break_cycles(inst, H);
    const CycleReport rep = find_cycles4(inst, B);
    CHECK(rep.c2.empty());
    CHECK(rep.c3.empty());
    CHECK(rep.c1.size() <= c1);
    CHECK(thirds_offline(inst, B) == thirds_offline(inst, H));
    CHECK(thirds_online(inst, B) == thirds_online(inst, H));
  }
}

TEST_CASE("second_modification: chain gadget and pass-through") {
  Instance g = gen_gadget(GadgetKind::kSecondModChain, 1);
  const ModifiedVector m = second_modification(g, thirds_of(g));
  // v1 (index 0): thick to u (H=1), thin to u1 (H=1/3) -> case 1.
  CHECK(m.case_tag[0] == 1);
  for (int e : g.adj_v[0]) {
    if (thirds_of(g).h[e] == 2) CHECK(m.h[e] == doctest::Approx(0.9));
    else CHECK(m.h[e] == doctest::Approx(0.1));
  }

  Built all_one = star_case({{1, 3, false}, {1, 3, false}, {1, 3, false}});
  const ModifiedVector p = second_modification(all_one.inst, all_one.H);
  CHECK(p.case_tag[0] == 0);
  for (int e : all_one.v0_edges) CHECK(p.h[e] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("second_modification: every tabulated case") {
  struct TwoCase {
    int T, S;
    bool thin_outside_thick;
    int tag;
    double thick, thin;
  };
  const TwoCase twos[] = {
      {3, 1, false, 1, 0.9, 0.1},   {3, 2, false, 2, 0.85, 0.15}, {2, 3, false, 3, 0.6, 0.4},
      {2, 1, false, 8, 0.75, 0.25}, {2, 2, false, 9, 0.7, 0.3},
      {3, 3, true, 11, 1 - kX1, kX1}, {3, 3, false, 12, 1 - kX2, kX2},
  };
  for (const auto& c : twos) {
    CAPTURE(c.tag);
    Built b = star_case({{2, c.T, false}, {1, c.S, c.thin_outside_thick}});
    const ModifiedVector m = second_modification(b.inst, b.H);
    CHECK(m.case_tag[0] == c.tag);
    CHECK(m.h[0] == doctest::Approx(c.thick));
    CHECK(m.h[1] == doctest::Approx(c.thin));
    CHECK(m.h[0] + m.h[1] == doctest::Approx(1.0));
  }

  struct ThreeCase {
    std::array<int, 3> hu;
    int tag;
    std::array<double, 3> out;
  };
  const ThreeCase threes[] = {
      {{1, 3, 3}, 4, {0.1, 0.45, 0.45}}, {{3, 2, 3}, 5, {0.4, 0.2, 0.4}},
      {{2, 3, 1}, 6, {0.2, 0.65, 0.15}}, {{3, 1, 1}, 7, {0.8, 0.1, 0.1}},
      {{2, 2, 3}, 10, {0.25, 0.25, 0.5}},
  };
  for (const auto& c : threes) {
    CAPTURE(c.tag);
    Built b = star_case({{1, c.hu[0], false}, {1, c.hu[1], false}, {1, c.hu[2], false}});
    const ModifiedVector m = second_modification(b.inst, b.H);
    CHECK(m.case_tag[0] == c.tag);
    double s = 0;
    for (int i = 0; i < 3; ++i) {
      CHECK(m.h[i] == doctest::Approx(c.out[i]));
      s += m.h[i];
    }
    CHECK(s == doctest::Approx(1.0));
  }

  // Deficient v (H_v < 1) is never rewritten.
  Built d = star_case({{1, 3, false}, {1, 1, false}});
  CHECK(second_modification(d.inst, d.H).case_tag[0] == 0);
}

TEST_CASE("second_modification conserves online mass on random inputs") {
  Rng rng = make_rng(8);
  for (int t = 0; t < 200; ++t) {
    RandomParams rp;
    rp.num_u = 7;
    rp.num_v = 7;
    rp.density = 0.5;
    rp.seed = 9000 + t;
    Instance inst = gen_random(rp);
    if (inst.num_edges() == 0) continue;
    const FracSolution f = solve_for(inst, LpKind::kBase, Objective::kUnweighted);
    const ThirdsVector B = break_cycles(inst, dr_thirds(inst, f.f, rng));
    const ModifiedVector m = second_modification(inst, B);
    for (int v = 0; v < inst.num_online(); ++v) {
      double a = 0, b = 0;
      for (int e : inst.adj_v[v]) {
        a += m.h[e];
        b += B.value(e);
      }
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
      if (m.case_tag[v] == 0)
        for (int e : inst.adj_v[v]) CHECK(m.h[e] == B.value(e));
    }
  }
}

TEST_CASE("sample_list distributions") {
  const int T = 100000;
  Rng rng = make_rng(12);

  Instance two = testing::make(2, 1, {{0, 0}, {1, 0}});
  int lead0 = 0;
  for (int t = 0; t < T; ++t) {
    const auto l = sample_list(two, 0, {0.9, 0.1}, rng);
    REQUIRE(l.size() == 2);
    lead0 += l[0] == 0;
  }
  CHECK(std::fabs(lead0 / double(T) - 0.9) < 0.01);

  Instance three = testing::make(3, 1, {{0, 0}, {1, 0}, {2, 0}});
  std::map<std::vector<int>, int> orders;
  for (int t = 0; t < T; ++t) orders[sample_list(three, 0, {1.0 / 3, 1.0 / 3, 1.0 / 3}, rng)]++;
  REQUIRE(orders.size() == 6);
  for (const auto& [o, c] : orders) CHECK(std::fabs(c / double(T) - 1.0 / 6.0) < 0.01);

  orders.clear();
  for (int t = 0; t < T; ++t) orders[sample_list(three, 0, {0.5, 0.3, 0.2}, rng)]++;
  // Pr[(i,j,k)] = H_i * H_j / (H_j + H_k).
  const double h[3] = {0.5, 0.3, 0.2};
  for (const auto& [o, c] : orders) {
    const double expect = h[o[0]] * h[o[1]] / (h[o[1]] + h[o[2]]);
    CHECK(std::fabs(c / double(T) - expect) < 0.01);
  }

  int empty = 0;
  for (int t = 0; t < T; ++t) empty += sample_list(two, 0, {0.3, 0.2}, rng).empty();
  CHECK(std::fabs(empty / double(T) - 0.5) < 0.01);

  CHECK_THROWS_AS(sample_list(two, 0, {-0.1, 0.5}, rng), ValidationError);
  CHECK_THROWS_AS(sample_list(two, 0, {0.7, 0.5}, rng), ValidationError);
}
