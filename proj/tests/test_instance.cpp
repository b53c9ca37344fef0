#include <doctest.h>

#include "iidm/errors.hpp"
#include "iidm/instance.hpp"
#include "support.hpp"

using namespace iidm;

namespace {

bool has_rule(const std::vector<Violation>& v, const std::string& rule) {
  for (const auto& x : v)
    if (x.rule == rule) return true;
  return false;
}

std::string error_path(const std::string& doc) {
  try {
    from_json(doc);
  } catch (const ValidationError& e) {
    return e.path();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("validate: minimal instance and forced violations") {
  Instance ok = testing::make(1, 1, {{0, 0}});
  CHECK(validate(ok).empty());

  Instance bad_sum = ok;
  bad_sum.online[0].r = 0.5;
  bad_sum.integral_rates = false;
  CHECK(has_rule(validate(bad_sum), "rate-sum mismatch"));

  Instance bad_p = ok;
  bad_p.edges[0].p = 0.0;
  CHECK(has_rule(validate(bad_p), "probe_prob out of (0,1]"));

  Instance dup = testing::make(1, 1, {{0, 0}, {0, 0}});
  CHECK(has_rule(validate(dup), "duplicate (u,v) pair"));

  Instance nonint = testing::make(1, 2, {{0, 0}}, {1.5, 1.5});
  nonint.integral_rates = true;
  CHECK(has_rule(validate(nonint), "integral_rates set but rate is not integral"));

  Instance up = ok;
  up.uniform_p = 0.5;
  CHECK(has_rule(validate(up), "uniform_p set but probe_prob differs"));
}

TEST_CASE("split_unit_rates yields |V| = n") {
  Instance inst = testing::make(2, 2, {{0, 0}, {1, 0}, {1, 1}}, {3, 2});
  Instance s = split_unit_rates(inst);
  CHECK(s.num_online() == 5);
  CHECK(s.n == 5);
  CHECK(s.num_edges() == 3 + 3 + 2);
  CHECK(validate(s).empty());
  for (const auto& t : s.online) CHECK(t.r == 1.0);

  Instance frac = testing::make(1, 2, {{0, 0}}, {1.5, 0.5});
  CHECK_THROWS_AS(split_unit_rates(frac), ValidationError);
}

TEST_CASE("gadgets: shapes and validity") {
  Instance c1 = gen_gadget(GadgetKind::kC1Cycle, 1);
  CHECK(c1.num_offline() == 2);
  CHECK(c1.num_online() == 2);
  CHECK(c1.num_edges() == 4);
  int thick = 0, thin = 0;
  for (double f : c1.target_f) {
    if (std::fabs(f - 2.0 / 3.0) < 1e-12) ++thick;
    if (std::fabs(f - 1.0 / 3.0) < 1e-12) ++thin;
  }
  CHECK(thick == 2);
  CHECK(thin == 2);

  Instance chain = gen_gadget(GadgetKind::kSecondModChain, 1);
  CHECK(chain.num_offline() == 3);
  CHECK(chain.num_online() == 2);
  std::vector<double> t = chain.target_f;
  std::sort(t.begin(), t.end());
  CHECK(t[0] == doctest::Approx(1.0 / 3.0));
  CHECK(t[1] == doctest::Approx(1.0 / 3.0));
  CHECK(t[2] == doctest::Approx(2.0 / 3.0));
  CHECK(t[3] == doctest::Approx(2.0 / 3.0));

  Instance many = gen_gadget(GadgetKind::kC1Cycle, 500);
  CHECK(many.n == 1000);
  CHECK(many.num_edges() == 2000);

  Instance se = gen_gadget(GadgetKind::kSingleEdgePadded, 3, 10);
  CHECK(se.n == 10);
  REQUIRE(se.tracked.size() == 3);
  for (int e : se.tracked) CHECK(se.target_f[e] == doctest::Approx(1.0 - std::exp(-1.0)));

  for (auto kind : {GadgetKind::kC1Cycle, GadgetKind::kC2Cycle, GadgetKind::kC3Cycle,
                    GadgetKind::kSecondModChain, GadgetKind::kSingleEdgePadded})
    for (int m : {1, 7, 1000}) CHECK(validate(gen_gadget(kind, m)).empty());

  CHECK_THROWS_AS(parse_gadget_kind("c4_cycle"), ValidationError);
  CHECK(gadget_name(parse_gadget_kind("second_mod_chain")) == "second_mod_chain");
}

TEST_CASE("gen_random: completeness, determinism, uniform flag") {
  RandomParams a;
  a.num_u = 2;
  a.num_v = 2;
  a.seed = 7;
  Instance x = gen_random(a);
  CHECK(x.num_edges() == 4);
  CHECK(validate(x).empty());

  RandomParams b;
  b.num_u = b.num_v = 5;
  b.density = 0.5;
  b.weight = {1, 10};
  b.seed = 1;
  CHECK(to_json(gen_random(b)) == to_json(gen_random(b)));

  RandomParams c;
  c.num_u = c.num_v = 3;
  c.p = {0.5, 0.5};
  c.seed = 2;
  Instance u = gen_random(c);
  REQUIRE(u.uniform_p.has_value());
  CHECK(*u.uniform_p == 0.5);

  RandomParams bad;
  bad.weight = {2, 1};
  CHECK_THROWS_AS(gen_random(bad), ValidationError);
  RandomParams bad_d;
  bad_d.density = 0.0;
  CHECK_THROWS_AS(gen_random(bad_d), ValidationError);

  RandomParams h;
  h.num_u = 4;
  h.num_v = 3;
  h.horizon = 500;
  h.seed = 9;
  Instance hr = gen_random(h);
  CHECK(hr.n == 500);
  CHECK(hr.rate_sum() == doctest::Approx(500.0));
  CHECK(validate(hr).empty());
}

TEST_CASE("json round trip and schema errors") {
  Instance g = gen_gadget(GadgetKind::kC1Cycle, 1);
  Instance back = from_json(to_json(g));
  CHECK(back == g);
  CHECK(to_json(back) == to_json(g));

  RandomParams p;
  p.num_u = 4;
  p.num_v = 6;
  p.density = 0.7;
  p.weight = {0.5, 3};
  p.p = {0.2, 1};
  p.seed = 3;
  Instance r = gen_random(p);
  CHECK(from_json(to_json(r, 2)) == r);

  CHECK(error_path(R"({"offline":[{"id":"a"}],"online":[{"id":"b"}],"edges":[]})") == "/n");
  CHECK(error_path(R"({"offline":[{"id":"a"}],"online":[{"id":"b"}],
                       "edges":[{"u":"a","v":"b","w":-1}],"n":1})") == "/edges/0/w");
  CHECK(error_path(R"({"offline":[{"id":"a"}],"online":[{"id":"b"}],
                       "edges":[{"u":"a","v":"zz"}],"n":1})") == "/edges/0/v");
  CHECK(error_path("[1,2") == "");
}

TEST_CASE("canonical order sorts ids naturally") {
  Instance inst = testing::make(3, 1, {{2, 0}, {0, 0}, {1, 0}});
  inst.offline[0].id = "u10";
  inst.offline[1].id = "u2";
  inst.offline[2].id = "u1";
  canonicalize_order(inst);
  CHECK(inst.offline[0].id == "u1");
  CHECK(inst.offline[1].id == "u2");
  CHECK(inst.offline[2].id == "u10");
  for (int e = 0; e + 1 < inst.num_edges(); ++e) CHECK(inst.edges[e].u < inst.edges[e + 1].u);
}
