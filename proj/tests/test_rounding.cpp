#include <doctest.h>

#include <cmath>

#include "iidm/errors.hpp"
#include "iidm/rounding.hpp"
#include "support.hpp"

using namespace iidm;

namespace {

Instance complete(int nu, int nv) {
  std::vector<testing::E> es;
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) es.push_back({i, j});
  return testing::make(nu, nv, es);
}

// Random fractional vector with every vertex sum <= cap.
std::vector<double> random_f(const Instance& inst, Rng& rng, double cap = 1.0) {
  std::vector<double> f(inst.num_edges());
  for (double& x : f) x = uniform01(rng);
  std::vector<double> su(inst.num_offline()), sv(inst.num_online());
  for (int e = 0; e < inst.num_edges(); ++e) {
    su[inst.edges[e].u] += f[e];
    sv[inst.edges[e].v] += f[e];
  }
  double m = 0;
  for (double x : su) m = std::max(m, x);
  for (double x : sv) m = std::max(m, x);
  if (m > 0) for (double& x : f) x *= cap / m;
  return f;
}

}  // namespace

TEST_CASE("dr examples") {
  Instance one = testing::make(1, 1, {{0, 0}});
  Rng rng = make_rng(1);
  for (int t = 0; t < 100; ++t) CHECK(dr(one, {1.0 / 3.0}, 3, rng).F[0] == 1);

  const int T = 20000;
  int up = 0;
  for (int t = 0; t < T; ++t) up += dr(one, {0.6}, 3, rng).F[0] == 2;
  CHECK(std::fabs(up / double(T) - 0.8) < 0.01);

  up = 0;
  const double f = 1.0 - std::exp(-1.0);
  for (int t = 0; t < T; ++t) {
    const int F = dr(one, {f}, 3, rng).F[0];
    CHECK((F == 1 || F == 2));
    up += F == 2;
  }
  CHECK(std::fabs(up / double(T) - (2.0 - 3.0 / std::exp(1.0))) < 0.01);
}

TEST_CASE("dr errors and extended k") {
  Instance one = testing::make(1, 1, {{0, 0}});
  Rng rng = make_rng(2);
  CHECK_THROWS_AS(dr(one, {1.2}, 3, rng), ValidationError);
  CHECK_THROWS_AS(dr(one, {-0.1}, 3, rng), ValidationError);
  CHECK_THROWS_AS(dr(one, {0.5}, 4, rng), ValidationError);
  CHECK_THROWS_AS(dr(one, {0.5, 0.5}, 3, rng), ValidationError);
  const int F = dr(one, {0.5}, 5, rng, true).F[0];
  CHECK((F == 2 || F == 3));
  CHECK_THROWS_AS(dr_thirds(one, {0.7}, rng), ValidationError);
}

TEST_CASE("dr: marginals on a random 6x6 instance") {
  Instance inst = complete(6, 6);
  Rng frng = make_rng(11);
  const std::vector<double> f = random_f(inst, frng);
  for (int k : {2, 3}) {
    const int T = 100000;
    std::vector<int> up(inst.num_edges(), 0);
    Rng rng = make_rng(100 + k);
    for (int t = 0; t < T; ++t) {
      const IntegralVector F = dr(inst, f, k, rng);
      REQUIRE(count_rounding_violations(inst, f, F) == 0);
      for (int e = 0; e < inst.num_edges(); ++e) up[e] += F.F[e] == static_cast<int>(std::ceil(k * f[e]));
    }
    double worst = 0;
    for (int e = 0; e < inst.num_edges(); ++e) {
      const double q = k * f[e] - std::floor(k * f[e]);
      worst = std::max(worst, std::fabs(up[e] / double(T) - q));
    }
    CHECK(worst < 0.01);
  }
}

TEST_CASE("dr: degree preservation on random sparse instances") {
  Rng rng = make_rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    RandomParams rp;
    rp.num_u = 2 + trial % 7;
    rp.num_v = 2 + (trial / 7) % 7;
    rp.density = 0.5;
    rp.seed = trial;
    Instance inst = gen_random(rp);
    const auto f = random_f(inst, rng);
    for (int k : {2, 3}) {
      const IntegralVector F = dr(inst, f, k, rng);
      CHECK(count_rounding_violations(inst, f, F) == 0);
    }
  }
}

TEST_CASE("dr: negative correlation at a shared vertex") {
  Instance star = testing::make(1, 3, {{0, 0}, {0, 1}, {0, 2}});
  const std::vector<double> f{0.3, 0.3, 0.25};
  Rng rng = make_rng(9);
  const int T = 50000;
  int a = 0, b = 0, both = 0;
  for (int t = 0; t < T; ++t) {
    const auto F = dr(star, f, 2, rng).F;
    a += F[0] == 1;
    b += F[1] == 1;
    both += F[0] == 1 && F[1] == 1;
  }
  CHECK(both / double(T) <= (a / double(T)) * (b / double(T)) + 0.01);
}

TEST_CASE("dr: determinism per seed") {
  Instance inst = complete(4, 5);
  Rng frng = make_rng(3);
  const auto f = random_f(inst, frng);
  Rng r1 = make_rng(77), r2 = make_rng(77);
  for (int t = 0; t < 20; ++t) CHECK(dr(inst, f, 3, r1).F == dr(inst, f, 3, r2).F);
}

TEST_CASE("dr_thirds") {
  Instance one = testing::make(1, 1, {{0, 0}});
  Rng rng = make_rng(4);
  for (int t = 0; t < 50; ++t) CHECK(dr_thirds(one, {2.0 / 3.0}, rng).h[0] == 2);

  int up = 0;
  const int T = 40000;
  for (int t = 0; t < T; ++t) {
    const int h = dr_thirds(one, {0.5}, rng).h[0];
    CHECK((h == 1 || h == 2));
    up += h == 2;
  }
  CHECK(std::fabs(up / double(T) - 0.5) < 0.01);

  // f_u = 1 exactly: H_u = 1 always.
  Instance star = testing::make(1, 3, {{0, 0}, {0, 1}, {0, 2}});
  for (int t = 0; t < 200; ++t) {
    const ThirdsVector H = dr_thirds(star, {0.5, 0.3, 0.2}, rng);
    CHECK(H.h[0] + H.h[1] + H.h[2] == 3);
  }
}

TEST_CASE("dr_thirds: a lone f_e <= 1/3 never becomes thick") {
  Rng rng = make_rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    RandomParams rp;
    rp.num_u = 5;
    rp.num_v = 5;
    rp.density = 0.6;
    rp.seed = 1000 + trial;
    Instance inst = gen_random(rp);
    const auto f = random_f(inst, rng, 2.0 / 3.0);
    const ThirdsVector H = dr_thirds(inst, f, rng);
    for (int e = 0; e < inst.num_edges(); ++e)
      if (f[e] <= 1.0 / 3.0) CHECK(H.h[e] <= 1);
  }
}
