#include "iidm/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "iidm/errors.hpp"

namespace iidm {

namespace {

const double kE = std::exp(1.0);

double simpson(const std::function<double(double)>& g, double a, double b, int intervals = 4000) {
  if (intervals % 2) ++intervals;
  const double hstep = (b - a) / intervals;
  double s = g(a) + g(b);
  for (int i = 1; i < intervals; ++i) s += g(a + i * hstep) * (i % 2 ? 4.0 : 2.0);
  return s * hstep / 3.0;
}

double golden_max(const std::function<double(double)>& g, double lo, double hi, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > tol) {
    if (gc < gd) {
      a = c;
      c = d;
      gc = gd;
      d = a + r * (b - a);
      gd = g(d);
    } else {
      b = d;
      d = c;
      gd = gc;
      c = b - r * (b - a);
      gc = g(c);
    }
  }
  return (a + b) / 2.0;
}

Matrix5 multiply(const Matrix5& x, const Matrix5& y) {
  Matrix5 z{};
  for (int i = 0; i < 5; ++i)
    for (int k = 0; k < 5; ++k) {
      if (x[i][k] == 0.0) continue;
      for (int j = 0; j < 5; ++j) z[i][j] += x[i][k] * y[k][j];
    }
  return z;
}

}  // namespace

BaseProbs base_probs(long n) {
  if (n < 1) throw ValidationError("n must be >= 1", "/n");
  const double nn = static_cast<double>(n);
  const double q = 1.0 - 2.0 / nn;
  BaseProbs P;
  double pw1 = 1.0;  // q^(t-1)
  double pw2 = 0.0;  // q^(t-2), zero at t = 1
  double s1 = 0.0, s2 = 0.0;
  for (long t = 1; t <= n; ++t) {
    const double lead = (t - 1) / nn * pw2;
    s1 += pw1 + lead;
    s2 += lead;
    pw2 = pw1;
    pw1 *= q;
  }
  P.p1 = s1 / nn;
  P.p2 = s2 / nn;
  P.pb = 1.0 - std::pow(1.0 - 1.0 / nn, nn);
  return P;
}

const BaseProbs& base_probs_limit() {
  static const BaseProbs P = [] {
    BaseProbs b;
    const double e2 = std::exp(-2.0);
    b.p1 = (1.0 - e2) / 2.0 + (1.0 - 3.0 * e2) / 4.0;
    b.p2 = (1.0 - 3.0 * e2) / 4.0;
    b.pb = 1.0 - 1.0 / kE;
    return b;
  }();
  return P;
}

double ew0_ratio(double f, const BaseProbs& P) {
  if (f <= 0.5) return P.p1 + P.p2;
  return ((1.0 - f) * (P.p1 + P.p2) + (2.0 * f - 1.0) * P.pb) / f;
}

double ew07_ratio(double f, double eta, double f_large, const BaseProbs& P) {
  if (f > 0.5) {
    const double g = f + eta;
    return ((1.0 - g) * (P.p1 + P.p2) + (2.0 * g - 1.0) * P.pb) / f;
  }
  if (f_large > 0.5) return (1.0 - (f_large + eta)) / (1.0 - f_large) * (P.p1 + P.p2);
  return P.p1 + P.p2;
}

double ew07_worst(double eta, const BaseProbs& P) {
  const double fmax = 1.0 - 1.0 / kE;
  return std::min(ew07_ratio(fmax, eta, 0.0, P), ew07_ratio(0.5, eta, fmax, P));
}

Ew1Ratios ew1_ratios(double h) {
  return {0.67529 + (1.0 - h) * 0.00446489, 0.751066, 0.72933 + h * 0.0404154};
}

double ew1_large_both(double h, long n) {
  const double nn = static_cast<double>(n);
  const double q = 1.0 - 2.0 / nn;
  double s = 0.0, tail = 0.0;
  // q^(t-1), q^(t-2), q^(t-3), q^(t-4), each zero until defined.
  double p1 = 1.0, p2 = 0.0, p3 = 0.0, p4 = 0.0;
  for (long t = 1; t <= n; ++t) {
    const double tm = static_cast<double>(t - 1);
    s += p1 + tm / nn * p2 + tm * (tm - 1.0) / (2.0 * nn * nn) * p3;
    tail += tm * (tm - 1.0) * (tm - 2.0) / 6.0 / (nn * nn * nn) * p4;
    p4 = p3;
    p3 = p2;
    p2 = p1;
    p1 *= q;
  }
  return (s + (1.0 - h) * tail) / nn;
}

Ew1Ratios ew1_ratios_derived(double h, long n) {
  const BaseProbs P = base_probs(n);
  Ew1Ratios r;
  r.large = (P.p1 + P.p2 + ew1_large_both(h, n)) / 2.0;
  auto ex = [](double x) { return std::exp(-x); };
  const double psi1 = simpson([&](double x) { return ex(3 * x) * (1 + x) * (1 + x + x * x / 2); }, 0, 1);
  const double psi2 = simpson([&](double x) { return x * ex(3 * x) * (1 + x + x * x / 2); }, 0, 1);
  const double psi3 = simpson([&](double x) { return x * x / 2 * ex(3 * x) * (1 + x); }, 0, 1);
  r.gamma1 = psi1 + psi2 + psi3;
  const double third = simpson([&](double x) { return x * x / 2 * ex(2 * x); }, 0, 1);
  r.gamma2 = P.p1 + P.p2 + h * third;
  return r;
}

double ew1_balance_h() { return (0.751066 - 0.72933) / 0.0404154; }

std::array<double, 8> ew2_small_configs(double y1, double y2) {
  const double r = 3.0 - y1 - y2;
  std::array<double, 8> c{};
  c[0] = 0.44550;
  c[1] = 0.432332 * y1 + 0.148499 * y2;
  c[2] = 0.601704;
  c[3] = 0.537432 * y1 + 0.200568 * y2;
  c[4] = 0.13171 * y1 + 0.200568 * y2 + r * 0.22933;
  c[5] = 0.135241 * y1 * y1 + 0.223033 * y1 * y2 + 0.066856 * y2 * y2 + y1 * r * 0.193610 +
         y2 * r * 0.076443;
  c[6] = 0.029661 * y1 * y1 + 2 * 0.043903 * y1 * y2 + 0.066856 * y2 * y2 +
         2 * y1 * r * 0.0494997 + 2 * y2 * r * 0.076443 + r * r * 0.0880803;
  c[7] = 0.632 * y1 - 0.133133 * y1 * y1 + 0.0093 * y1 * y1 * y1 + 0.264241 * y2 -
         0.11127 * y1 * y2 + 0.01170 * y1 * y1 * y2 - 0.0232746 * y2 * y2 +
         0.00488 * y1 * y2 * y2 + 0.00068 * y2 * y2 * y2;
  return c;
}

Ew2Ratios ew2_ratios(double y1, double y2) {
  if (!(y1 >= 0 && y1 <= 1 && y2 >= 0 && y2 <= 1))
    throw ValidationError("y1, y2 must lie in [0,1]", "/y");
  const auto c = ew2_small_configs(y1, y2);
  return {std::min(0.948183 - 0.099895 * y1 - 0.025646 * y2, 0.871245),
          *std::min_element(c.begin(), c.end())};
}

namespace {

double mix_at(double q, double f, double a1, double b1, double a2, double b2) {
  const double A = 2.0 * (q * a1 + (1.0 - q) * a2) / 3.0;
  const double B = (q * b1 + (1.0 - q) * b2) / 3.0;
  if (f <= 1.0 / 3.0) return 3.0 * B;
  return ((3.0 * f - 1.0) * A + (2.0 - 3.0 * f) * B) / f;
}

}  // namespace

double mix_ratio(double q, double a1, double b1, double a2, double b2) {
  // The large-edge expression is monotone in f, so the minimum sits at an
  // end of [1/3, 1 - 1/e]; below 1/3 the value is constant.
  const double fmax = 1.0 - 1.0 / kE;
  return std::min(mix_at(q, 1.0 / 3.0, a1, b1, a2, b2), mix_at(q, fmax, a1, b1, a2, b2));
}

double mix_ratio_grid(double q, double a1, double b1, double a2, double b2, int points) {
  const double fmax = 1.0 - 1.0 / kE;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= points; ++i)
    best = std::min(best, mix_at(q, fmax * i / points, a1, b1, a2, b2));
  return best;
}

MixResult mix_optimize(double a1, double b1, double a2, double b2) {
  const int grid = 10000;
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i <= grid; ++i) {
    const double v = mix_ratio(static_cast<double>(i) / grid, a1, b1, a2, b2);
    if (v > best_val + 1e-15) {
      best_val = v;
      best = i;
    }
  }
  const double lo = std::max(0, best - 1) / static_cast<double>(grid);
  const double hi = std::min(grid, best + 1) / static_cast<double>(grid);
  auto obj = [&](double q) { return mix_ratio(q, a1, b1, a2, b2); };
  double q = golden_max(obj, lo, hi, 1e-10);
  // Keep the grid point if the objective is flat.
  if (obj(q) < best_val) q = static_cast<double>(best) / grid;
  return {q, obj(q)};
}

double g_prob_closed(double x, double y) {
  if (std::fabs(x - y) < 1e-7) {
    // Second-order expansion around x = y keeps the two branches continuous.
    const double m = (x + y) / 2.0;
    return 1.0 - std::exp(-m) * (1.0 + m);
  }
  return (x - std::exp(-y) * x + (-1.0 + std::exp(-x)) * y) / (x - y);
}

double g_prob_sum(double x, double y, long n) {
  const double nn = static_cast<double>(n);
  double s = 0.0, lead = 1.0;
  for (long i = 1; i <= n - 1; ++i) {
    s += x / nn * lead * (1.0 - std::pow(1.0 - y / nn, static_cast<double>(n - i)));
    lead *= 1.0 - x / nn;
  }
  return s;
}

Matrix5 chain_matrix(const ChainConfig& cfg) {
  if (cfg.n < 1) throw ValidationError("chain needs n >= 1", "/n");
  if (cfg.b < 0 || cfg.c < 0 || cfg.d < 0 || cfg.ob < 0 || cfg.oc < 0)
    throw ValidationError("chain rates must be nonnegative", "/chain");
  const double n = static_cast<double>(cfg.n);
  const double b = cfg.b, c = cfg.c, d = cfg.d;
  auto ratio = [](double num, double den) { return den > 0 ? num / den : 0.0; };
  Matrix5 M{};
  M[0][1] = (b + cfg.ob) / n;
  M[0][2] = (c + cfg.oc) / n;
  M[1][3] = (c + cfg.oc) / n + ratio(b * c, (c + d) * n);
  M[1][4] = ratio(b * d, (c + d) * n);
  M[2][3] = (b + cfg.ob) / n + ratio(c * b, (b + d) * n);
  M[2][4] = ratio(c * d, (b + d) * n);
  M[3][4] = (b + c) / n;
  M[4][4] = 1.0;
  for (int i = 0; i < 4; ++i) {
    double off = 0.0;
    for (int j = 0; j < 5; ++j)
      if (j != i) off += M[i][j];
    M[i][i] = 1.0 - off;
    if (M[i][i] < 0.0) throw ValidationError("chain rates too large for n", "/chain");
  }
  return M;
}

double g_prob_markov(const ChainConfig& cfg) {
  Matrix5 base = chain_matrix(cfg);
  Matrix5 acc{};
  for (int i = 0; i < 5; ++i) acc[i][i] = 1.0;
  for (long k = cfg.n; k > 0; k >>= 1) {
    if (k & 1) acc = multiply(acc, base);
    base = multiply(base, base);
  }
  return acc[0][4];
}

double p_u_combine(double pr_b, const std::vector<double>& pr_g) {
  double keep = 1.0 - pr_b;
  for (double g : pr_g) keep *= 1.0 - g;
  return 1.0 - keep;
}

namespace {

constexpr double kT = 1.0 / 3.0;

// Rate of lists led by a competitor u_i that come from u_i's other online
// neighbors. Saturated competitors keep their unmodified remaining mass.
double outside_rate(double hu) { return hu > 0.99 ? 2.0 / 3.0 : 0.0; }

struct Three {
  const char* family;
  const char* name;
  double d, b, hb, c, hc, reference;
  const char* note;
};

struct Two {
  const char* family;
  const char* name;
  double d, y, outside, reference;
  const char* note;
};

}  // namespace

std::vector<GammaEntry> gamma_tables(long chain_steps) {
  const double x1 = 0.2744, x2 = 0.15877;
  const Two twos[] = {
      {"H=1", "alpha1", 0.9, 0.1, 0.0, 0.404667, "competitor H=1/3, equal rates"},
      {"H=1", "alpha2", 0.85, 0.15, 0.0, 0.423, "competitor lower bound H'_u1 >= 0.15"},
      {"H=1", "alpha3", 1 - x1, x1, 1 - x1, 0.439667, "H'_u1 >= 1 (large edge keeps >= 0.7256)"},
      {"H=1", "alpha4", 1 - x2, x2, 2 * x2, 0.417923, "H'_u1 >= 3 * 0.15877"},
      {"H=1", "beta2", x1, 1 - x1, x1, 0.601313, "H'_u1 >= 1"},
      {"H=1", "beta3", x2, 1 - x2, x1, 0.63852, "H'_u1 >= 1 - 0.15877 + 0.2744"},
      {"H=1", "beta4", 0.4, 0.6, 0.0, 0.588607, "competitor H=2/3, no outside mass"},
      {"H=2/3", "alpha1", 0.75, 0.25, 0.0, 0.459849, "competitor H=1/3"},
      {"H=2/3", "alpha2", 0.7, 0.3, 0.15, 0.470365, "competitor H=2/3 with outside 0.15"},
      {"H=2/3", "alpha3", 0.6, 0.4, 2.0 / 3.0, 0.475282, "competitor H=1 with outside 2/3"},
      {"H=2/3", "beta1", 0.3, 0.7, 0.0, 0.625395, "competitor H=2/3 thick"},
      {"H=2/3", "beta2", 0.15, 0.85, 0.0, 0.665882,
       "reference needs competitor outside rate ~0.097; no table constant gives it"},
      {"H=1/3", "alpha1", 0.25, 0.75, 0.0, 0.643789, "competitor H=2/3 thick"},
      {"H=1/3", "alpha2", 0.1, 0.9, kT, 0.649443, "competitor H=1 with outside 1/3"},
  };
  const Three threes[] = {
      {"H=1", "beta1", kT, kT, 1, kT, 1, 0.601313, ""},
      {"H=1", "beta5", 0.45, 0.45, 1, 0.1, kT, 0.551803, ""},
      {"H=1", "beta6", 0.4, 0.4, 1, 0.2, 2 * kT, 0.593904,
       "H=1 competitor taken at 0.4 from modification case 5, not 0.2"},
      {"H=1", "beta7", 0.8, 0.1, kT, 0.1, kT, 0.4455, ""},
      {"H=1", "beta8", 0.5, 0.25, 2 * kT, 0.25, 2 * kT, 0.582451, ""},
      {"H=1", "beta9", 0.65, 0.15, kT, 0.2, 2 * kT, 0.510039, ""},
      {"H=2/3", "beta3", 0.2, 0.4, 1, 0.4, 1, 0.669804, ""},
      {"H=2/3", "beta4", kT, kT, 2 * kT, kT, 2 * kT, 0.635563,
       "reference needs outside rate 1/3 per H=2/3 competitor, unlike every other entry"},
      {"H=2/3", "beta5", kT, kT, kT, kT, kT, 0.674471, ""},
      {"H=2/3", "beta6", 0.2, 0.65, 1, 0.15, kT, 0.680529, ""},
      {"H=2/3", "beta7", 0.25, 0.5, 1, 0.25, 2 * kT, 0.676155, ""},
      {"H=2/3", "beta8", kT, kT, kT, kT, 2 * kT, 0.674471, ""},
      {"H=1/3", "alpha3", 0.1, 0.45, 1, 0.45, 1, 0.729751, ""},
      {"H=1/3", "alpha4", kT, kT, kT, kT, kT, 0.674471, ""},
      {"H=1/3", "alpha5", kT, kT, 2 * kT, kT, 2 * kT, 0.674471, ""},
      {"H=1/3", "alpha6", 0.15, 0.65, 1, 0.2, 2 * kT, 0.727643, ""},
      {"H=1/3", "alpha7", 0.1, 0.8, 1, 0.1, kT, 0.72948, ""},
      {"H=1/3", "alpha8", kT, kT, kT, kT, 2 * kT, 0.674471, ""},
  };
  std::vector<GammaEntry> out;
  for (const Two& t : twos) {
    GammaEntry g;
    g.family = t.family;
    g.name = t.name;
    g.method = "closed";
    g.pr_g = g_prob_closed(t.y + t.outside, t.y);
    g.computed = std::exp(-t.d) * (1.0 - g.pr_g);
    g.reference = t.reference;
    g.note = t.note;
    out.push_back(g);
  }
  for (const Three& t : threes) {
    ChainConfig cfg;
    cfg.b = t.b;
    cfg.ob = outside_rate(t.hb);
    cfg.c = t.c;
    cfg.oc = outside_rate(t.hc);
    cfg.d = t.d;
    cfg.n = chain_steps;
    GammaEntry g;
    g.family = t.family;
    g.name = t.name;
    g.method = "markov";
    g.pr_g = g_prob_markov(cfg);
    g.computed = std::exp(-t.d) * (1.0 - g.pr_g);
    g.reference = t.reference;
    g.note = t.note;
    out.push_back(g);
  }
  for (auto& g : out) g.matches = std::fabs(g.computed - g.reference) <= 5e-3;
  auto order = [](const GammaEntry& g) {
    const int fam = g.family == "H=1" ? 0 : g.family == "H=2/3" ? 1 : 2;
    const int kind = g.name[0] == 'a' ? 0 : 1;
    return std::tuple(fam, kind, std::stoi(g.name.substr(g.name[0] == 'a' ? 5 : 4)));
  };
  std::sort(out.begin(), out.end(),
            [&](const GammaEntry& a, const GammaEntry& b) { return order(a) < order(b); });
  return out;
}

VwRatios vw_ratios(const std::vector<GammaEntry>& table) {
  auto max_of = [&](const std::string& fam, char kind, const std::string& skip) {
    double m = 0.0;
    for (const auto& g : table)
      if (g.family == fam && g.name[0] == kind && g.name != skip) m = std::max(m, g.computed);
    return m;
  };
  VwRatios r;
  // beta2 needs u to carry a thick edge, beta3 needs u with three thin edges.
  const double b3 = max_of("H=1", 'b', "beta2");
  r.h1_three = 1.0 - b3 * b3 * b3;
  r.h1_two = 1.0 - max_of("H=1", 'a', "") * max_of("H=1", 'b', "beta3");
  const double thick = (1.0 - max_of("H=2/3", 'a', "")) / (2.0 / 3.0);
  const double bb = max_of("H=2/3", 'b', "");
  const double thin = (1.0 - bb * bb) / (2.0 / 3.0);
  r.h23 = std::min(thick, thin);
  r.h13 = (1.0 - max_of("H=1/3", 'a', "")) * 3.0;
  return r;
}

ModExample modification_example() {
  ModExample m;
  const double g2 = g_prob_closed(2.0 / 3.0, 2.0 / 3.0);
  m.before = p_u_combine(1.0 - std::exp(-1.0), {g_prob_closed(kT, kT), g2});
  m.after = p_u_combine(1.0 - std::exp(-0.9 - kT), {g_prob_closed(0.1, 0.1), g2});
  return m;
}

VwMix vw_mix_min(double c1, double c2, double c3, double cap) {
  if (cap < 0.0) cap = 2.0 - 3.0 / kE;
  cap = std::min(cap, 1.0);
  auto value = [&](const std::array<double, 3>& q) {
    return (c1 * q[0] + c2 * q[1] + (2.0 / 3.0) * c3 * q[2]) / (q[0] + q[1] + (2.0 / 3.0) * q[2]);
  };
  // Linear-fractional objective: the minimum sits at a vertex of the polytope.
  std::vector<std::array<double, 3>> verts = {{0, 1, 0}, {0, 0, 1}};
  if (cap >= 1.0) {
    verts.push_back({1, 0, 0});
  } else {
    verts.push_back({cap, 1 - cap, 0});
    verts.push_back({cap, 0, 1 - cap});
  }
  VwMix best{std::numeric_limits<double>::infinity(), {}};
  for (const auto& q : verts) {
    const double v = value(q);
    if (v < best.value) best = {v, q};
  }
  return best;
}

double uniform_F(double f, double q) {
  if (!(f > 0.0)) throw ValidationError("f' must be positive", "/f");
  const double e1 = std::exp(-1.0), e2 = std::exp(-2.0);
  return ((1.0 - std::exp(-f)) + q * e2 - q * q * e1 * (0.5 - e1) - e2 * f * (1.0 - f)) / f;
}

double uniform_delta(double s) { return 2.0 - 2.0 * std::exp(-s) - s; }

std::pair<double, double> uniform_delta_max() {
  const double s = golden_max(uniform_delta, 0.0, 5.0, 1e-12);
  return {uniform_delta(s), s};
}

double bmatch_bound(double b, double eps) {
  if (!(b >= 1.0)) throw ValidationError("b must be >= 1", "/b");
  const double tau = std::pow(b, -0.5 + eps);
  return (1.0 - tau) * (1.0 - std::exp(-b * tau * tau / 3.0));
}

double ConstantRow::diff() const { return std::fabs(computed - reference); }

std::string ConstantRow::verdict() const { return diff() <= tol ? "match" : "discrepancy"; }

std::vector<ConstantRow> constants_report() {
  std::vector<ConstantRow> rows;
  const BaseProbs P = base_probs(100000);
  rows.push_back({"P1", P.p1, 0.5808, 1e-3});
  rows.push_back({"P2", P.p2, 0.14849, 1e-3});
  rows.push_back({"Pb", P.pb, 0.632, 1e-3});
  const double fmax = 1.0 - 1.0 / kE;
  rows.push_back({"ew0 small edge", ew0_ratio(0.4), 0.729, 1e-3});
  rows.push_back({"ew0 worst (f=1-1/e)", ew0_ratio(fmax), 0.688, 1e-3});
  rows.push_back({"ew07 worst (eta=0.0142)", ew07_worst(0.0142), 0.7, 1e-3});
  const double h = 0.537815;
  const Ew1Ratios c = ew1_ratios(h);
  const Ew1Ratios d = ew1_ratios_derived(h);
  rows.push_back({"ew1 large (closed form)", c.large, 0.679417, 1e-4});
  rows.push_back({"ew1 large (from sums)", d.large, 0.679417, 1e-4});
  rows.push_back({"ew1 gamma1", c.gamma1, 0.751066, 1e-4});
  rows.push_back({"ew1 gamma1 (from integrals)", d.gamma1, 0.751066, 1e-4});
  rows.push_back({"ew1 gamma2", c.gamma2, 0.751066, 1e-4});
  rows.push_back({"ew1 gamma2 (from sums)", d.gamma2, 0.751066, 1e-4});
  rows.push_back({"ew1 balancing h", ew1_balance_h(), 0.537815, 1e-6});
  const Ew2Ratios e2 = ew2_ratios(0.687, 1.0);
  rows.push_back({"ew2 large", e2.large, 0.8539, 1e-4});
  rows.push_back({"ew2 small", e2.small, 0.4455, 1e-4});
  const MixResult mix = mix_optimize(0.679417, 0.751066, 0.8539, 0.4455);
  rows.push_back({"ew mixture ratio", mix.ratio, 0.70546, 1e-3});
  rows.push_back({"ew mixture weight on EW2", 1.0 - mix.weight_ew1, 0.149251, 1e-3});
  const MixResult mix_d = mix_optimize(c.large, c.gamma1, e2.large, e2.small);
  rows.push_back({"ew mixture ratio (closed-form a1)", mix_d.ratio, 0.70546, 1e-3});
  const ModExample modex = modification_example();
  rows.push_back({"modification example P_u before", modex.before, 1.0 - 20.0 / (9.0 * kE * kE), 1e-5});
  rows.push_back({"modification example P_u after", modex.after, 0.751, 1e-3});
  const auto table = gamma_tables();
  const VwRatios vr = vw_ratios(table);
  rows.push_back({"vw H=1 three neighbors", vr.h1_three, 0.73967, 1e-4});
  rows.push_back({"vw H=1 two neighbors", vr.h1_two, 0.735622, 1e-4});
  rows.push_back({"vw H=2/3 (case analysis)", vr.h23, 0.7870, 1e-3});
  rows.push_back({"vw H=2/3 (stated bound)", vr.h23, 0.7847, 1e-3});
  rows.push_back({"vw H=1/3 (case analysis)", vr.h13, 0.8107, 1e-3});
  rows.push_back({"vw H=1/3 (stated bound)", vr.h13, 0.7622, 1e-3});
  rows.push_back({"vw mixture minimum", vw_mix_min().value, 0.729982, 1e-5});
  rows.push_back({"uniform F(1, ln2)", uniform_F(1.0, std::log(2.0)), 0.702, 1e-3});
  rows.push_back({"uniform F(ln2/2, 0)", uniform_F(std::log(2.0) / 2.0, 0.0), 0.8, 1e-2});
  rows.push_back({"uniform delta max", uniform_delta_max().first, 1.0 - std::log(2.0), 1e-9});
  for (const auto& g : table)
    rows.push_back({"gamma " + g.family + " " + g.name, g.computed, g.reference, 5e-3});
  return rows;
}

std::string constants_csv(const std::vector<ConstantRow>& rows) {
  std::ostringstream os;
  os << "name,computed,reference,diff,verdict\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.2e,%s\n", r.name.c_str(), r.computed, r.reference,
                  r.diff(), r.verdict().c_str());
    os << buf;
  }
  return os.str();
}

}  // namespace iidm
