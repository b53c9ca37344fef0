#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "iidm/instance.hpp"
#include "iidm/lp.hpp"

namespace testing {

struct E {
  int u, v;
  double w = 1.0;
  double p = 1.0;
};

// Unit-rate instance unless `rates` is given; n = sum of rates.
inline iidm::Instance make(int nu, int nv, const std::vector<E>& edges,
                           std::vector<double> rates = {}, std::vector<double> wu = {}) {
  iidm::Instance inst;
  for (int i = 0; i < nu; ++i)
    inst.offline.push_back({"u" + std::to_string(i), wu.empty() ? 1.0 : wu[i]});
  double n = 0;
  for (int j = 0; j < nv; ++j) {
    const double r = rates.empty() ? 1.0 : rates[j];
    inst.online.push_back({"v" + std::to_string(j), r});
    n += r;
  }
  for (const E& e : edges) inst.edges.push_back({e.u, e.v, e.w, e.p});
  inst.n = static_cast<int>(std::lround(n));
  inst.integral_rates = iidm::rates_integral(inst);
  inst.finalize();
  return inst;
}

// Independent LP oracle: enumerates every basis of {rows, x >= 0, x <= upper}
// with Gaussian elimination and keeps the best feasible vertex.
inline double brute_force_lp(const iidm::LinearProgram& lp, std::vector<double>* best_x = nullptr) {
  const int n = lp.num_vars;
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (const auto& r : lp.rows) {
    std::vector<double> a(n, 0.0);
    for (auto [j, c] : r.coef) a[j] += c;
    A.push_back(a);
    b.push_back(r.rhs);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> a(n, 0.0);
    a[j] = -1.0;
    A.push_back(a);
    b.push_back(0.0);
    if (std::isfinite(lp.upper[j])) {
      a[j] = 1.0;
      A.push_back(a);
      b.push_back(lp.upper[j]);
    }
  }
  const int m = static_cast<int>(A.size());
  double best = -1e300;
  std::vector<int> pick(n);
  std::vector<bool> mask(m, false);
  std::fill(mask.begin(), mask.begin() + std::min(n, m), true);
  do {
    int k = 0;
    for (int i = 0; i < m; ++i)
      if (mask[i]) pick[k++] = i;
    std::vector<std::vector<double>> M(n, std::vector<double>(n + 1));
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) M[r][c] = A[pick[r]][c];
      M[r][n] = b[pick[r]];
    }
    bool singular = false;
    for (int c = 0; c < n && !singular; ++c) {
      int piv = c;
      for (int r = c + 1; r < n; ++r)
        if (std::fabs(M[r][c]) > std::fabs(M[piv][c])) piv = r;
      if (std::fabs(M[piv][c]) < 1e-12) {
        singular = true;
        break;
      }
      std::swap(M[c], M[piv]);
      for (int r = 0; r < n; ++r) {
        if (r == c) continue;
        const double f = M[r][c] / M[c][c];
        for (int cc = c; cc <= n; ++cc) M[r][cc] -= f * M[c][cc];
      }
    }
    if (singular) continue;
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = M[j][n] / M[j][j];
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += A[i][j] * x[j];
      ok = s <= b[i] + 1e-9;
    }
    if (!ok) continue;
    double obj = 0;
    for (int j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
    if (obj > best) {
      best = obj;
      if (best_x) *best_x = x;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace testing
