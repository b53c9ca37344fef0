#include "iidm/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "iidm/errors.hpp"
#include "iidm/rng.hpp"
#include "json.hpp"

namespace iidm {

using ojson = nlohmann::ordered_json;

void Instance::finalize() {
  adj_u.assign(offline.size(), {});
  adj_v.assign(online.size(), {});
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges[e];
    if (ed.u >= 0 && ed.u < num_offline()) adj_u[ed.u].push_back(e);
    if (ed.v >= 0 && ed.v < num_online()) adj_v[ed.v].push_back(e);
  }
}

bool Instance::stochastic() const {
  for (const Edge& e : edges)
    if (e.p < 1.0) return true;
  return false;
}

double Instance::rate_sum() const {
  double s = 0.0;
  for (const OnlineType& t : online) s += t.r;
  return s;
}

bool operator==(const Instance& a, const Instance& b) {
  if (a.n != b.n || a.integral_rates != b.integral_rates ||
      a.uniform_p != b.uniform_p || a.target_f != b.target_f ||
      a.tracked != b.tracked)
    return false;
  if (a.offline.size() != b.offline.size() ||
      a.online.size() != b.online.size() || a.edges.size() != b.edges.size())
    return false;
  for (size_t i = 0; i < a.offline.size(); ++i)
    if (a.offline[i].id != b.offline[i].id || a.offline[i].w != b.offline[i].w)
      return false;
  for (size_t i = 0; i < a.online.size(); ++i)
    if (a.online[i].id != b.online[i].id || a.online[i].r != b.online[i].r)
      return false;
  for (size_t i = 0; i < a.edges.size(); ++i) {
    const Edge& x = a.edges[i];
    const Edge& y = b.edges[i];
    if (x.u != y.u || x.v != y.v || x.w != y.w || x.p != y.p) return false;
  }
  return true;
}

namespace {

std::string at(const std::string& base, size_t i, const char* field) {
  return base + "/" + std::to_string(i) + "/" + field;
}

bool is_integer(double x, double tol) {
  return std::fabs(x - std::round(x)) <= tol;
}

// Natural order: digit runs compare numerically.
bool natural_less(const std::string& a, const std::string& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      size_t i2 = i, j2 = j;
      while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2])))
        ++i2;
      while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2])))
        ++j2;
      std::string na = a.substr(i, i2 - i), nb = b.substr(j, j2 - j);
      na.erase(0, std::min(na.find_first_not_of('0'), na.size() - 1));
      nb.erase(0, std::min(nb.find_first_not_of('0'), nb.size() - 1));
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

}  // namespace

std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&](std::string path, std::string rule) {
    out.push_back({std::move(path), std::move(rule)});
  };
  if (inst.n <= 0) add("/n", "horizon must be a positive integer");

  std::set<std::string> ids;
  for (size_t i = 0; i < inst.offline.size(); ++i) {
    const OfflineVertex& u = inst.offline[i];
    if (!ids.insert("u:" + u.id).second) add(at("/offline", i, "id"), "duplicate id");
    if (!(u.w >= 0.0) || !std::isfinite(u.w))
      add(at("/offline", i, "w"), "weight must be finite and >= 0");
  }
  for (size_t i = 0; i < inst.online.size(); ++i) {
    const OnlineType& v = inst.online[i];
    if (!ids.insert("v:" + v.id).second) add(at("/online", i, "id"), "duplicate id");
    if (!(v.r > 0.0) || !std::isfinite(v.r))
      add(at("/online", i, "r"), "rate must be finite and > 0");
    if (inst.integral_rates && !is_integer(v.r, 1e-9))
      add(at("/online", i, "r"), "integral_rates set but rate is not integral");
  }
  const double rs = inst.rate_sum();
  if (inst.n > 0 && std::fabs(rs - inst.n) > 1e-9 * std::max(1.0, double(inst.n)))
    add("/n", "rate-sum mismatch");

  std::set<std::pair<int, int>> pairs;
  for (size_t i = 0; i < inst.edges.size(); ++i) {
    const Edge& e = inst.edges[i];
    if (e.u < 0 || e.u >= inst.num_offline())
      add(at("/edges", i, "u"), "unknown offline vertex");
    if (e.v < 0 || e.v >= inst.num_online())
      add(at("/edges", i, "v"), "unknown online type");
    if (!pairs.insert({e.u, e.v}).second)
      add("/edges/" + std::to_string(i), "duplicate (u,v) pair");
    if (!(e.w >= 0.0) || !std::isfinite(e.w))
      add(at("/edges", i, "w"), "weight must be finite and >= 0");
    if (!(e.p > 0.0 && e.p <= 1.0)) add(at("/edges", i, "p"), "probe_prob out of (0,1]");
    if (inst.uniform_p && e.p != *inst.uniform_p)
      add(at("/edges", i, "p"), "uniform_p set but probe_prob differs");
  }
  if (inst.uniform_p && !(*inst.uniform_p > 0.0 && *inst.uniform_p <= 1.0))
    add("/flags/uniform_p", "probe_prob out of (0,1]");
  if (!inst.target_f.empty()) {
    if (inst.target_f.size() != inst.edges.size())
      add("/target_f", "length must equal number of edges");
    for (size_t i = 0; i < inst.target_f.size(); ++i)
      if (!(inst.target_f[i] >= 0.0 && inst.target_f[i] <= 1.0))
        add("/target_f/" + std::to_string(i), "target value out of [0,1]");
  }
  for (size_t i = 0; i < inst.tracked.size(); ++i)
    if (inst.tracked[i] < 0 || inst.tracked[i] >= inst.num_edges())
      add("/tracked/" + std::to_string(i), "unknown edge");
  return out;
}

void require_valid(const Instance& inst) {
  auto v = validate(inst);
  if (!v.empty()) throw ValidationError(v.front().rule, v.front().path);
}

void canonicalize_order(Instance& inst) {
  auto order = [](const auto& items) {
    std::vector<int> idx(items.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      return natural_less(items[a].id, items[b].id);
    });
    return idx;
  };
  const std::vector<int> ou = order(inst.offline);
  const std::vector<int> ov = order(inst.online);
  std::vector<int> new_u(ou.size()), new_v(ov.size());
  std::vector<OfflineVertex> offline(ou.size());
  std::vector<OnlineType> online(ov.size());
  for (size_t i = 0; i < ou.size(); ++i) {
    new_u[ou[i]] = static_cast<int>(i);
    offline[i] = inst.offline[ou[i]];
  }
  for (size_t i = 0; i < ov.size(); ++i) {
    new_v[ov[i]] = static_cast<int>(i);
    online[i] = inst.online[ov[i]];
  }
  for (Edge& e : inst.edges) {
    if (e.u >= 0 && e.u < static_cast<int>(new_u.size())) e.u = new_u[e.u];
    if (e.v >= 0 && e.v < static_cast<int>(new_v.size())) e.v = new_v[e.v];
  }
  std::vector<int> oe(inst.edges.size());
  std::iota(oe.begin(), oe.end(), 0);
  std::stable_sort(oe.begin(), oe.end(), [&](int a, int b) {
    const Edge& x = inst.edges[a];
    const Edge& y = inst.edges[b];
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  std::vector<int> new_e(oe.size());
  std::vector<Edge> edges(oe.size());
  std::vector<double> target(inst.target_f.empty() ? 0 : oe.size());
  for (size_t i = 0; i < oe.size(); ++i) {
    new_e[oe[i]] = static_cast<int>(i);
    edges[i] = inst.edges[oe[i]];
    if (!target.empty() && oe[i] < static_cast<int>(inst.target_f.size()))
      target[i] = inst.target_f[oe[i]];
  }
  for (int& t : inst.tracked)
    if (t >= 0 && t < static_cast<int>(new_e.size())) t = new_e[t];
  std::sort(inst.tracked.begin(), inst.tracked.end());
  inst.offline = std::move(offline);
  inst.online = std::move(online);
  inst.edges = std::move(edges);
  if (!inst.target_f.empty()) inst.target_f = std::move(target);
  inst.finalize();
}

bool rates_integral(const Instance& inst, double tol) {
  for (const OnlineType& t : inst.online)
    if (!is_integer(t.r, tol) || std::round(t.r) < 1) return false;
  return true;
}

Instance split_unit_rates(const Instance& inst) {
  if (!rates_integral(inst))
    throw ValidationError("rates are not integral; cannot split into unit copies",
                          "/online");
  Instance out;
  out.offline = inst.offline;
  out.n = inst.n;
  out.integral_rates = true;
  out.uniform_p = inst.uniform_p;
  std::vector<std::vector<int>> copies(inst.online.size());
  for (size_t v = 0; v < inst.online.size(); ++v) {
    const long k = std::lround(inst.online[v].r);
    for (long c = 0; c < k; ++c) {
      copies[v].push_back(out.num_online());
      OnlineType t{inst.online[v].id, 1.0};
      if (k > 1) t.id += "#" + std::to_string(c);
      out.online.push_back(t);
    }
  }
  std::vector<std::vector<int>> image(inst.edges.size());
  for (size_t e = 0; e < inst.edges.size(); ++e) {
    const Edge& ed = inst.edges[e];
    for (int c : copies[ed.v]) {
      image[e].push_back(out.num_edges());
      Edge x = ed;
      x.v = c;
      out.edges.push_back(x);
      // A split type shares its mass equally between copies.
      if (!inst.target_f.empty())
        out.target_f.push_back(inst.target_f[e] / static_cast<double>(copies[ed.v].size()));
    }
  }
  for (int t : inst.tracked)
    for (int x : image[t]) out.tracked.push_back(x);
  out.finalize();
  return out;
}

GadgetKind parse_gadget_kind(const std::string& name) {
  if (name == "c1_cycle") return GadgetKind::kC1Cycle;
  if (name == "c2_cycle") return GadgetKind::kC2Cycle;
  if (name == "c3_cycle") return GadgetKind::kC3Cycle;
  if (name == "second_mod_chain") return GadgetKind::kSecondModChain;
  if (name == "single_edge_padded") return GadgetKind::kSingleEdgePadded;
  throw ValidationError("unknown gadget kind '" + name + "'", "/kind");
}

std::string gadget_name(GadgetKind kind) {
  switch (kind) {
    case GadgetKind::kC1Cycle: return "c1_cycle";
    case GadgetKind::kC2Cycle: return "c2_cycle";
    case GadgetKind::kC3Cycle: return "c3_cycle";
    case GadgetKind::kSecondModChain: return "second_mod_chain";
    case GadgetKind::kSingleEdgePadded: return "single_edge_padded";
  }
  return "?";
}

namespace {

struct GadgetShape {
  int nu = 0, nv = 0;
  struct E { int u, v; double f; bool tracked; };
  std::vector<E> edges;
};

GadgetShape shape_of(GadgetKind kind) {
  const double t1 = 1.0 / 3.0, t2 = 2.0 / 3.0;
  const double ie = std::exp(-1.0);
  GadgetShape g;
  switch (kind) {
    case GadgetKind::kC1Cycle:
      g = {2, 2, {{0, 0, t2, false}, {0, 1, t1, false}, {1, 0, t1, false}, {1, 1, t2, false}}};
      break;
    case GadgetKind::kC2Cycle:
      g = {2, 2, {{0, 0, t2, false}, {0, 1, t1, false}, {1, 0, t1, false}, {1, 1, t1, false}}};
      break;
    case GadgetKind::kC3Cycle:
      g = {2, 2, {{0, 0, t1, false}, {0, 1, t1, false}, {1, 0, t1, false}, {1, 1, t1, false}}};
      break;
    case GadgetKind::kSecondModChain:
      // u = 0, u1 = 1, u2 = 2; v1 = 0, v2 = 1.
      g = {3, 2, {{0, 0, t2, false}, {1, 0, t1, false}, {0, 1, t1, false}, {2, 1, t2, false}}};
      break;
    case GadgetKind::kSingleEdgePadded:
      // Tracked u-v carries 1-1/e; u and v are filled to unit mass by a
      // filler neighbor each.
      g = {2, 2, {{0, 0, 1.0 - ie, true}, {0, 1, ie, false}, {1, 0, ie, false}}};
      break;
  }
  return g;
}

std::string padded(int x, int width) {
  std::string s = std::to_string(x);
  if (static_cast<int>(s.size()) < width) s.insert(0, width - s.size(), '0');
  return s;
}

}  // namespace

Instance gen_gadget(GadgetKind kind, int m, int pad_to) {
  if (m < 1) throw ValidationError("number of copies must be >= 1", "/m");
  const GadgetShape g = shape_of(kind);
  const int width = static_cast<int>(std::to_string(std::max(m, pad_to)).size());
  Instance inst;
  for (int c = 0; c < m; ++c) {
    const std::string tag = "g" + padded(c, width);
    const int u0 = inst.num_offline(), v0 = inst.num_online();
    for (int i = 0; i < g.nu; ++i) inst.offline.push_back({tag + "u" + std::to_string(i), 1.0});
    for (int j = 0; j < g.nv; ++j) inst.online.push_back({tag + "v" + std::to_string(j), 1.0});
    for (const auto& e : g.edges) {
      if (e.tracked) inst.tracked.push_back(inst.num_edges());
      inst.edges.push_back({u0 + e.u, v0 + e.v, 1.0, 1.0});
      inst.target_f.push_back(e.f);
    }
  }
  for (int k = 0; inst.num_online() < pad_to; ++k)
    inst.online.push_back({"pad" + padded(k, width), 1.0});
  inst.n = inst.num_online();
  inst.integral_rates = true;
  canonicalize_order(inst);
  return inst;
}

Instance gen_random(const RandomParams& prm) {
  if (prm.num_u < 1 || prm.num_v < 1) throw ValidationError("sizes must be >= 1", "/size");
  if (!(prm.density > 0.0 && prm.density <= 1.0))
    throw ValidationError("density must be in (0,1]", "/density");
  if (!(prm.weight.first <= prm.weight.second) || prm.weight.first < 0.0)
    throw ValidationError("empty or negative weight range", "/weight");
  if (!(prm.p.first <= prm.p.second) || !(prm.p.first > 0.0) || prm.p.second > 1.0)
    throw ValidationError("empty probe range or outside (0,1]", "/p");
  Rng rng = make_rng(prm.seed);
  auto draw = [&](std::pair<double, double> r) {
    if (r.first == r.second) return r.first;
    return std::uniform_real_distribution<double>(r.first, r.second)(rng);
  };
  Instance inst;
  const int width = static_cast<int>(std::to_string(std::max(prm.num_u, prm.num_v)).size());
  for (int i = 0; i < prm.num_u; ++i) inst.offline.push_back({"u" + padded(i, width), 1.0});
  for (int j = 0; j < prm.num_v; ++j) inst.online.push_back({"v" + padded(j, width), 1.0});
  for (int i = 0; i < prm.num_u; ++i)
    for (int j = 0; j < prm.num_v; ++j) {
      if (prm.density < 1.0 && uniform01(rng) >= prm.density) continue;
      Edge e{i, j, draw(prm.weight), draw(prm.p)};
      inst.edges.push_back(e);
    }
  if (prm.horizon > 0) {
    // Random positive rates scaled to sum to the horizon.
    std::vector<double> r(prm.num_v);
    double s = 0.0;
    for (double& x : r) {
      x = 0.25 + uniform01(rng);
      s += x;
    }
    double acc = 0.0;
    for (int j = 0; j < prm.num_v; ++j) {
      inst.online[j].r = (j + 1 < prm.num_v) ? r[j] * prm.horizon / s : prm.horizon - acc;
      acc += inst.online[j].r;
    }
    inst.n = prm.horizon;
    inst.integral_rates = rates_integral(inst);
  } else {
    inst.n = prm.num_v;
    inst.integral_rates = true;
  }
  if (prm.p.first == prm.p.second)
    inst.uniform_p = prm.p.first;
  canonicalize_order(inst);
  return inst;
}

std::string to_json(const Instance& inst, int indent) {
  ojson j;
  j["offline"] = ojson::array();
  for (const auto& u : inst.offline) j["offline"].push_back({{"id", u.id}, {"w", u.w}});
  j["online"] = ojson::array();
  for (const auto& v : inst.online) j["online"].push_back({{"id", v.id}, {"r", v.r}});
  j["edges"] = ojson::array();
  for (const auto& e : inst.edges)
    j["edges"].push_back({{"u", inst.offline.at(e.u).id},
                          {"v", inst.online.at(e.v).id},
                          {"w", e.w},
                          {"p", e.p}});
  j["n"] = inst.n;
  if (inst.integral_rates || inst.uniform_p) {
    ojson flags;
    flags["integral_rates"] = inst.integral_rates;
    if (inst.uniform_p) flags["uniform_p"] = *inst.uniform_p;
    j["flags"] = flags;
  }
  if (!inst.target_f.empty()) j["target_f"] = inst.target_f;
  if (!inst.tracked.empty()) j["tracked"] = inst.tracked;
  return j.dump(indent);
}

namespace {

std::string id_of(const ojson& x, const std::string& path) {
  if (x.is_string()) return x.get<std::string>();
  if (x.is_number_integer()) return std::to_string(x.get<long long>());
  throw ValidationError("id must be a string or an integer", path);
}

double number_or(const ojson& obj, const char* key, double dflt, const std::string& path) {
  if (!obj.contains(key)) return dflt;
  const ojson& x = obj[key];
  if (!x.is_number()) throw ValidationError("must be a number", path);
  return x.get<double>();
}

const ojson& array_at(const ojson& j, const char* key) {
  const std::string path = std::string("/") + key;
  if (!j.contains(key)) throw ValidationError("missing required array", path);
  if (!j[key].is_array()) throw ValidationError("must be an array", path);
  return j[key];
}

}  // namespace

Instance from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what(), "");
  }
  if (!j.is_object()) throw ValidationError("document must be an object", "");
  Instance inst;
  std::map<std::string, int> uid, vid;
  const ojson& off = array_at(j, "offline");
  for (size_t i = 0; i < off.size(); ++i) {
    const std::string p = "/offline/" + std::to_string(i);
    if (!off[i].is_object() || !off[i].contains("id"))
      throw ValidationError("entry needs an id", p);
    OfflineVertex u{id_of(off[i]["id"], p + "/id"), number_or(off[i], "w", 1.0, p + "/w")};
    if (!uid.emplace(u.id, inst.num_offline()).second)
      throw ValidationError("duplicate id", p + "/id");
    inst.offline.push_back(u);
  }
  const ojson& on = array_at(j, "online");
  for (size_t i = 0; i < on.size(); ++i) {
    const std::string p = "/online/" + std::to_string(i);
    if (!on[i].is_object() || !on[i].contains("id"))
      throw ValidationError("entry needs an id", p);
    OnlineType v{id_of(on[i]["id"], p + "/id"), number_or(on[i], "r", 1.0, p + "/r")};
    if (!vid.emplace(v.id, inst.num_online()).second)
      throw ValidationError("duplicate id", p + "/id");
    inst.online.push_back(v);
  }
  const ojson& ed = array_at(j, "edges");
  for (size_t i = 0; i < ed.size(); ++i) {
    const std::string p = "/edges/" + std::to_string(i);
    if (!ed[i].is_object() || !ed[i].contains("u") || !ed[i].contains("v"))
      throw ValidationError("edge needs u and v", p);
    auto iu = uid.find(id_of(ed[i]["u"], p + "/u"));
    if (iu == uid.end()) throw ValidationError("unknown offline vertex", p + "/u");
    auto iv = vid.find(id_of(ed[i]["v"], p + "/v"));
    if (iv == vid.end()) throw ValidationError("unknown online type", p + "/v");
    inst.edges.push_back({iu->second, iv->second, number_or(ed[i], "w", 1.0, p + "/w"),
                          number_or(ed[i], "p", 1.0, p + "/p")});
  }
  const char* hkey = j.contains("n") ? "n" : (j.contains("horizon") ? "horizon" : nullptr);
  if (hkey == nullptr) throw ValidationError("missing horizon", "/n");
  if (!j[hkey].is_number_integer())
    throw ValidationError("horizon must be an integer", std::string("/") + hkey);
  inst.n = j[hkey].get<int>();
  if (j.contains("flags")) {
    const ojson& f = j["flags"];
    if (!f.is_object()) throw ValidationError("must be an object", "/flags");
    if (f.contains("integral_rates")) {
      if (!f["integral_rates"].is_boolean())
        throw ValidationError("must be a boolean", "/flags/integral_rates");
      inst.integral_rates = f["integral_rates"].get<bool>();
    }
    if (f.contains("uniform_p") && !f["uniform_p"].is_null())
      inst.uniform_p = number_or(f, "uniform_p", 1.0, "/flags/uniform_p");
  }
  if (j.contains("target_f")) {
    if (!j["target_f"].is_array()) throw ValidationError("must be an array", "/target_f");
    for (size_t i = 0; i < j["target_f"].size(); ++i) {
      const ojson& x = j["target_f"][i];
      if (!x.is_number()) throw ValidationError("must be a number", "/target_f/" + std::to_string(i));
      inst.target_f.push_back(x.get<double>());
    }
  }
  if (j.contains("tracked")) {
    if (!j["tracked"].is_array()) throw ValidationError("must be an array", "/tracked");
    for (size_t i = 0; i < j["tracked"].size(); ++i) {
      const ojson& x = j["tracked"][i];
      if (!x.is_number_integer())
        throw ValidationError("must be an integer", "/tracked/" + std::to_string(i));
      inst.tracked.push_back(x.get<int>());
    }
  }
  inst.finalize();
  require_valid(inst);
  canonicalize_order(inst);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file '" + path + "'", "");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'", "");
  out << to_json(inst, 2) << "\n";
}

}  // namespace iidm
