#include "swaplab/config.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "swaplab/errors.hpp"
#include "swaplab/suites.hpp"

namespace swaplab {

using nlohmann::json;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"shift-de",  "shift-sa", "osp-lpp",  "geodesic",
                                              "sixvertex", "fg",       "coupling", "asymptotics"};
  return names;
}

namespace {

std::string rect_str(const RectangleSpec& r) {
  return "R^" + std::to_string(r.a) + "_{" + std::to_string(r.b) + "," + std::to_string(r.c) + "}";
}

// Explains why r1 <= r2 fails, or returns empty.
std::string leq_failure(const RectangleSpec& r1, const RectangleSpec& r2) {
  if (r1.a > r2.a) return "A1 <= A2 fails (" + std::to_string(r1.a) + " > " + std::to_string(r2.a) + ")";
  if (r1.a + r1.b < r2.a + r2.b)
    return "A1+B1 >= A2+B2 fails (" + std::to_string(r1.a + r1.b) + " < " +
           std::to_string(r2.a + r2.b) + ")";
  if (r1.a - r1.c < r2.a - r2.c)
    return "A1-C1 >= A2-C2 fails (" + std::to_string(r1.a - r1.c) + " < " +
           std::to_string(r2.a - r2.c) + ")";
  return {};
}

std::string check_groups_ordered(const std::vector<std::vector<RectangleSpec>>& groups,
                                 const char* which) {
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (std::size_t k = i + 1; k < groups.size(); ++k)
      for (const auto& r1 : groups[i])
        for (const auto& r2 : groups[k]) {
          const std::string why = leq_failure(r1, r2);
          if (!why.empty())
            return std::string(which) + ": " + rect_str(r1) + " <= " + rect_str(r2) + ": " + why;
        }
  return {};
}

RectangleSpec parse_rect(const json& j) {
  RectangleSpec r;
  r.a = j.at("A").get<std::int64_t>();
  r.b = j.at("B").get<std::int64_t>();
  r.c = j.at("C").get<std::int64_t>();
  if (r.b < 1 || r.c < 1) throw ConfigError("rectangle needs B, C >= 1");
  return r;
}

template <class T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

HeightPoint parse_point(const json& j) {
  HeightPoint p;
  p.x = j.at("x").get<double>();
  p.y = j.at("y").get<double>();
  p.m = j.at("m").get<int>();
  auto half = [](double v) { return std::floor(v - 0.5) == v - 0.5 && v > 0.0; };
  if (!half(p.x) || !half(p.y)) throw ConfigError("height points need positive half-integer coordinates");
  if (p.m < 1) throw ConfigError("height color threshold must be >= 1");
  return p;
}

ShiftDeConfig parse_shift_de(const json& j) {
  ShiftDeConfig c;
  for (const auto& g : j.at("groups")) {
    std::vector<RectangleSpec> group;
    for (const auto& r : g) group.push_back(parse_rect(r));
    if (group.empty()) throw ConfigError("shift-de: empty group");
    c.groups.push_back(std::move(group));
  }
  get_if(j, "iota", c.iota);
  get_if(j, "shift", c.shift);
  get_if(j, "negative_control", c.negative_control);
  get_if(j, "event_times", c.event_times);
  get_if(j, "region_first_greater", c.region_first_greater);
  get_if(j, "density_trials", c.density_trials);
  return c;
}

ShiftSaConfig parse_shift_sa(const json& j) {
  ShiftSaConfig c;
  for (const auto& r : j.at("rects")) c.rects.push_back(parse_rect(r));
  c.shifted_a = j.at("shifted_A").get<std::vector<std::int64_t>>();
  get_if(j, "geodesic", c.geodesic);
  return c;
}

AsymptoticsConfig parse_asymptotics(const json& j) {
  AsymptoticsConfig c;
  get_if(j, "lal_n", c.lal_n);
  get_if(j, "lal_y", c.lal_y);
  get_if(j, "lal_trials", c.lal_trials);
  get_if(j, "lal_tolerance", c.lal_tolerance);
  get_if(j, "increment_n", c.increment_n);
  get_if(j, "increment_y", c.increment_y);
  get_if(j, "increment_halfwidth", c.increment_halfwidth);
  get_if(j, "increments", c.increments);
  get_if(j, "variance_tolerance", c.variance_tolerance);
  get_if(j, "max_n", c.max_n);
  get_if(j, "max_tolerance", c.max_tolerance);
  get_if(j, "location_n", c.location_n);
  get_if(j, "scaling_trials", c.scaling_trials);
  get_if(j, "band_lo", c.band_lo);
  get_if(j, "band_hi", c.band_hi);
  get_if(j, "max_growth", c.max_growth);
  get_if(j, "run_lal", c.run_lal);
  get_if(j, "run_increments", c.run_increments);
  get_if(j, "run_scaling", c.run_scaling);
  for (double y : c.lal_y)
    if (!(y > 0.0 && y < 1.0)) throw ConfigError("asymptotics: y must lie in (0,1)");
  if (!(c.increment_y > 0.0 && c.increment_y < 1.0))
    throw ConfigError("asymptotics: increment_y must lie in (0,1)");
  if (c.lal_n < 2 || c.increment_n < 4 || c.max_n < 2) throw ConfigError("asymptotics: N too small");
  return c;
}

SixVertexConfig parse_sixvertex(const json& j) {
  SixVertexConfig c;
  get_if(j, "b1", c.b1);
  get_if(j, "b2", c.b2);
  if (!(0.0 <= c.b2 && c.b2 < c.b1 && c.b1 < 1.0))
    throw ConfigError("sixvertex: need 0 <= b2 < b1 < 1");
  if (j.contains("instances")) {
    for (const auto& ji : j.at("instances")) {
      GalInstance g;
      get_if(ji, "name", g.name);
      for (const auto& p : ji.at("lower")) g.lower.push_back(parse_point(p));
      if (ji.contains("upper"))
        for (const auto& p : ji.at("upper")) g.upper.push_back(parse_point(p));
      c.instances.push_back(std::move(g));
    }
  }
  if (j.contains("limit")) {
    const auto& jl = j.at("limit");
    LimitSmokeConfig l;
    get_if(jl, "A", l.a);
    get_if(jl, "B", l.b);
    get_if(jl, "t", l.t);
    get_if(jl, "eps", l.eps);
    get_if(jl, "trials", l.trials);
    get_if(jl, "reference_trials", l.reference_trials);
    if (l.trials < 1 || l.reference_trials < 1) throw ConfigError("sixvertex limit: trials must be positive");
    if (l.a < 0 || l.b < 1 || l.t <= 0.0) throw ConfigError("sixvertex limit: need A >= 0, B >= 1, t > 0");
    for (double e : l.eps)
      if (!(e > 0.0 && e < 1.0)) throw ConfigError("sixvertex limit: eps must lie in (0,1)");
    c.limit = l;
  }
  return c;
}

FgConfig parse_fg(const json& j) {
  FgConfig c;
  get_if(j, "N", c.ns);
  get_if(j, "points", c.points);
  get_if(j, "eg_max_n", c.eg_max_n);
  get_if(j, "witness", c.witness);
  for (int n : c.ns)
    if (n < 2 || n > 6) throw ConfigError("fg: N must lie in 2..6");
  if (c.points < 1) throw ConfigError("fg: points must be positive");
  return c;
}

CouplingConfig parse_coupling(const json& j) {
  CouplingConfig c;
  get_if(j, "N", c.n);
  get_if(j, "seeds", c.seeds);
  get_if(j, "table_B", c.table_b);
  get_if(j, "table_C", c.table_c);
  get_if(j, "table_A", c.table_a);
  if (j.contains("horizon") && !j.at("horizon").is_null()) c.horizon = j.at("horizon").get<double>();
  if (c.n < 2) throw ConfigError("coupling: N must be >= 2");
  return c;
}

void validate(const ExperimentConfig& cfg) {
  if (auto* c = std::get_if<ShiftDeConfig>(&cfg.params)) {
    if (c->groups.size() < 2) throw ConfigError("shift-de: need at least two groups");
    if (c->iota < 1 || c->iota >= static_cast<int>(c->groups.size()))
      throw ConfigError("shift-de: need 1 <= iota < g");
    if (!c->event_times.empty() && c->event_times.size() != c->groups.size())
      throw ConfigError("shift-de: event_times must have one entry per group");
    if (c->region_first_greater && c->groups.size() != 2)
      throw ConfigError("shift-de: region restriction needs exactly two groups");
    const std::string why = check_shift_de(*c);
    if (c->negative_control) {
      if (why.empty())
        throw ConfigError("shift-de: labelled as a negative control but the ordering hypothesis holds");
    } else if (!why.empty()) {
      throw ConfigError("shift-de: hypothesis violated: " + why);
    }
  } else if (auto* c = std::get_if<ShiftSaConfig>(&cfg.params)) {
    const std::string why = check_shift_sa(*c);
    if (!why.empty()) throw ConfigError("shift-sa: " + why);
  } else if (auto* c = std::get_if<SixVertexConfig>(&cfg.params)) {
    for (const auto& g : c->instances) {
      const std::string why = check_gal_instance(g);
      if (!why.empty()) throw ConfigError("sixvertex instance '" + g.name + "': hypothesis violated: " + why);
    }
  } else if (auto* c = std::get_if<OspLppConfig>(&cfg.params)) {
    if (c->n < 2) throw ConfigError("osp-lpp: N must be >= 2");
  }
  if (cfg.run.threads < 1) throw ConfigError("threads must be >= 1");
  if (cfg.run.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (cfg.run.permutations < 1) throw ConfigError("permutations must be >= 1");
  if (cfg.run.trials < 0) throw ConfigError("trials must be >= 0");
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("format must be json or csv");
}

SuiteParams default_params(const std::string& suite) {
  if (suite == "shift-de") {
    ShiftDeConfig c;
    c.groups = {{{0, 3, 1}}, {{0, 1, 3}}};
    c.event_times = {1.0, 2.0};
    return c;
  }
  if (suite == "shift-sa" || suite == "geodesic") {
    ShiftSaConfig c;
    c.geodesic = suite == "geodesic";
    if (c.geodesic) {
      c.rects = {{0, 6, 3}, {0, 3, 6}};
      c.shifted_a = {0, 1};
    } else {
      c.rects = {{0, 5, 2}, {1, 3, 4}, {2, 1, 6}};
      c.shifted_a = {0, 2, 3};
    }
    return c;
  }
  if (suite == "osp-lpp") return OspLppConfig{};
  if (suite == "asymptotics") return AsymptoticsConfig{};
  if (suite == "sixvertex") {
    SixVertexConfig c;
    c.instances.push_back({"single", {{3.5, 2.5, 1}}, {}});
    c.instances.push_back({"nested", {{2.5, 4.5, 1}}, {{4.5, 2.5, 3}}});
    c.limit = LimitSmokeConfig{};
    return c;
  }
  if (suite == "fg") return FgConfig{};
  if (suite == "coupling") return CouplingConfig{};
  throw ConfigError("unknown suite '" + suite + "'");
}

}  // namespace

std::string check_shift_de(const ShiftDeConfig& c) {
  std::string why = check_groups_ordered(c.groups, "original");
  if (!why.empty()) return why;
  return check_groups_ordered(shifted_groups(c), "shifted");
}

std::vector<std::vector<RectangleSpec>> shifted_groups(const ShiftDeConfig& c) {
  auto g = c.groups;
  for (std::size_t i = static_cast<std::size_t>(c.iota); i < g.size(); ++i)
    for (auto& r : g[i]) r.a += c.shift;
  return g;
}

std::string check_gal_instance(const GalInstance& g) {
  if (g.lower.empty()) return "need at least one shifted point (l >= 1)";
  int max_m = 0;
  for (const auto& p : g.lower) max_m = std::max(max_m, p.m);
  for (const auto& p : g.upper)
    if (p.m <= max_m) return "max m_i < min m'_i fails";
  std::vector<HeightPoint> all = g.lower;
  all.insert(all.end(), g.upper.begin(), g.upper.end());
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].x < all[i - 1].x) return "x coordinates must be weakly increasing";
    if (all[i].y > all[i - 1].y) return "y coordinates must be weakly decreasing";
  }
  return {};
}

std::string check_shift_sa(const ShiftSaConfig& c) {
  if (c.rects.empty()) return "need at least one rectangle";
  if (c.rects.size() != c.shifted_a.size()) return "shifted_A must have one entry per rectangle";
  const auto v = sa_regions(c);
  bool any = false;
  for (const auto& r : v) any = any || !r.empty();
  if (!any) return "every V_i is empty";
  return {};
}

ExperimentConfig parse_config(const std::string& json_text, const std::string& suite_hint) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.suite = j.value("suite", suite_hint);
  if (!suite_hint.empty() && cfg.suite != suite_hint)
    throw ConfigError("config is for suite '" + cfg.suite + "', requested '" + suite_hint + "'");
  static const char* const known[] = {"suite", "seed", "trials", "threads", "permutations", "energy_cap",
                                     "repetitions", "alpha", "out", "format", "params"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw ConfigError("unknown config key '" + key + "'");
  }
  try {
    get_if(j, "seed", cfg.run.seed);
    get_if(j, "trials", cfg.run.trials);
    get_if(j, "threads", cfg.run.threads);
    get_if(j, "permutations", cfg.run.permutations);
    get_if(j, "energy_cap", cfg.run.energy_cap);
    get_if(j, "repetitions", cfg.run.repetitions);
    get_if(j, "alpha", cfg.run.alpha);
    get_if(j, "out", cfg.out);
    get_if(j, "format", cfg.format);
    const json params = j.value("params", json::object());
    const std::string& s = cfg.suite;
    if (!j.contains("params")) cfg.params = default_params(s);
    else if (s == "shift-de") cfg.params = parse_shift_de(params);
    else if (s == "shift-sa" || s == "geodesic") {
      auto c = parse_shift_sa(params);
      if (s == "geodesic") c.geodesic = true;
      cfg.params = c;
    } else if (s == "osp-lpp") {
      OspLppConfig c;
      get_if(params, "N", c.n);
      cfg.params = c;
    } else if (s == "asymptotics") cfg.params = parse_asymptotics(params);
    else if (s == "sixvertex") cfg.params = parse_sixvertex(params);
    else if (s == "fg") cfg.params = parse_fg(params);
    else if (s == "coupling") cfg.params = parse_coupling(params);
    else throw ConfigError("unknown suite '" + s + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::string& suite_hint) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), suite_hint);
}

ExperimentConfig default_config(const std::string& suite) {
  ExperimentConfig cfg;
  cfg.suite = suite;
  cfg.params = default_params(suite);
  validate(cfg);
  return cfg;
}

}  // namespace swaplab
