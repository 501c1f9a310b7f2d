// swaplab command-line front end: verification suites and raw simulations.

#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "swaplab/clock_field.hpp"
#include "swaplab/config.hpp"
#include "swaplab/errors.hpp"
#include "swaplab/lpp.hpp"
#include "swaplab/osp.hpp"
#include "swaplab/report_io.hpp"
#include "swaplab/six_vertex.hpp"
#include "swaplab/suites.hpp"
#include "swaplab/tasep.hpp"

namespace {

using namespace swaplab;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<int> threads;
  std::optional<int> permutations;
  std::optional<int> repetitions;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_config) {
  if (with_config) cmd->add_option("--config", f.config, "JSON experiment configuration");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--trials", f.trials, "trials per sample (overrides config)");
  cmd->add_option("--threads", f.threads, "worker threads");
  cmd->add_option("--out", f.out, "output path (stdout when omitted)");
  cmd->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  if (with_config) {
    cmd->add_option("--permutations", f.permutations, "energy-test permutations");
    cmd->add_option("--repetitions", f.repetitions, "independent seeded repetitions");
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
  else write_text_file(out, text);
}

int run_verify(const std::string& suite, const CommonFlags& f) {
  ExperimentConfig cfg = f.config.empty() ? default_config(suite) : load_config(f.config, suite);
  if (f.seed) cfg.run.seed = *f.seed;
  if (f.trials) cfg.run.trials = *f.trials;
  if (f.threads) cfg.run.threads = *f.threads;
  if (f.permutations) cfg.run.permutations = *f.permutations;
  if (f.repetitions) cfg.run.repetitions = *f.repetitions;
  if (!f.out.empty()) cfg.out = f.out;
  cfg.format = f.format;
  if (cfg.run.threads < 1 || cfg.run.repetitions < 1 || cfg.run.permutations < 1 || cfg.run.trials < 0)
    throw ConfigError("threads, repetitions and permutations must be positive; trials non-negative");

  const SuiteResult result = run_suite(cfg);
  std::cout << emit_suite_result(result, cfg.out, cfg.format);
  for (const auto& r : result.reports)
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << '\n';
  std::cerr << suite << ": " << (result.pass ? "PASS" : "FAIL") << '\n';
  return result.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swaplab: colored TASEP / OSP / LPP simulation and verification"};
  app.require_subcommand(1);

  CommonFlags vf;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  add_common(verify, vf, true);

  auto* sim = app.add_subcommand("sim", "run one simulation and dump it");
  sim->require_subcommand(1);
  CommonFlags sf;

  auto* sim_tasep = sim->add_subcommand("tasep", "finite colored projection: swap log");
  std::int64_t ta = 0, tc = 1, tw = 20;
  double th = 5.0;
  sim_tasep->add_option("--A", ta, "base color A");
  sim_tasep->add_option("--C", tc, "particle count C")->check(CLI::PositiveNumber);
  sim_tasep->add_option("--horizon", th, "time horizon")->check(CLI::NonNegativeNumber);
  sim_tasep->add_option("--room", tw, "sites to the right of A in the window")->check(CLI::PositiveNumber);
  add_common(sim_tasep, sf, false);

  auto* sim_osp = sim->add_subcommand("osp", "oriented swap process: swap log and finishing times");
  int on = 6;
  sim_osp->add_option("--N", on, "number of sites")->check(CLI::Range(2, 100000));
  add_common(sim_osp, sf, false);

  auto* sim_lpp = sim->add_subcommand("lpp", "exponential LPP field, passage times and geodesic");
  int lb = 5, lc = 5;
  sim_lpp->add_option("--B", lb, "grid width")->check(CLI::Range(1, LppField::kMaxDim));
  sim_lpp->add_option("--C", lc, "grid height")->check(CLI::Range(1, LppField::kMaxDim));
  add_common(sim_lpp, sf, false);

  auto* sim_6v = sim->add_subcommand("sixvertex", "colored six-vertex heights H^m(x, y)");
  int vx = 10, vy = 10, vm = 1;
  double b1 = 0.6, b2 = 0.3;
  sim_6v->add_option("--X", vx, "columns")->check(CLI::PositiveNumber);
  sim_6v->add_option("--Y", vy, "rows")->check(CLI::PositiveNumber);
  sim_6v->add_option("--m", vm, "color threshold")->check(CLI::PositiveNumber);
  sim_6v->add_option("--b1", b1, "crossing probability b1");
  sim_6v->add_option("--b2", b2, "crossing probability b2");
  add_common(sim_6v, sf, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (verify->parsed()) return run_verify(suite, vf);

    const std::uint64_t seed = sf.seed.value_or(1);
    std::ostringstream os;
    os.precision(17);
    if (sim_tasep->parsed()) {
      ClockField field(seed, {ta - tc + 1, ta + tw});
      const TasepRun run = simulate_finite_colored(field, {ta, tc}, th);
      if (sf.format == "csv") {
        os << "time,site,stronger,weaker\n";
        for (const auto& e : run.events) os << e.time << ',' << e.site << ',' << e.stronger << ',' << e.weaker << '\n';
      } else {
        nlohmann::ordered_json j;
        j["A"] = ta;
        j["C"] = tc;
        j["window"] = {field.window().lo, field.window().hi};
        j["events"] = nlohmann::ordered_json::array();
        for (const auto& e : run.events) j["events"].push_back({e.time, e.site, e.stronger, e.weaker});
        os << j.dump(2) << '\n';
      }
    } else if (sim_osp->parsed()) {
      ClockField field(seed, {1, on});
      const OspTrajectory traj = simulate_osp(field, on, true);
      if (sf.format == "csv") {
        os << traj.events_csv();
      } else {
        nlohmann::ordered_json j;
        j["N"] = on;
        j["finishing_times"] = traj.finishing;
        j["last_swap_location"] = traj.last_swap_location;
        j["absorbing_time"] = traj.absorbing_time;
        j["events"] = nlohmann::ordered_json::array();
        for (const auto& e : traj.events) j["events"].push_back({e.time, e.edge});
        os << j.dump(2) << '\n';
      }
    } else if (sim_lpp->parsed()) {
      const LppField f = sample_field(seed, lb, lc);
      const Geodesic g = geodesic(f, {1, 1}, {lb, lc});
      if (sf.format == "csv") {
        os << f.to_csv() << '\n' << passage_table(f).to_csv() << '\n' << g.to_csv();
      } else {
        nlohmann::ordered_json j;
        j["B"] = lb;
        j["C"] = lc;
        j["weights"] = std::vector<double>(f.weights().begin(), f.weights().end());
        j["passage_time"] = passage_time(f, {1, 1}, {lb, lc});
        j["geodesic"] = nlohmann::ordered_json::array();
        for (const auto& p : g.path) j["geodesic"].push_back({p.b, p.c});
        os << j.dump(2) << '\n';
      }
    } else if (sim_6v->parsed()) {
      const SixVertexSample s = sample_six_vertex(seed, vx, vy, b1, b2);
      os << "x,y,H\n";
      for (int col = 0; col <= vx; ++col)
        for (int row = 0; row <= vy; ++row)
          os << col + 0.5 << ',' << row + 0.5 << ',' << height_6v(s, vm, col + 0.5, row + 0.5) << '\n';
    }
    emit(os.str(), sf.out);
    return kExitPass;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
