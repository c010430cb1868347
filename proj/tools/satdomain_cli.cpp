#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "satdomain/report.hpp"

namespace fs = std::filesystem;
using namespace satdomain;

namespace {

constexpr const char* kConfigEnv = "SATDOMAIN_CONFIG";

struct RunFlags {
  std::string config;
  std::string out_dir = "out";
  std::vector<std::uint64_t> seeds;
  std::string strategies;
  std::vector<double> gammas;
  std::string slots;
  int threads = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, std::string("scenario YAML; default $") + kConfigEnv + " or the built-in desk scenario");
  cmd->add_option("--out-dir", f.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", f.seeds, "seed(s), overriding the config")->delimiter(',');
  cmd->add_option("--strategies", f.strategies, "comma-separated: eunomia,odc,greedy");
  cmd->add_option("--gamma", f.gammas, "traffic scale(s) in [0, 1]")->delimiter(',');
  cmd->add_option("--slots", f.slots, "N (first N slots) or a:b");
  cmd->add_option("--threads", f.threads, "parallel runs");
}

ScenarioConfig resolve_config(const RunFlags& f) {
  std::string path = f.config;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv)) path = env;
  }
  ScenarioConfig c = path.empty() ? desk_config() : load_config(path);
  if (!f.seeds.empty()) c.seeds = f.seeds;
  if (!f.gammas.empty()) c.gammas = f.gammas;
  if (!f.strategies.empty()) {
    c.strategies.clear();
    std::stringstream ss(f.strategies);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        c.strategies.push_back(parse_strategy(tok));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--strategies: ") + e.what());
      }
    }
  }
  if (f.threads > 0) c.threads = f.threads;
  c.validate();
  return c;
}

template <class Fn>
void write_file(const fs::path& p, Fn&& fn) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  fn(os);
}

int run_command(const RunFlags& f, bool emulate) {
  const ScenarioConfig c = resolve_config(f);
  RunOptions opt;
  if (!f.slots.empty()) opt.slots = parse_slot_range(f.slots);
  opt.emulate = emulate;
  opt.threads = c.threads;

  const Scenario sc(c);
  std::cerr << "scenario '" << c.name << "': " << sc.constellation().num_leos() << " LEOs, "
            << sc.constellation().controller_ids().size() << " controllers, " << sc.num_slots() << " slots over "
            << format_number(sc.horizon()) << " s, G=" << format_number(sc.gravity_g()) << '\n';

  const auto runs = run_scenario(sc, expand_runs(c), opt);
  const Provenance pv = provenance_of(c);
  const fs::path out(f.out_dir);
  fs::create_directories(out);
  write_file(out / "config.yaml", [&](std::ostream& os) {
    os << "# config_hash=" << pv.config_hash << " seed=" << pv.seed_list() << '\n' << serialize_config(c);
  });
  write_file(out / "assignments.csv", [&](std::ostream& os) { write_assignments_csv(os, runs, pv); });
  write_file(out / "constraints.json", [&](std::ostream& os) { write_constraints_json(os, runs, pv); });
  write_file(out / "overhead.json", [&](std::ostream& os) { write_overhead_json(os, runs, pv); });
  write_file(out / "diagnostics.csv", [&](std::ostream& os) { write_diagnostics_csv(os, runs, pv); });
  write_file(out / "summary.csv",
             [&](std::ostream& os) { write_summary_csv(os, runs, sc.constellation().num_leos(), pv); });
  if (emulate) write_file(out / "stats.csv", [&](std::ostream& os) { write_stats_csv(os, runs, pv); });

  std::size_t violations = 0;
  for (const auto& r : runs) {
    double secs = 0.0;
    for (const auto& s : r.slots) secs += s.partition_seconds;
    violations += r.violations();
    std::cerr << strategy_name(r.key.strategy) << " gamma=" << format_number(r.key.gamma) << " seed=" << r.key.seed
              << ": " << r.slots.size() << " slots, " << r.violations() << " violations, " << r.migrations()
              << " migrations, partition " << format_number(std::round(secs * 1e3) / 1e3) << " s\n";
  }
  if (violations) {
    std::cerr << "constraint violations: " << violations << " (see constraints.json)\n";
    return 2;
  }
  return 0;
}

int report_command(const std::vector<std::string>& inputs, const std::string& out_dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& p : inputs) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p);
    std::ostringstream ss;
    ss << in.rdbuf();
    files.push_back({p, ss.str()});
  }
  const ReportBundle b = build_report(files);
  const fs::path out(out_dir);
  fs::create_directories(out);
  for (const auto& [name, text] : b.files) {
    write_file(out / name, [&](std::ostream& os) { os << text; });
  }
  std::cout << b.files.at("comparison.txt");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Movement-aware domain partitioning for hierarchical satellite networks"};
  app.require_subcommand(1);

  RunFlags part_flags, emu_flags;
  auto* part = app.add_subcommand("partition", "run partitioners only; write assignments and constraint report");
  add_run_flags(part, part_flags);
  auto* emu = app.add_subcommand("emulate", "partition, evaluate overheads and emulate the control plane");
  add_run_flags(emu, emu_flags);

  std::vector<std::string> report_inputs;
  std::string report_out = "report";
  auto* rep = app.add_subcommand("report", "aggregate stats or summary CSVs across seeds");
  rep->add_option("inputs", report_inputs, "stats.csv or summary.csv files")->required()->check(CLI::ExistingFile);
  rep->add_option("--out-dir", report_out, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (part->parsed()) return run_command(part_flags, false);
    if (emu->parsed()) return run_command(emu_flags, true);
    if (rep->parsed()) return report_command(report_inputs, report_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
