#include "satdomain/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace satdomain {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string Provenance::seed_list() const {
  std::string s;
  for (std::size_t i = 0; i < seeds.size(); ++i) s += (i ? "," : "") + std::to_string(seeds[i]);
  return s;
}

Provenance provenance_of(const ScenarioConfig& c) { return {config_hash(c), c.seeds}; }

namespace {

void csv_preamble(std::ostream& os, const Provenance& pv, const char* header) {
  os << "# config_hash=" << pv.config_hash << " seed=" << pv.seed_list() << '\n' << header << '\n';
}

std::string run_prefix(const RunResult& r) {
  return std::string(strategy_name(r.key.strategy)) + ',' + format_number(r.key.gamma) + ',' +
         std::to_string(r.key.seed);
}

nlohmann::json overhead_json(const OverheadReport& r) {
  std::ostringstream ss;
  write_report_json(ss, r);
  return nlohmann::json::parse(ss.str());
}

}  // namespace

void write_stats_csv(std::ostream& os, const std::vector<RunResult>& runs, const Provenance& pv) {
  csv_preamble(os, pv, kStatsHeader);
  for (const auto& r : runs) {
    for (const auto& s : r.slots) {
      if (!s.stats) continue;
      const EmulationStats& st = *s.stats;
      os << s.slot_index << ',' << run_prefix(r) << ',' << st.requests << ',' << st.dropped << ','
         << format_number(st.drop_rate()) << ',' << format_number(st.mean_response_s) << ','
         << format_number(st.p95_response_s) << ',' << format_number(st.sync_delay_mean_s) << ',' << st.bytes_flow()
         << ',' << st.bytes_sync() << ',' << st.bytes_ho() << '\n';
    }
  }
}

void write_summary_csv(std::ostream& os, const std::vector<RunResult>& runs, std::size_t num_leos,
                       const Provenance& pv) {
  csv_preamble(os, pv, kSummaryHeader);
  for (const auto& r : runs) {
    double duration = 0.0;
    std::size_t requests = 0, drops = 0;
    double w[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    for (const auto& s : r.slots) {
      duration += s.duration;
      if (s.stats) {
        requests += s.stats->requests;
        drops += s.stats->dropped;
      }
      if (s.report) {
        const OverheadReport& o = *s.report;
        const double v[8] = {o.w_flow, o.w_sync_in, o.w_sync_out, o.w_mig, o.w_cpt_intra, o.w_cpt_inter, o.w_ctl,
                             o.objective};
        for (int i = 0; i < 8; ++i) w[i] += v[i];
      }
    }
    const double rate = requests ? static_cast<double>(drops) / static_cast<double>(requests) : 0.0;
    os << run_prefix(r) << ',' << num_leos << ',' << r.slots.size() << ',' << format_number(duration) << ','
       << requests << ',' << drops << ',' << format_number(rate);
    for (double x : w) os << ',' << format_number(x);
    os << ',' << r.migrations() << ',' << r.violations() << '\n';
  }
}

void write_assignments_csv(std::ostream& os, const std::vector<RunResult>& runs, const Provenance& pv) {
  csv_preamble(os, pv, "slot,strategy,gamma,seed,leo,controller");
  for (const auto& r : runs) {
    for (const auto& s : r.slots) {
      for (std::size_t i = 0; i < s.assignment.num_leos(); ++i) {
        const NodeId k = s.assignment.controller_of[i];
        os << s.slot_index << ',' << run_prefix(r) << ',' << i << ',';
        if (k == kUnassigned) {
          os << "-1";
        } else {
          os << k;
        }
        os << '\n';
      }
    }
  }
}

void write_diagnostics_csv(std::ostream& os, const std::vector<RunResult>& runs, const Provenance& pv) {
  csv_preamble(os, pv,
               "slot,strategy,gamma,seed,start_s,duration_s,domains,regions,inherited_regions,clustered_regions,"
               "largest_region,spectral_retries,unresolved_conflicts,fallback_leos,fine_tune_moves,migrations,"
               "max_hops,mean_hops");
  for (const auto& r : runs) {
    const DomainAssignment* prev = nullptr;
    for (const auto& s : r.slots) {
      const PartitionDiagnostics& d = s.diagnostics;
      os << s.slot_index << ',' << run_prefix(r) << ',' << format_number(s.start) << ','
         << format_number(s.duration) << ',' << s.assignment.active_controllers().size() << ',' << d.regions << ','
         << d.inherited_regions << ',' << d.clustered_regions << ',' << d.largest_region << ','
         << d.spectral_retries << ',' << d.unresolved_conflicts << ',' << d.fallback_leos << ','
         << d.fine_tune.moves << ',' << (prev ? s.assignment.migrations_from(*prev) : 0) << ','
         << (s.report ? s.report->max_hops : 0) << ',' << format_number(s.report ? s.report->mean_hops : 0.0)
         << '\n';
      prev = &s.assignment;
    }
  }
}

void write_overhead_json(std::ostream& os, const std::vector<RunResult>& runs, const Provenance& pv) {
  nlohmann::json j;
  j["config_hash"] = pv.config_hash;
  j["seeds"] = pv.seeds;
  j["runs"] = nlohmann::json::array();
  for (const auto& r : runs) {
    nlohmann::json run;
    run["strategy"] = strategy_name(r.key.strategy);
    run["gamma"] = r.key.gamma;
    run["seed"] = r.key.seed;
    run["slots"] = nlohmann::json::array();
    for (const auto& s : r.slots) {
      nlohmann::json slot = s.report ? overhead_json(*s.report) : nlohmann::json{{"slot", s.slot_index}};
      slot["start_s"] = s.start;
      slot["duration_s"] = s.duration;
      if (s.stats) {
        slot["measured_W_FLOW"] = s.stats->measured_w_flow;
        slot["requests"] = s.stats->requests;
        slot["dropped"] = s.stats->dropped;
        slot["mean_response_s"] = s.stats->mean_response_s;
        slot["trace_hash"] = s.stats->trace_hash;
      }
      run["slots"].push_back(std::move(slot));
    }
    j["runs"].push_back(std::move(run));
  }
  os << j.dump(2) << '\n';
}

void write_constraints_json(std::ostream& os, const std::vector<RunResult>& runs, const Provenance& pv) {
  nlohmann::json j;
  j["config_hash"] = pv.config_hash;
  j["seeds"] = pv.seeds;
  std::size_t total = 0;
  j["runs"] = nlohmann::json::array();
  for (const auto& r : runs) {
    nlohmann::json run;
    run["strategy"] = strategy_name(r.key.strategy);
    run["gamma"] = r.key.gamma;
    run["seed"] = r.key.seed;
    run["fov_waived"] = r.key.strategy == Strategy::Odc;
    run["violations"] = nlohmann::json::array();
    for (const auto& s : r.slots) {
      for (const auto& v : s.constraints.violations) {
        run["violations"].push_back(
            {{"slot", s.slot_index}, {"family", constraint_name(v.family)}, {"detail", v.detail}});
      }
    }
    total += run["violations"].size();
    run["slots"] = r.slots.size();
    j["runs"].push_back(std::move(run));
  }
  j["total_violations"] = total;
  j["ok"] = total == 0;
  os << j.dump(2) << '\n';
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ReportError(where + ": bad number '" + s + "'");
  return v;
}

struct Accumulator {
  std::vector<double> values;
  void add(double v) { values.push_back(v); }
  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
  }
  double stddev() const {
    if (values.size() < 2) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
  }
};

// (strategy, gamma, num_leos, seed)
using RunId = std::tuple<std::string, double, std::size_t, std::uint64_t>;
using GroupId = std::tuple<std::string, double, std::size_t, std::string>;

std::string series_csv(const std::vector<SeriesPoint>& pts, const std::set<std::string>& metrics) {
  std::ostringstream os;
  os << "strategy,gamma,num_leos,metric,n_seeds,mean,stddev\n";
  for (const auto& p : pts) {
    if (!metrics.count(p.metric)) continue;
    os << p.strategy << ',' << format_number(p.gamma) << ',' << p.num_leos << ',' << p.metric << ',' << p.n << ','
       << format_number(p.mean) << ',' << format_number(p.stddev) << '\n';
  }
  return os.str();
}

std::string comparison_table(const std::vector<SeriesPoint>& pts, const std::vector<std::string>& metrics) {
  std::ostringstream os;
  os << "strategy  gamma  leos";
  for (const auto& m : metrics) os << "  " << m;
  os << '\n';
  std::map<std::tuple<std::string, double, std::size_t>, std::map<std::string, const SeriesPoint*>> rows;
  for (const auto& p : pts) rows[{p.strategy, p.gamma, p.num_leos}][p.metric] = &p;
  for (const auto& [key, cells] : rows) {
    os << std::get<0>(key) << "  " << format_number(std::get<1>(key)) << "  " << std::get<2>(key);
    for (const auto& m : metrics) {
      auto it = cells.find(m);
      os << "  ";
      if (it == cells.end()) {
        os << '-';
      } else {
        os << format_number(it->second->mean) << "+-" << format_number(it->second->stddev);
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace

ReportBundle build_report(const std::vector<std::pair<std::string, std::string>>& inputs) {
  if (inputs.empty()) throw ReportError("no input files");
  ReportBundle b;
  std::string header;
  std::set<std::string> hashes;
  // Per-run accumulated sums; metric name -> value.
  std::map<RunId, std::map<std::string, double>> runs;
  std::set<std::tuple<RunId, long long>> seen_rows;

  for (const auto& [name, text] : inputs) {
    std::istringstream in(text);
    std::string line;
    std::string file_header;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line[0] == '#') {
        const auto pos = line.find("config_hash=");
        if (pos != std::string::npos) hashes.insert(line.substr(pos + 12, line.find(' ', pos) - pos - 12));
        continue;
      }
      const std::string where = name + ":" + std::to_string(lineno);
      if (file_header.empty()) {
        file_header = line;
        if (line != kStatsHeader && line != kSummaryHeader) throw ReportError(where + ": unrecognized CSV schema");
        if (header.empty()) header = line;
        if (line != header) throw ReportError(where + ": mixed schemas across inputs");
        continue;
      }
      const auto f = split_csv(line);
      const auto cols = split_csv(header);
      if (f.size() != cols.size()) throw ReportError(where + ": expected " + std::to_string(cols.size()) + " fields");
      if (header == kStatsHeader) {
        const RunId id{f[1], to_double(f[2], where), 0, static_cast<std::uint64_t>(to_double(f[3], where))};
        if (!seen_rows.insert({id, static_cast<long long>(to_double(f[0], where))}).second) {
          throw ReportError(where + ": duplicate row for slot " + f[0]);
        }
        auto& acc = runs[id];
        const double requests = to_double(f[4], where);
        const double drops = to_double(f[5], where);
        acc["requests"] += requests;
        acc["drops"] += drops;
        acc["resp_weighted"] += to_double(f[7], where) * (requests - drops);
        acc["p95_sum"] += to_double(f[8], where);
        acc["sync_sum"] += to_double(f[9], where);
        acc["slots"] += 1.0;
        acc["bytes_flow"] += to_double(f[10], where);
        acc["bytes_sync"] += to_double(f[11], where);
        acc["bytes_ho"] += to_double(f[12], where);
      } else {
        const RunId id{f[0], to_double(f[1], where), static_cast<std::size_t>(to_double(f[3], where)),
                       static_cast<std::uint64_t>(to_double(f[2], where))};
        if (!seen_rows.insert({id, -1}).second) throw ReportError(where + ": duplicate run row");
        auto& acc = runs[id];
        for (std::size_t c = 4; c < cols.size(); ++c) acc[cols[c]] = to_double(f[c], where);
      }
    }
    if (file_header.empty()) throw ReportError(name + ": missing CSV header");
  }

  std::map<GroupId, Accumulator> groups;
  const bool stats = header == kStatsHeader;
  b.schema = stats ? "stats" : "summary";
  for (const auto& [id, acc] : runs) {
    const auto& [strategy, gamma, leos, seed] = id;
    auto add = [&, strategy = strategy, gamma = gamma, leos = leos](const std::string& metric, double v) {
      groups[{strategy, gamma, leos, metric}].add(v);
    };
    const double requests = acc.at("requests");
    const double drops = acc.at("drops");
    add("drop_rate", requests > 0.0 ? drops / requests : 0.0);
    add("requests", requests);
    add("drops", drops);
    if (stats) {
      const double done = requests - drops;
      add("mean_resp_s", done > 0.0 ? acc.at("resp_weighted") / done : 0.0);
      add("p95_resp_s", acc.at("p95_sum") / acc.at("slots"));
      add("sync_delay_s", acc.at("sync_sum") / acc.at("slots"));
      add("bytes_flow", acc.at("bytes_flow"));
      add("bytes_sync", acc.at("bytes_sync"));
      add("bytes_ho", acc.at("bytes_ho"));
    } else {
      for (const char* m : {"w_flow", "w_sync_in", "w_sync_out", "w_mig", "w_cpt_intra", "w_cpt_inter", "w_ctl",
                            "objective", "migrations", "violations"}) {
        add(m, acc.at(m));
      }
    }
  }
  for (const auto& [g, acc] : groups) {
    b.points.push_back({std::get<0>(g), std::get<1>(g), std::get<2>(g), std::get<3>(g), acc.values.size(), acc.mean(),
                        acc.stddev()});
  }

  std::string prov = "# config_hash=";
  for (auto it = hashes.begin(); it != hashes.end(); ++it) prov += (it == hashes.begin() ? "" : ",") + *it;
  prov += '\n';
  auto emit = [&](const std::string& file, const std::set<std::string>& metrics) {
    b.files[file] = prov + series_csv(b.points, metrics);
  };
  emit("drop_rate_vs_gamma.csv", {"drop_rate"});
  emit("totals.csv", {"requests", "drops"});
  if (stats) {
    emit("response_delay_vs_gamma.csv", {"mean_resp_s", "p95_resp_s"});
    emit("sync_delay_vs_gamma.csv", {"sync_delay_s"});
    emit("control_bytes_vs_gamma.csv", {"bytes_flow", "bytes_sync", "bytes_ho"});
    b.files["comparison.txt"] =
        comparison_table(b.points, {"drop_rate", "mean_resp_s", "p95_resp_s", "sync_delay_s", "bytes_flow"});
  } else {
    emit("overhead_vs_gamma.csv",
         {"w_flow", "w_sync_in", "w_sync_out", "w_mig", "w_cpt_intra", "w_cpt_inter", "w_ctl", "objective"});
    emit("overhead_vs_size.csv", {"w_ctl", "objective"});
    emit("migrations.csv", {"migrations", "violations"});
    b.files["comparison.txt"] = comparison_table(b.points, {"w_ctl", "objective", "drop_rate", "migrations"});
  }
  return b;
}

}  // namespace satdomain
