#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "satdomain/scenario.hpp"

namespace satdomain {

/// Embedded as a leading comment (CSV) or top-level fields (JSON) in every output file.
struct Provenance {
  std::string config_hash;
  std::vector<std::uint64_t> seeds;

  std::string seed_list() const;
};

Provenance provenance_of(const ScenarioConfig& c);

/// Shortest round-trip decimal form.
std::string format_number(double v);

inline constexpr const char* kStatsHeader =
    "slot,strategy,gamma,seed,requests,drops,drop_rate,mean_resp_s,p95_resp_s,sync_delay_s,bytes_flow,bytes_sync,"
    "bytes_ho";
inline constexpr const char* kSummaryHeader =
    "strategy,gamma,seed,num_leos,slots,duration_s,requests,drops,drop_rate,w_flow,w_sync_in,w_sync_out,w_mig,"
    "w_cpt_intra,w_cpt_inter,w_ctl,objective,migrations,violations";

/// One row per (run, slot) with emulation statistics.
void write_stats_csv(std::ostream& os, const std::vector<RunResult>& runs, const Provenance& pv);
/// One row per run; counts and overhead terms are sums over its slots.
void write_summary_csv(std::ostream& os, const std::vector<RunResult>& runs, std::size_t num_leos,
                       const Provenance& pv);
void write_assignments_csv(std::ostream& os, const std::vector<RunResult>& runs, const Provenance& pv);
void write_diagnostics_csv(std::ostream& os, const std::vector<RunResult>& runs, const Provenance& pv);
void write_overhead_json(std::ostream& os, const std::vector<RunResult>& runs, const Provenance& pv);
void write_constraints_json(std::ostream& os, const std::vector<RunResult>& runs, const Provenance& pv);

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Aggregated series: mean and sample standard deviation across seeds.
struct SeriesPoint {
  std::string strategy;
  double gamma = 0.0;
  std::size_t num_leos = 0;  // summary inputs only
  std::string metric;
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct ReportBundle {
  std::string schema;                      // "stats" or "summary"
  std::map<std::string, std::string> files;  // output name -> contents
  std::vector<SeriesPoint> points;
};

/// Aggregates stats or summary CSVs (one schema for all inputs) across seeds into
/// long-format plot-data files plus a comparison table.
ReportBundle build_report(const std::vector<std::pair<std::string, std::string>>& inputs);

}  // namespace satdomain
