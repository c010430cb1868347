#include "satdomain/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace satdomain {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class Section {
 public:
  Section(YAML::Node node, std::string path, const std::string& source)
      : node_(std::move(node)), path_(std::move(path)), source_(source) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) fail(node_, "expected a mapping");
  }

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (at && at.Mark().line >= 0) os << ':' << at.Mark().line + 1;
    os << ": " << (path_.empty() ? "" : path_ + ": ") << msg;
    throw ConfigError(os.str());
  }
  [[noreturn]] void fail_key(const std::string& key, const std::string& msg) const {
    fail(node_[key], key + ": " + msg);
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_ && node_.IsMap() && node_[key];
  }
  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return node_ ? node_[key] : YAML::Node();
  }

  template <class T>
  T scalar(const std::string& key, const T& fallback) {
    if (!has(key)) return fallback;
    return convert<T>(node_[key], key);
  }

  template <class T>
  T convert(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(n, key + ": expected a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, key + ": cannot parse '" + n.Scalar() + "'");
    }
  }

  Section child(const std::string& key, const std::string& name) {
    return Section(raw(key), path_.empty() ? name : path_ + "." + name, source_);
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) fail(kv.first, "unknown key '" + key + "'");
    }
  }

  const std::string& source() const { return source_; }
  const std::string& path() const { return path_; }

 private:
  YAML::Node node_;
  std::string path_;
  const std::string& source_;
  std::set<std::string> seen_;
};

ShellSpec parse_shell(const YAML::Node& n, Role role, const std::string& path, const std::string& source) {
  ShellSpec s;
  if (n.IsScalar()) {
    try {
      s = presets::shell(n.Scalar());
    } catch (const std::out_of_range& e) {
      Section(YAML::Node(), path, source).fail(n, e.what());
    }
  } else {
    Section sec(n, path, source);
    if (sec.has("preset")) {
      const auto name = sec.scalar<std::string>("preset", "");
      try {
        s = presets::shell(name);
      } catch (const std::out_of_range& e) {
        sec.fail_key("preset", e.what());
      }
    }
    s.name = sec.scalar<std::string>("name", s.name);
    s.altitude_km = sec.scalar<double>("altitude_km", s.altitude_km);
    s.inclination_deg = sec.scalar<double>("inclination_deg", s.inclination_deg);
    s.num_planes = sec.scalar<int>("planes", s.num_planes);
    s.sats_per_plane = sec.scalar<int>("sats_per_plane", s.sats_per_plane);
    s.eccentricity = sec.scalar<double>("eccentricity", s.eccentricity);
    if (sec.has("phasing_offset")) s.phasing_offset = sec.scalar<double>("phasing_offset", 0.0);
    sec.finish();
  }
  s.role = role;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    Section(YAML::Node(), path, source).fail(n, e.what());
  }
  return s;
}

std::vector<ShellSpec> parse_shells(Section& parent, const std::string& key, Role role) {
  std::vector<ShellSpec> out;
  if (!parent.has(key)) return out;
  const YAML::Node list = parent.raw(key);
  if (!list.IsSequence()) parent.fail(list, key + ": expected a list of shells");
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(parse_shell(list[i], role, parent.path() + "." + key + "[" + std::to_string(i) + "]", parent.source()));
  }
  return out;
}

std::vector<GroundStationSpec> parse_ground_stations(Section& parent) {
  std::vector<GroundStationSpec> out;
  if (!parent.has("ground_stations")) return out;
  const YAML::Node n = parent.raw("ground_stations");
  auto city = [&](const YAML::Node& at, const std::string& name) {
    for (const auto& c : presets::nine_cities()) {
      if (c.name == name) return GroundStationSpec{c.name, c.lat, c.lon};
    }
    parent.fail(at, "unknown ground-station preset '" + name + "'");
  };
  if (n.IsScalar()) {
    if (n.Scalar() != "nine-cities") parent.fail(n, "ground_stations: expected 'nine-cities' or a list");
    for (const auto& c : presets::nine_cities()) out.push_back({c.name, c.lat, c.lon});
    return out;
  }
  if (!n.IsSequence()) parent.fail(n, "ground_stations: expected 'nine-cities' or a list");
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i].IsScalar()) {
      out.push_back(city(n[i], n[i].Scalar()));
      continue;
    }
    Section sec(n[i], parent.path() + ".ground_stations[" + std::to_string(i) + "]", parent.source());
    GroundStationSpec g;
    g.name = sec.scalar<std::string>("name", "");
    g.lat = sec.scalar<double>("lat", 0.0);
    g.lon = sec.scalar<double>("lon", 0.0);
    sec.finish();
    if (g.name.empty()) sec.fail(n[i], "ground station needs a name");
    if (std::abs(g.lat) > 90.0 || std::abs(g.lon) > 180.0) sec.fail(n[i], "coordinates out of range");
    out.push_back(g);
  }
  return out;
}

template <class T>
std::vector<T> parse_list(Section& sec, const std::string& key, const std::vector<T>& fallback) {
  if (!sec.has(key)) return fallback;
  const YAML::Node n = sec.raw(key);
  std::vector<T> out;
  if (n.IsScalar()) {
    out.push_back(sec.convert<T>(n, key));
    return out;
  }
  if (!n.IsSequence()) sec.fail(n, key + ": expected a list");
  for (const auto& item : n) out.push_back(sec.convert<T>(item, key));
  return out;
}

template <class F>
auto guarded(Section& sec, const std::string& key, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    sec.fail_key(key, e.what());
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  auto bad = [](const std::string& m) { throw ConfigError("invalid scenario: " + m); };
  if (leo_shells.empty()) bad("at least one LEO shell is required");
  if (meo_shells.empty() && ground_stations.empty()) bad("at least one controller (MEO shell or ground station) is required");
  if (horizon_s && !(*horizon_s > 0.0)) bad("horizon_s must be > 0");
  if (!(step_s > 0.0)) bad("step_s must be > 0");
  if (horizon_s && *horizon_s < step_s) bad("horizon_s must be at least one step");
  if (lookahead_s < 0.0) bad("lookahead_s must be >= 0");
  if (traffic.gravity_g && !(*traffic.gravity_g > 0.0)) bad("traffic.gravity_g must be > 0");
  if (!(traffic.target_utilization > 0.0)) bad("traffic.target_utilization must be > 0");
  if (traffic.diurnal_floor < 0.0 || traffic.diurnal_floor > 1.0) bad("traffic.diurnal_floor must be in [0, 1]");
  if (!(traffic.sigma_km > 0.0) || traffic.background < 0.0) bad("traffic density parameters out of range");
  try {
    overhead.validate();
  } catch (const std::invalid_argument& e) {
    bad(std::string("overhead: ") + e.what());
  }
  if (!(greedy_cap_factor > 0.0)) bad("greedy_cap_factor must be > 0");
  if (!(queue_window_s > 0.0)) bad("queue_window_s must be > 0");
  if (kmeans_restarts < 1) bad("kmeans_restarts must be >= 1");
  if (strategies.empty()) bad("strategies must not be empty");
  if (gammas.empty()) bad("gammas must not be empty");
  for (double g : gammas) {
    if (!(g >= 0.0 && g <= 1.0)) bad("gamma " + fmt_double(g) + " outside [0, 1]");
  }
  if (seeds.empty()) bad("seeds must not be empty");
  if (threads < 1) bad("threads must be >= 1");
  if (!odc_controller.empty()) {
    bool found = false;
    for (const auto& g : ground_stations) found = found || g.name == odc_controller;
    if (!found) bad("odc_controller '" + odc_controller + "' is not a listed ground station");
  }
}

ScenarioConfig parse_config(const std::string& yaml_text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": YAML syntax error: " + e.msg);
  }
  ScenarioConfig c;
  Section top(root, "", source);
  c.name = top.scalar<std::string>("name", c.name);

  {
    Section s = top.child("constellation", "constellation");
    c.leo_shells = parse_shells(s, "leo", Role::Leo);
    c.meo_shells = parse_shells(s, "meo", Role::Meo);
    c.ground_stations = parse_ground_stations(s);
    s.finish();
  }
  {
    Section s = top.child("visibility", "visibility");
    if (s.has("meo_model")) {
      const auto m = s.scalar<std::string>("meo_model", "");
      c.fov.meo_model = guarded(s, "meo_model", [&] { return parse_meo_fov_model(m); });
    }
    c.fov.meo_threshold_deg = s.scalar<double>("meo_threshold_deg", c.fov.meo_threshold_deg);
    c.fov.gs_mask_deg = s.scalar<double>("gs_mask_deg", c.fov.gs_mask_deg);
    c.fov.earth_margin_km = s.scalar<double>("earth_margin_km", c.fov.earth_margin_km);
    s.finish();
  }
  {
    Section s = top.child("time", "time");
    if (s.has("horizon_s")) {
      const YAML::Node h = s.raw("horizon_s");
      if (h.IsScalar() && h.Scalar() == "leo_period") {
        c.horizon_s.reset();
      } else {
        c.horizon_s = s.convert<double>(h, "horizon_s");
      }
    }
    c.step_s = s.scalar<double>("step_s", c.step_s);
    c.lookahead_s = s.scalar<double>("lookahead_s", c.lookahead_s);
    s.finish();
  }
  {
    Section s = top.child("traffic", "traffic");
    auto& t = c.traffic;
    t.background = s.scalar<double>("background", t.background);
    t.sigma_km = s.scalar<double>("sigma_km", t.sigma_km);
    if (s.has("gravity_g")) {
      const YAML::Node g = s.raw("gravity_g");
      if (g.IsScalar() && g.Scalar() == "auto") {
        t.gravity_g.reset();
      } else {
        t.gravity_g = s.convert<double>(g, "gravity_g");
      }
    }
    t.target_utilization = s.scalar<double>("target_utilization", t.target_utilization);
    t.diurnal_floor = s.scalar<double>("diurnal_floor", t.diurnal_floor);
    t.exponent = s.scalar<double>("exponent", t.exponent);
    t.utc_offset_s = s.scalar<double>("utc_offset_s", t.utc_offset_s);
    s.finish();
  }
  {
    Section s = top.child("overhead", "overhead");
    auto& o = c.overhead;
    o.m_fl_bytes = s.scalar<double>("m_fl_bytes", o.m_fl_bytes);
    o.m_sync_bytes = s.scalar<double>("m_sync_bytes", o.m_sync_bytes);
    o.f_sync_hz = s.scalar<double>("f_sync_hz", o.f_sync_hz);
    o.capacity_unit = s.scalar<double>("capacity_unit", o.capacity_unit);
    o.gs_capacity = s.scalar<double>("gs_capacity", o.gs_capacity);
    o.meo_capacity = s.scalar<double>("meo_capacity", o.meo_capacity);
    o.tradeoff_lambda = s.scalar<double>("tradeoff_lambda", o.tradeoff_lambda);
    if (s.has("cpt_complexity")) {
      const auto v = s.scalar<std::string>("cpt_complexity", "");
      o.cpt_complexity = guarded(s, "cpt_complexity", [&] { return parse_complexity(v); });
    }
    o.alpha = s.scalar<double>("alpha", o.alpha);
    o.beta = s.scalar<double>("beta", o.beta);
    o.mig_unit_s = s.scalar<double>("mig_unit_s", o.mig_unit_s);
    {
      Section b = s.child("bandwidth", "bandwidth");
      o.bandwidth.isl = b.scalar<double>("isl", o.bandwidth.isl);
      o.bandwidth.gs_leo = b.scalar<double>("gs_leo", o.bandwidth.gs_leo);
      o.bandwidth.meo_leo = b.scalar<double>("meo_leo", o.bandwidth.meo_leo);
      o.bandwidth.controller = b.scalar<double>("controller", o.bandwidth.controller);
      b.finish();
    }
    {
      Section m = s.child("migration", "migration");
      auto& mp = o.migration;
      mp.flow_entry_bytes = m.scalar<double>("flow_entry_bytes", mp.flow_entry_bytes);
      mp.state_bandwidth = m.scalar<double>("state_bandwidth", mp.state_bandwidth);
      mp.ho_msg_bytes = m.scalar<double>("ho_msg_bytes", mp.ho_msg_bytes);
      mp.per_sat_processing_s = m.scalar<double>("per_sat_processing_s", mp.per_sat_processing_s);
      mp.mean_flow_lifetime_s = m.scalar<double>("mean_flow_lifetime_s", mp.mean_flow_lifetime_s);
      m.finish();
    }
    s.finish();
  }
  {
    Section s = top.child("partition", "partition");
    c.inherit = s.scalar<bool>("inherit", c.inherit);
    c.fine_tune = s.scalar<bool>("fine_tune", c.fine_tune);
    c.greedy_cap_factor = s.scalar<double>("greedy_cap_factor", c.greedy_cap_factor);
    c.odc_controller = s.scalar<std::string>("odc_controller", c.odc_controller);
    c.max_retries = s.scalar<int>("max_retries", c.max_retries);
    c.dense_limit = s.scalar<std::size_t>("dense_limit", c.dense_limit);
    c.kmeans_restarts = s.scalar<int>("kmeans_restarts", c.kmeans_restarts);
    s.finish();
  }
  {
    Section s = top.child("emulator", "emulator");
    c.queue_window_s = s.scalar<double>("queue_window_s", c.queue_window_s);
    s.finish();
  }
  {
    Section s = top.child("experiment", "experiment");
    if (s.has("strategies")) {
      c.strategies.clear();
      for (const auto& name : parse_list<std::string>(s, "strategies", {})) {
        c.strategies.push_back(guarded(s, "strategies", [&] { return parse_strategy(name); }));
      }
    }
    c.gammas = parse_list<double>(s, "gammas", c.gammas);
    c.seeds = parse_list<std::uint64_t>(s, "seeds", c.seeds);
    c.threads = s.scalar<int>("threads", c.threads);
    s.finish();
  }
  top.finish();
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string serialize_config(const ScenarioConfig& c) {
  YAML::Emitter out;
  auto num = [&](const char* key, double v) { out << YAML::Key << key << YAML::Value << fmt_double(v); };
  auto shells = [&](const char* key, const std::vector<ShellSpec>& list) {
    out << YAML::Key << key << YAML::Value << YAML::BeginSeq;
    for (const auto& s : list) {
      out << YAML::BeginMap;
      out << YAML::Key << "name" << YAML::Value << s.name;
      num("altitude_km", s.altitude_km);
      num("inclination_deg", s.inclination_deg);
      out << YAML::Key << "planes" << YAML::Value << s.num_planes;
      out << YAML::Key << "sats_per_plane" << YAML::Value << s.sats_per_plane;
      num("eccentricity", s.eccentricity);
      if (s.phasing_offset) num("phasing_offset", *s.phasing_offset);
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  };

  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << c.name;

  out << YAML::Key << "constellation" << YAML::Value << YAML::BeginMap;
  shells("leo", c.leo_shells);
  shells("meo", c.meo_shells);
  out << YAML::Key << "ground_stations" << YAML::Value << YAML::BeginSeq;
  for (const auto& g : c.ground_stations) {
    out << YAML::BeginMap << YAML::Key << "name" << YAML::Value << g.name;
    num("lat", g.lat);
    num("lon", g.lon);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "visibility" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "meo_model" << YAML::Value << std::string(meo_fov_model_name(c.fov.meo_model));
  num("meo_threshold_deg", c.fov.meo_threshold_deg);
  num("gs_mask_deg", c.fov.gs_mask_deg);
  num("earth_margin_km", c.fov.earth_margin_km);
  out << YAML::EndMap;

  out << YAML::Key << "time" << YAML::Value << YAML::BeginMap;
  if (c.horizon_s) {
    num("horizon_s", *c.horizon_s);
  } else {
    out << YAML::Key << "horizon_s" << YAML::Value << "leo_period";
  }
  num("step_s", c.step_s);
  num("lookahead_s", c.lookahead_s);
  out << YAML::EndMap;

  const auto& t = c.traffic;
  out << YAML::Key << "traffic" << YAML::Value << YAML::BeginMap;
  num("background", t.background);
  num("sigma_km", t.sigma_km);
  if (t.gravity_g) {
    num("gravity_g", *t.gravity_g);
  } else {
    out << YAML::Key << "gravity_g" << YAML::Value << "auto";
  }
  num("target_utilization", t.target_utilization);
  num("diurnal_floor", t.diurnal_floor);
  num("exponent", t.exponent);
  num("utc_offset_s", t.utc_offset_s);
  out << YAML::EndMap;

  const auto& o = c.overhead;
  out << YAML::Key << "overhead" << YAML::Value << YAML::BeginMap;
  num("m_fl_bytes", o.m_fl_bytes);
  num("m_sync_bytes", o.m_sync_bytes);
  num("f_sync_hz", o.f_sync_hz);
  num("capacity_unit", o.capacity_unit);
  num("gs_capacity", o.gs_capacity);
  num("meo_capacity", o.meo_capacity);
  num("tradeoff_lambda", o.tradeoff_lambda);
  out << YAML::Key << "cpt_complexity" << YAML::Value << std::string(complexity_name(o.cpt_complexity));
  num("alpha", o.alpha);
  num("beta", o.beta);
  num("mig_unit_s", o.mig_unit_s);
  out << YAML::Key << "bandwidth" << YAML::Value << YAML::BeginMap;
  num("isl", o.bandwidth.isl);
  num("gs_leo", o.bandwidth.gs_leo);
  num("meo_leo", o.bandwidth.meo_leo);
  num("controller", o.bandwidth.controller);
  out << YAML::EndMap;
  out << YAML::Key << "migration" << YAML::Value << YAML::BeginMap;
  num("flow_entry_bytes", o.migration.flow_entry_bytes);
  num("state_bandwidth", o.migration.state_bandwidth);
  num("ho_msg_bytes", o.migration.ho_msg_bytes);
  num("per_sat_processing_s", o.migration.per_sat_processing_s);
  num("mean_flow_lifetime_s", o.migration.mean_flow_lifetime_s);
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "partition" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "inherit" << YAML::Value << c.inherit;
  out << YAML::Key << "fine_tune" << YAML::Value << c.fine_tune;
  num("greedy_cap_factor", c.greedy_cap_factor);
  out << YAML::Key << "odc_controller" << YAML::Value << YAML::DoubleQuoted << c.odc_controller;
  out << YAML::Key << "max_retries" << YAML::Value << c.max_retries;
  out << YAML::Key << "dense_limit" << YAML::Value << c.dense_limit;
  out << YAML::Key << "kmeans_restarts" << YAML::Value << c.kmeans_restarts;
  out << YAML::EndMap;

  out << YAML::Key << "emulator" << YAML::Value << YAML::BeginMap;
  num("queue_window_s", c.queue_window_s);
  out << YAML::EndMap;

  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "strategies" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (Strategy s : c.strategies) out << std::string(strategy_name(s));
  out << YAML::EndSeq;
  out << YAML::Key << "gammas" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double g : c.gammas) out << fmt_double(g);
  out << YAML::EndSeq;
  out << YAML::Key << "seeds" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto s : c.seeds) out << s;
  out << YAML::EndSeq;
  out << YAML::Key << "threads" << YAML::Value << c.threads;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string config_hash(const ScenarioConfig& c) {
  ScenarioConfig key = c;
  key.threads = 1;  // execution setting, does not change results
  const std::string s = serialize_config(key);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ScenarioConfig desk_config() {
  ScenarioConfig c;
  c.name = "desk";
  c.leo_shells = {presets::shell("iridium")};
  c.meo_shells = {presets::shell("meo-10354")};
  for (const auto& city : presets::nine_cities()) {
    if (city.name == "New York" || city.name == "London" || city.name == "Tokyo") {
      c.ground_stations.push_back({city.name, city.lat, city.lon});
    }
  }
  c.odc_controller = "New York";
  c.strategies = {Strategy::Eunomia, Strategy::Odc, Strategy::Greedy};
  c.gammas = {0.25, 0.5, 0.75, 1.0};
  c.seeds = {1, 2, 3};
  return c;
}

}  // namespace satdomain
