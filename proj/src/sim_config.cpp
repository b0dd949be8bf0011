#include "kerrgauge/sim_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kerrgauge/errors.hpp"

namespace kerrgauge {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': not a number: '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("'" + key + "': trailing characters in '" + text + "'");
  return value;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("'" + key + "': not a non-negative integer: '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': integer out of range: '" + text + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("'" + key + "': expected true or false, got '" + text + "'");
}

std::vector<ObservableKind> parse_observables(const std::string& text) {
  std::vector<ObservableKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto name = trim(item);
    if (!name.empty()) out.push_back(parse_observable(name));
  }
  return out;
}

void apply(SimConfig& c, const std::string& key, const std::string& value) {
  if (key == "alpha0") {
    std::istringstream in(value);
    std::string re;
    std::string im;
    std::string extra;
    in >> re >> im;
    if (re.empty() || im.empty() || (in >> extra)) {
      throw ConfigError("'alpha0': expected two reals '<re> <im>', got '" + value + "'");
    }
    c.alpha0 = {parse_double(key, re), parse_double(key, im)};
  } else if (key == "gauge") {
    c.gauge = GaugeSpec::parse(value);
  } else if (key == "n_traj") {
    c.n_traj = parse_uint(key, value);
  } else if (key == "dt") {
    c.dt = parse_double(key, value);
  } else if (key == "t_max") {
    c.t_max = parse_double(key, value);
  } else if (key == "n_record") {
    c.n_record = parse_uint(key, value);
  } else if (key == "master_seed") {
    c.master_seed = parse_uint(key, value);
  } else if (key == "guard_cos_threshold") {
    c.guard_cos_threshold = parse_double(key, value);
  } else if (key == "discard_policy") {
    c.discard_policy = parse_discard_policy(value);
  } else if (key == "observables") {
    c.observables = parse_observables(value);
  } else if (key == "with_oracle") {
    c.with_oracle = parse_bool(key, value);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

}  // namespace

std::string_view to_string(DiscardPolicy policy) {
  return policy == DiscardPolicy::FreezeAndFlag ? "freeze_and_flag" : "drop_and_renormalize";
}

DiscardPolicy parse_discard_policy(std::string_view text) {
  if (text == "freeze_and_flag") return DiscardPolicy::FreezeAndFlag;
  if (text == "drop_and_renormalize") return DiscardPolicy::DropAndRenormalize;
  throw ConfigError("unknown discard_policy '" + std::string(text) + "'");
}

void SimConfig::validate() const { to_run_spec().validate(); }

RunSpec SimConfig::to_run_spec(unsigned threads) const {
  if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
  if (n_record == 0) throw ConfigError("n_record must be positive");
  RunSpec spec;
  spec.alpha0 = alpha0;
  spec.gauge = gauge;
  spec.integrator = IntegratorConfig::uniform(dt, t_max, n_record);
  spec.ensemble.n_traj = n_traj;
  spec.ensemble.master_seed = master_seed;
  spec.ensemble.guard_cos_threshold = guard_cos_threshold;
  spec.ensemble.discard_policy = discard_policy;
  spec.ensemble.threads = threads;
  spec.observables = observables;
  return spec;
}

SimConfig parse_config(const std::string& text) {
  SimConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SimConfig& c) {
  std::string observables;
  for (std::size_t i = 0; i < c.observables.size(); ++i) {
    if (i > 0) observables += ',';
    observables += to_string(c.observables[i]);
  }
  std::ostringstream out;
  out << "alpha0 = " << format_double(c.alpha0.real()) << ' ' << format_double(c.alpha0.imag())
      << '\n'
      << "gauge = " << c.gauge.describe() << '\n'
      << "n_traj = " << c.n_traj << '\n'
      << "dt = " << format_double(c.dt) << '\n'
      << "t_max = " << format_double(c.t_max) << '\n'
      << "n_record = " << c.n_record << '\n'
      << "master_seed = " << c.master_seed << '\n'
      << "guard_cos_threshold = " << format_double(c.guard_cos_threshold) << '\n'
      << "discard_policy = " << to_string(c.discard_policy) << '\n'
      << "observables = " << observables << '\n'
      << "with_oracle = " << (c.with_oracle ? "true" : "false") << '\n';
  return out.str();
}

nlohmann::json config_to_json(const SimConfig& c) {
  nlohmann::json obs = nlohmann::json::array();
  for (auto k : c.observables) obs.push_back(std::string(to_string(k)));
  return {{"alpha0", {c.alpha0.real(), c.alpha0.imag()}},
          {"gauge", c.gauge.describe()},
          {"n_traj", c.n_traj},
          {"dt", c.dt},
          {"t_max", c.t_max},
          {"n_record", c.n_record},
          {"master_seed", c.master_seed},
          {"guard_cos_threshold", c.guard_cos_threshold},
          {"discard_policy", std::string(to_string(c.discard_policy))},
          {"observables", obs},
          {"with_oracle", c.with_oracle}};
}

SimConfig config_from_json(const nlohmann::json& j) {
  try {
    SimConfig c;
    const auto& a = j.at("alpha0");
    c.alpha0 = {a.at(0).get<double>(), a.at(1).get<double>()};
    c.gauge = GaugeSpec::parse(j.at("gauge").get<std::string>());
    c.n_traj = j.at("n_traj").get<std::uint64_t>();
    c.dt = j.at("dt").get<double>();
    c.t_max = j.at("t_max").get<double>();
    c.n_record = j.at("n_record").get<std::uint64_t>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.guard_cos_threshold = j.at("guard_cos_threshold").get<double>();
    c.discard_policy = parse_discard_policy(j.at("discard_policy").get<std::string>());
    c.observables.clear();
    for (const auto& o : j.at("observables")) c.observables.push_back(parse_observable(o.get<std::string>()));
    c.with_oracle = j.at("with_oracle").get<bool>();
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config object: ") + e.what());
  }
}

}  // namespace kerrgauge
