#include "cavitybec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cavitybec {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ValidationError(key + ": '" + v + "' is not a number");
  }
  if (used != v.size() || !std::isfinite(x)) throw ValidationError(key + ": '" + v + "' is not a number");
  return x;
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 9e15) throw ValidationError(key + ": '" + v + "' is not an integer");
  return static_cast<std::int64_t>(x);
}

double positive(const std::string& key, double x) {
  if (!(x > 0.0)) throw ValidationError(key + " must be > 0");
  return x;
}

std::vector<std::int64_t> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<std::int64_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(key, trim(item)));
  if (out.empty() || out.size() > 3) throw ValidationError(key + " needs 1 to 3 comma-separated integers");
  for (auto x : out)
    if (x < 1) throw ValidationError(key + " entries must be >= 1");
  return out;
}

void apply(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "L1" || key == "L2" || key == "L3") {
    c.L[static_cast<std::size_t>(key[1] - '1')] = positive(key, parse_double(key, v));
  } else if (key == "bc") {
    try {
      c.bc = parse_boundary(v);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  } else if (key == "m") {
    c.m = positive(key, parse_double(key, v));
  } else if (key == "Q") {
    c.Q = positive(key, parse_double(key, v));
  } else if (key == "engine") {
    if (v == "exact") c.engine = EngineChoice::Exact;
    else if (v == "asymptotic") c.engine = EngineChoice::Asymptotic;
    else if (v == "both") c.engine = EngineChoice::Both;
    else throw ValidationError("engine must be exact, asymptotic or both");
  } else if (key == "tmin") {
    c.t_min = positive(key, parse_double(key, v));
  } else if (key == "tmax") {
    c.t_max = positive(key, parse_double(key, v));
  } else if (key == "points") {
    const auto n = parse_int(key, v);
    if (n < 2 || n > 1'000'000) throw ValidationError("points must be in [2, 1e6]");
    c.points = static_cast<int>(n);
  } else if (key == "scale") {
    if (v == "linear") c.scale = SweepScale::Linear;
    else if (v == "log") c.scale = SweepScale::Log;
    else throw ValidationError("scale must be linear or log");
  } else if (key == "out") {
    c.out = v;
  } else if (key == "format") {
    if (v == "csv") c.format = OutputFormat::Csv;
    else if (v == "json") c.format = OutputFormat::Json;
    else if (v == "table") c.format = OutputFormat::Table;
    else throw ValidationError("format must be csv, json or table");
  } else if (key == "a") {
    c.a = parse_int_list(key, v);
  } else if (key == "epsilon") {
    c.epsilon = parse_double(key, v);
    if (c.epsilon < 0.0) throw ValidationError("epsilon must be >= 0");
  } else if (key == "epsilon-max") {
    c.epsilon_max = parse_int(key, v);
    if (c.epsilon_max < 1) throw ValidationError("epsilon-max must be >= 1");
  } else if (key == "budget") {
    c.budget = static_cast<std::uint64_t>(positive(key, static_cast<double>(parse_int(key, v))));
  } else if (key == "cutoff") {
    c.cutoff = parse_double(key, v);
    if (c.cutoff < 30.0) throw ValidationError("cutoff must be >= 30");
  } else if (key == "dominance") {
    c.dominance = positive(key, parse_double(key, v));
  } else if (key == "q-tilde") {
    c.q_tilde = parse_double(key, v);
    if (!(c.q_tilde > 1.0)) throw ValidationError("q-tilde must be > 1");
  } else if (key == "grid") {
    const auto n = parse_int(key, v);
    if (n < 2 || n > 1000) throw ValidationError("grid must be in [2, 1000]");
    c.grid = static_cast<int>(n);
  } else if (key == "ratio-max") {
    c.ratio_max = parse_double(key, v);
    if (!(c.ratio_max > 1.0)) throw ValidationError("ratio-max must be > 1");
  } else {
    throw ValidationError("unknown key '" + key + "'");
  }
}

}  // namespace

std::string_view to_string(EngineChoice e) {
  switch (e) {
    case EngineChoice::Exact: return "exact";
    case EngineChoice::Asymptotic: return "asymptotic";
    case EngineChoice::Both: return "both";
  }
  return "?";
}

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Table: return "table";
  }
  return "?";
}

std::string_view to_string(SweepScale s) { return s == SweepScale::Log ? "log" : "linear"; }

OutputFormat RunConfig::output_format() const {
  if (format) return *format;
  const bool report = subcommand == "tc" || subcommand == "count" || subcommand == "classify";
  return report ? OutputFormat::Table : OutputFormat::Csv;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "L1",     "L2",      "L3",     "bc",     "m",           "Q",      "engine",
      "tmin",   "tmax",    "points", "scale",  "out",         "format", "a",
      "epsilon", "epsilon-max", "budget", "cutoff", "dominance", "q-tilde", "grid",
      "ratio-max"};
  return keys;
}

std::vector<std::string> preset_names() {
  return {"fig1a", "fig1b", "fig2", "fig3", "fig4a", "fig4b", "fig4c", "fig4d", "fig4e"};
}

KeyValues preset_values(const std::string& name) {
  if (name == "fig1a") return {{"a", "1,1"}, {"bc", "neumann"}};
  if (name == "fig1b") return {{"a", "10,3"}, {"bc", "neumann"}};
  if (name == "fig2") {
    return {{"L1", "1"}, {"L2", "10"}, {"L3", "100"}, {"Q", "10000"}, {"m", "0.1"}, {"bc", "neumann"}};
  }
  if (name == "fig3") return {{"q-tilde", "10000"}, {"m", "1"}, {"L1", "1"}, {"bc", "neumann"}};
  if (name == "fig4a") {
    return {{"L1", "3"}, {"L2", "3"}, {"L3", "3"}, {"Q", "100"}, {"m", "2"}, {"bc", "neumann"}};
  }
  if (name == "fig4b") {
    return {{"L1", "2"}, {"L2", "2"}, {"L3", "300"}, {"Q", "2000"}, {"m", "1"}, {"bc", "neumann"}};
  }
  if (name == "fig4c") {
    return {{"L1", "2"}, {"L2", "200"}, {"L3", "200"}, {"Q", "8000"}, {"m", "0.5"}, {"bc", "neumann"}};
  }
  if (name == "fig4d" || name == "fig4e") {
    KeyValues kv{{"L1", "2"}, {"L2", "100"}, {"L3", "600"}, {"Q", "4000"}, {"m", "0.5"}, {"bc", "neumann"}};
    if (name == "fig4e") kv["scale"] = "log";
    return kv;
  }
  throw ValidationError("unknown preset '" + name + "'");
}

KeyValues parse_config_text(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ValidationError("config line " + std::to_string(lineno) + ": empty key or value");
    }
    kv[key] = value;
  }
  return kv;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig resolve_config(const std::string& subcommand, const std::string& preset,
                         const KeyValues& file_values, const KeyValues& flag_values) {
  RunConfig c;
  c.subcommand = subcommand;
  KeyValues file = file_values;
  c.preset = preset;
  if (auto it = file.find("preset"); it != file.end()) {
    if (c.preset.empty()) c.preset = it->second;
    file.erase(it);
  }

  std::map<std::string, std::pair<std::string, std::string>> merged;
  if (!c.preset.empty())
    for (const auto& [k, v] : preset_values(c.preset)) merged[k] = {v, "preset"};
  for (const auto& [k, v] : file) merged[k] = {v, "config"};
  for (const auto& [k, v] : flag_values) merged[k] = {v, "flag"};

  for (const auto& [k, vs] : merged) {
    apply(c, k, vs.first);
    c.resolved.emplace_back(k, vs.first + " [" + vs.second + "]");
  }
  if (c.t_min && c.t_max && !(*c.t_min < *c.t_max)) throw ValidationError("tmin must be below tmax");
  return c;
}

}  // namespace cavitybec
