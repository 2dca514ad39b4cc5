#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "gqarch/cli.hpp"
#include "gqarch/error.hpp"
#include "gqarch/series_io.hpp"

namespace gqarch {

std::string to_string(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::estimate: return "estimate";
    case Command::mc: return "mc";
    case Command::diagnose: return "diagnose";
    case Command::feasibility: return "feasibility";
  }
  return "feasibility";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::simulate, Command::estimate, Command::mc, Command::diagnose, Command::feasibility}) {
    if (to_string(c) == name) return c;
  }
  throw UsageError("unknown command '" + name + "'");
}

namespace {

using KeyTable = std::map<std::string, KeySpec>;

KeySpec required() { return {"", true}; }
KeySpec optional_key(std::string v = "") { return {std::move(v), false}; }

void add_optimizer_keys(KeyTable& t, const std::string& mode) {
  const OptimOptions o;
  const ParamBox b;
  t["mode"] = optional_key(mode);
  t["beta"] = optional_key("0.5");
  t["starts"] = optional_key(std::to_string(o.starts));
  t["max_iters"] = optional_key(std::to_string(o.max_iters));
  t["f_tol"] = optional_key(format_real(o.f_tol));
  t["x_tol"] = optional_key(format_real(o.x_tol));
  t["use_gradient"] = optional_key(o.use_gradient ? "true" : "false");
  t["start_strategy"] = optional_key(to_string(o.start_strategy));
  for (const char* k : {"start_gamma", "start_omega", "start_a", "start_d", "start_c"}) t[k] = optional_key();
  t["box_gamma_lo"] = optional_key(format_real(b.gamma_lo));
  t["box_gamma_hi"] = optional_key(format_real(b.gamma_hi));
  t["box_omega_lo"] = optional_key(format_real(b.omega_lo));
  t["box_omega_hi"] = optional_key(format_real(b.omega_hi));
  t["box_a_lo"] = optional_key(format_real(b.a_lo));
  t["box_a_hi"] = optional_key(format_real(b.a_hi));
  t["box_d_lo"] = optional_key(format_real(b.d_lo));
  t["box_d_hi"] = optional_key(format_real(b.d_hi));
  t["box_b2_floor"] = optional_key(format_real(b.b2_floor));
  t["box_b2_lower_ratio"] = optional_key(format_real(b.b2_lower_ratio));
  t["box_b2_ceiling"] = optional_key(format_real(b.b2_ceiling));
  t["box_b2_upper_ratio"] = optional_key(format_real(b.b2_upper_ratio));
}

void add_innovation_keys(KeyTable& t) {
  t["innovation"] = optional_key("standard-normal");
  t["nu"] = optional_key("8");
}

KeyTable make_table(Command c) {
  KeyTable t;
  t["seed"] = optional_key("0");
  switch (c) {
    case Command::simulate:
      for (const char* k : {"gamma", "omega", "a", "d", "c"}) t[k] = required();
      t["n"] = optional_key("1000");
      t["presample"] = optional_key("false");
      t["force"] = optional_key("false");
      t["out"] = required();
      add_innovation_keys(t);
      break;
    case Command::estimate:
      t["in"] = required();
      t["out"] = optional_key();
      add_optimizer_keys(t, "finite-past");
      break;
    case Command::mc:
      t["gamma0"] = optional_key("0.7");
      t["a0"] = optional_key("-0.2");
      t["c0"] = optional_key("0.2");
      t["omega0"] = optional_key("0.1");
      t["d0"] = optional_key("0.2");
      t["n_list"] = optional_key("1000");
      t["reps"] = optional_key("100");
      t["quick"] = optional_key("false");
      t["workers"] = optional_key("1");
      t["out"] = required();
      t["table"] = optional_key();
      add_innovation_keys(t);
      add_optimizer_keys(t, "finite-past");
      break;
    case Command::diagnose:
      t["in"] = required();
      t["out"] = optional_key();
      t["max_lag"] = optional_key("200");
      t["lag_lo"] = optional_key("10");
      t["lag_hi"] = optional_key("200");
      break;
    case Command::feasibility:
      t["gamma"] = required();
      t["omega"] = optional_key("0");
      t["a"] = optional_key("0");
      t["d"] = required();
      t["c"] = required();
      t["mu4"] = optional_key(format_real(kDefaultMu4));
      t["k4"] = optional_key(format_real(kDefaultK4));
      break;
  }
  return t;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const std::string t = trim(text);
  const char* b = t.data();
  const char* e = b + t.size();
  if (b != e && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw UsageError("key '" + key + "': expected a number, got '" + text + "'");
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw UsageError("key '" + key + "': expected a nonnegative integer, got '" + text + "'");
  return v;
}

}  // namespace

const std::map<std::string, KeySpec>& command_keys(Command c) {
  static const std::map<Command, KeyTable> tables = [] {
    std::map<Command, KeyTable> m;
    for (Command c2 : {Command::simulate, Command::estimate, Command::mc, Command::diagnose, Command::feasibility})
      m[c2] = make_table(c2);
    return m;
  }();
  return tables.at(c);
}

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = parameters.find(key);
  if (it == parameters.end()) throw UsageError("missing configuration key '" + key + "'");
  return it->second;
}

double RunConfig::get_double(const std::string& key) const { return to_double(key, get(key)); }

std::size_t RunConfig::get_size(const std::string& key) const {
  return static_cast<std::size_t>(to_u64(key, get(key)));
}

std::uint64_t RunConfig::get_u64(const std::string& key) const { return to_u64(key, get(key)); }

bool RunConfig::get_bool(const std::string& key) const {
  const std::string v = trim(get(key));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError("key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(key, item));
  }
  if (out.empty()) throw UsageError("key '" + key + "': expected a comma-separated list of numbers");
  return out;
}

std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw UsageError(source + ":" + std::to_string(line_no) + ": empty key");
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  return parse_key_values(in, path);
}

RunConfig resolve_config(Command command, const std::vector<std::map<std::string, std::string>>& layers) {
  const auto& table = command_keys(command);
  RunConfig cfg;
  cfg.command = command;
  for (const auto& [key, spec] : table) {
    if (!spec.required) cfg.parameters[key] = spec.default_value;
  }
  for (const auto& layer : layers) {
    for (const auto& [key, value] : layer) {
      if (table.count(key) == 0)
        throw UsageError("unknown key '" + key + "' for command '" + to_string(command) + "'");
      cfg.parameters[key] = value;
    }
  }
  for (const auto& [key, spec] : table) {
    if (spec.required && (cfg.parameters.count(key) == 0 || cfg.parameters[key].empty()))
      throw UsageError("missing required key '" + key + "' for command '" + to_string(command) + "'");
  }
  // quick is a preset: it replaces the sample sizes and replication count
  if (command == Command::mc && cfg.get_bool("quick")) {
    cfg.parameters["n_list"] = "500";
    cfg.parameters["reps"] = "20";
  }
  cfg.input_path = cfg.has("in") ? cfg.get("in") : "";
  cfg.output_path = cfg.has("out") ? cfg.get("out") : "";
  cfg.seed = cfg.get_u64("seed");
  return cfg;
}

std::vector<std::string> config_comment_block(const RunConfig& config) {
  std::vector<std::string> lines;
  lines.push_back("# gqarch " + to_string(config.command));
  for (const auto& [key, value] : config.parameters) lines.push_back("# " + key + " = " + value);
  return lines;
}

RunConfig parse_config_comments(const std::vector<std::string>& lines) {
  std::optional<Command> command;
  std::map<std::string, std::string> kv;
  for (const auto& raw : lines) {
    std::string t = trim(raw);
    if (t.empty() || t.front() != '#') continue;
    t = trim(t.substr(1));
    if (t.rfind("gqarch ", 0) == 0) {
      command = parse_command(trim(t.substr(7)));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) continue;
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  if (!command) throw UsageError("comment block does not name a gqarch command");
  return resolve_config(*command, {kv});
}

Theta theta_from_config(const RunConfig& config, const std::string& suffix) {
  Theta t;
  t.gamma = config.get_double("gamma" + suffix);
  t.omega = config.get_double("omega" + suffix);
  t.a = config.get_double("a" + suffix);
  t.d = config.get_double("d" + suffix);
  t.c = config.get_double("c" + suffix);
  return t;
}

ParamBox box_from_config(const RunConfig& config) {
  ParamBox b;
  b.gamma_lo = config.get_double("box_gamma_lo");
  b.gamma_hi = config.get_double("box_gamma_hi");
  b.omega_lo = config.get_double("box_omega_lo");
  b.omega_hi = config.get_double("box_omega_hi");
  b.a_lo = config.get_double("box_a_lo");
  b.a_hi = config.get_double("box_a_hi");
  b.d_lo = config.get_double("box_d_lo");
  b.d_hi = config.get_double("box_d_hi");
  b.b2_floor = config.get_double("box_b2_floor");
  b.b2_lower_ratio = config.get_double("box_b2_lower_ratio");
  b.b2_ceiling = config.get_double("box_b2_ceiling");
  b.b2_upper_ratio = config.get_double("box_b2_upper_ratio");
  b.validate();
  return b;
}

OptimOptions optim_options_from_config(const RunConfig& config) {
  OptimOptions o;
  o.box = box_from_config(config);
  o.starts = config.get_size("starts");
  o.max_iters = config.get_size("max_iters");
  o.f_tol = config.get_double("f_tol");
  o.x_tol = config.get_double("x_tol");
  o.use_gradient = config.get_bool("use_gradient");
  o.start_strategy = parse_start_strategy(config.get("start_strategy"));
  o.seed = config.seed;
  const bool has_start = !config.get("start_gamma").empty();
  if (has_start) {
    Theta s{config.get_double("start_gamma"), config.get_double("start_omega"), config.get_double("start_a"),
            config.get_double("start_d"), config.get_double("start_c")};
    o.user_starts = {s};
    o.reference = s;
  }
  o.validate();
  return o;
}

PastMode past_mode_from_config(const RunConfig& config) {
  return parse_past_mode(config.get("mode"), config.get_double("beta"));
}

Innovation innovation_from_config(const RunConfig& config) {
  Innovation inn;
  inn.kind = parse_innovation(config.get("innovation"));
  inn.nu = config.get_double("nu");
  return inn;
}

McDesign mc_design_from_config(const RunConfig& config) {
  McDesign design;
  for (double omega0 : config.get_list("omega0")) {
    for (double d0 : config.get_list("d0")) {
      design.theta_grid.push_back(
          {config.get_double("gamma0"), omega0, config.get_double("a0"), d0, config.get_double("c0")});
    }
  }
  for (double n : config.get_list("n_list")) {
    if (!(n >= 2.0) || n != static_cast<double>(static_cast<std::size_t>(n)))
      throw UsageError("n_list entries must be integers >= 2");
    design.n_list.push_back(static_cast<std::size_t>(n));
  }
  design.reps = config.get_size("reps");
  design.mode = past_mode_from_config(config);
  design.seed = config.seed;
  design.opts = optim_options_from_config(config);
  design.innovation = innovation_from_config(config);
  design.workers = config.get_size("workers");
  design.validate();
  return design;
}

}  // namespace gqarch
