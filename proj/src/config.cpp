#include "yflash/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "yflash/errors.hpp"

namespace yflash {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, text));
  }
  return v;
}

long long parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, text));
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

// "width:steps, width:steps, ..."
StepCalibration parse_anchors(std::string_view key, std::string_view text) {
  std::vector<StepAnchor> anchors;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = trim(text.substr(pos, comma - pos));
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) throw ConfigError(fmt::format("{}: expected width:steps, got '{}'", key, item));
    anchors.push_back({Seconds(parse_double(key, item.substr(0, colon))), parse_double(key, item.substr(colon + 1))});
    pos = comma + 1;
  }
  return StepCalibration(std::move(anchors));
}

std::string format_anchors(const StepCalibration& cal) {
  std::string out;
  for (const StepAnchor& a : cal.anchors()) {
    if (!out.empty()) out += ", ";
    out += fmt::format("{}:{}", a.width.value(), a.steps);
  }
  return out;
}

struct Entry {
  std::string key;
  std::function<void(SimConfig&, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

template <class Field>
Entry number(std::string key, Field SimConfig::*field) {
  return {key,
          [key, field](SimConfig& c, std::string_view v) {
            if constexpr (std::is_same_v<Field, double>) {
              c.*field = parse_double(key, v);
            } else if constexpr (std::is_same_v<Field, bool>) {
              c.*field = parse_bool(key, v);
            } else if constexpr (std::is_integral_v<Field>) {
              const long long n = parse_integer(key, v);
              if (n < 0) throw ConfigError(fmt::format("{}: must be >= 0", key));
              c.*field = static_cast<Field>(n);
            } else {
              c.*field = Field(parse_double(key, v));
            }
          },
          [field](const SimConfig& c) {
            if constexpr (std::is_arithmetic_v<Field>) {
              return fmt::format("{}", c.*field);
            } else {
              return fmt::format("{}", (c.*field).value());
            }
          }};
}

// Member-of-member access for nested parameter structs.
template <class Outer, class Field>
Entry nested(std::string key, Outer SimConfig::*outer, Field Outer::*field) {
  return {key,
          [key, outer, field](SimConfig& c, std::string_view v) {
            if constexpr (std::is_same_v<Field, double>) {
              (c.*outer).*field = parse_double(key, v);
            } else if constexpr (std::is_integral_v<Field>) {
              const long long n = parse_integer(key, v);
              if (std::is_unsigned_v<Field> && n < 0) throw ConfigError(fmt::format("{}: must be >= 0", key));
              (c.*outer).*field = static_cast<Field>(n);
            } else {
              (c.*outer).*field = Field(parse_double(key, v));
            }
          },
          [outer, field](const SimConfig& c) {
            if constexpr (std::is_arithmetic_v<Field>) {
              return fmt::format("{}", (c.*outer).*field);
            } else {
              return fmt::format("{}", ((c.*outer).*field).value());
            }
          }};
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    t.push_back(nested("device.g_hcs", &SimConfig::device, &DeviceParams::g_hcs));
    t.push_back(nested("device.g_lcs", &SimConfig::device, &DeviceParams::g_lcs));
    t.push_back({"device.program_anchors",
                 [](SimConfig& c, std::string_view v) { c.device.program_steps = parse_anchors("device.program_anchors", v); },
                 [](const SimConfig& c) { return format_anchors(c.device.program_steps); }});
    t.push_back({"device.erase_anchors",
                 [](SimConfig& c, std::string_view v) { c.device.erase_steps = parse_anchors("device.erase_anchors", v); },
                 [](const SimConfig& c) { return format_anchors(c.device.erase_steps); }});
    t.push_back(nested("device.v_read", &SimConfig::device, &DeviceParams::v_read));
    t.push_back(nested("device.v_program", &SimConfig::device, &DeviceParams::v_program));
    t.push_back(nested("device.v_erase", &SimConfig::device, &DeviceParams::v_erase));
    t.push_back(nested("device.v_program_threshold", &SimConfig::device, &DeviceParams::v_program_threshold));
    t.push_back(nested("device.read_pulse_width", &SimConfig::device, &DeviceParams::read_pulse_width));
    t.push_back(nested("device.c2c_sigma", &SimConfig::device, &DeviceParams::c2c_sigma));
    t.push_back(nested("device.c2c_clip", &SimConfig::device, &DeviceParams::c2c_clip));
    t.push_back(nested("device.program_degradation", &SimConfig::device, &DeviceParams::program_degradation));
    t.push_back(nested("device.erase_degradation", &SimConfig::device, &DeviceParams::erase_degradation));
    t.push_back(nested("device.reverse_leak_ceiling", &SimConfig::device, &DeviceParams::reverse_leak_ceiling));
    t.push_back({"device.power_read", [](SimConfig& c, std::string_view v) { c.device.power.read = Watts(parse_double("device.power_read", v)); },
                 [](const SimConfig& c) { return fmt::format("{}", c.device.power.read.value()); }});
    t.push_back({"device.power_program",
                 [](SimConfig& c, std::string_view v) { c.device.power.program = Watts(parse_double("device.power_program", v)); },
                 [](const SimConfig& c) { return fmt::format("{}", c.device.power.program.value()); }});
    t.push_back({"device.power_erase",
                 [](SimConfig& c, std::string_view v) { c.device.power.erase = Watts(parse_double("device.power_erase", v)); },
                 [](const SimConfig& c) { return fmt::format("{}", c.device.power.erase.value()); }});
    t.push_back(nested("population.lcs_mean", &SimConfig::population, &PopulationParams::lcs_mean));
    t.push_back(nested("population.lcs_sigma", &SimConfig::population, &PopulationParams::lcs_sigma));
    t.push_back(nested("population.hcs_mean", &SimConfig::population, &PopulationParams::hcs_mean));
    t.push_back(nested("population.hcs_sigma", &SimConfig::population, &PopulationParams::hcs_sigma));
    t.push_back(nested("tm.features", &SimConfig::machine, &MachineConfig::n_features));
    t.push_back(nested("tm.clauses", &SimConfig::machine, &MachineConfig::n_clauses));
    t.push_back(nested("tm.threshold", &SimConfig::machine, &MachineConfig::threshold));
    t.push_back(nested("tm.specificity", &SimConfig::machine, &MachineConfig::specificity));
    t.push_back(nested("tm.n_half", &SimConfig::machine, &MachineConfig::n_half));
    t.push_back(number("tm.samples", &SimConfig::train_samples));
    t.push_back(number("bridge.threshold", &SimConfig::dc_threshold));
    t.push_back(number("bridge.pulse_width", &SimConfig::bridge_width));
    t.push_back(number("bridge.tracked_clauses", &SimConfig::tracked_clauses));
    t.push_back(number("staircase.width", &SimConfig::staircase_width));
    t.push_back(number("staircase.noise", &SimConfig::staircase_noise));
    t.push_back(number("staircase.pulse_cap", &SimConfig::staircase_pulse_cap));
    t.push_back(number("endurance.g_lcs", &SimConfig::endurance_g_lcs));
    t.push_back(number("endurance.g_hcs", &SimConfig::endurance_g_hcs));
    t.push_back(number("endurance.cycles", &SimConfig::endurance_cycles));
    t.push_back(number("endurance.width", &SimConfig::endurance_width));
    t.push_back(number("endurance.pulse_cap", &SimConfig::endurance_pulse_cap));
    t.push_back(number("d2d.devices", &SimConfig::d2d_devices));
    t.push_back(number("d2d.width", &SimConfig::d2d_width));
    t.push_back(number("energy.write_width", &SimConfig::energy_write_width));
    t.push_back(number("energy.reads", &SimConfig::energy_reads));
    t.push_back(number("energy.program_pulses", &SimConfig::energy_program_pulses));
    t.push_back(number("energy.erase_pulses", &SimConfig::energy_erase_pulses));
    return t;
  }();
  return table;
}

}  // namespace

void SimConfig::validate() const {
  device.validate();
  population.validate();
  // Constructing a machine checks its own invariants.
  try {
    TsetlinMachine probe(machine);
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  if (train_samples == 0) throw ConfigError("tm.samples must be > 0");
  if (dc_threshold < 1) throw ConfigError("bridge.threshold must be >= 1");
  if (!(bridge_width > Seconds(0.0))) throw ConfigError("bridge.pulse_width must be > 0");
  if (tracked_clauses > machine.n_clauses / 2) throw ConfigError("bridge.tracked_clauses exceeds the positive clause count");
  if (!(staircase_width > Seconds(0.0))) throw ConfigError("staircase.width must be > 0");
  if (staircase_pulse_cap < 1) throw ConfigError("staircase.pulse_cap must be >= 1");
  if (!(endurance_g_lcs > Siemens(0.0)) || !(endurance_g_lcs < endurance_g_hcs)) {
    throw ConfigError("endurance.g_lcs must be positive and below endurance.g_hcs");
  }
  if (endurance_cycles < 1) throw ConfigError("endurance.cycles must be >= 1");
  if (!(endurance_width > Seconds(0.0))) throw ConfigError("endurance.width must be > 0");
  if (endurance_pulse_cap < 1) throw ConfigError("endurance.pulse_cap must be >= 1");
  if (d2d_devices == 0) throw ConfigError("d2d.devices must be > 0");
  if (!(d2d_width > Seconds(0.0))) throw ConfigError("d2d.width must be > 0");
  if (!(energy_write_width > Seconds(0.0))) throw ConfigError("energy.write_width must be > 0");
}

void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value) {
  for (const Entry& e : entries()) {
    if (e.key == key) {
      e.set(cfg, value);
      return;
    }
  }
  throw ConfigError(fmt::format("unknown config key '{}'", key));
}

void apply_config(SimConfig& cfg, std::istream& is) {
  std::set<std::string, std::less<>> seen;
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("config line {}: expected key = value", lineno));
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.emplace(key).second) throw ConfigError(fmt::format("config line {}: duplicate key '{}'", lineno, key));
    set_config_value(cfg, key, value);
  }
  cfg.validate();
}

void apply_config_file(SimConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  apply_config(cfg, in);
}

std::string dump_config(const SimConfig& cfg) {
  std::string out;
  for (const Entry& e : entries()) out += fmt::format("{} = {}\n", e.key, e.get(cfg));
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Entry& e : entries()) keys.push_back(e.key);
  return keys;
}

}  // namespace yflash
