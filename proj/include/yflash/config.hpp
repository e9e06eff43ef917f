#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "yflash/automata.hpp"
#include "yflash/device.hpp"

namespace yflash {

/// Every tunable of the simulator. Defaults reproduce the reference
/// experiments.
struct SimConfig {
  DeviceParams device;
  PopulationParams population;

  MachineConfig machine;
  std::size_t train_samples = 5000;

  int dc_threshold = 15;
  Seconds bridge_width{0.5e-3};
  // The tracked set is every automaton of the first `tracked_clauses`
  // positive-polarity clauses.
  std::size_t tracked_clauses = 2;

  Seconds staircase_width{200e-6};
  bool staircase_noise = false;
  int staircase_pulse_cap = 100000;

  Siemens endurance_g_lcs{0.85e-9};
  Siemens endurance_g_hcs{1.04e-6};
  int endurance_cycles = 250;
  Seconds endurance_width{200e-6};
  int endurance_pulse_cap = 1000;

  std::size_t d2d_devices = 100;
  Seconds d2d_width{200e-6};

  Seconds energy_write_width{200e-6};
  std::size_t energy_reads = 40;
  std::size_t energy_program_pulses = 40;
  std::size_t energy_erase_pulses = 32;

  /// Throws ConfigError when the combination is invalid.
  void validate() const;
};

/// Sets one key from its textual value. Unknown keys and unparsable values
/// throw ConfigError.
void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value);

/// Applies a flat `key = value` file. Blank lines and `#` comments are
/// ignored; a key may appear at most once.
void apply_config(SimConfig& cfg, std::istream& is);
void apply_config_file(SimConfig& cfg, const std::string& path);

/// All keys with their resolved values, one `key = value` per line, in a
/// fixed order. Feeding the output back through apply_config reproduces cfg.
[[nodiscard]] std::string dump_config(const SimConfig& cfg);

[[nodiscard]] std::vector<std::string> config_keys();

}  // namespace yflash
