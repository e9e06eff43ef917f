#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "yflash/random.hpp"
#include "yflash/units.hpp"

namespace yflash {

enum class PulseMode : std::uint8_t { Read, Program, Erase };

[[nodiscard]] std::string_view to_string(PulseMode mode);

/// Average power drawn per operation mode, at the Table-style operating
/// points (2 V read, 5 V program, 8 V erase).
struct ModePowers {
  Watts read{1.828e-6};
  Watts program{695e-6};
  Watts erase{8e-9};
};

[[nodiscard]] Watts mode_power(PulseMode mode, const ModePowers& powers = {});

/// Energy of one pulse: average mode power times pulse width.
[[nodiscard]] Joules energy_of_pulse(PulseMode mode, Seconds width, const ModePowers& powers = {});

struct StepAnchor {
  Seconds width;
  double steps;
};

/// Maps a write pulse width to the number of equal steps needed to cross
/// the full conductance range. Piecewise linear in log(width)/log(steps)
/// through the anchors, extended linearly past the outermost ones.
class StepCalibration {
 public:
  explicit StepCalibration(std::vector<StepAnchor> anchors);

  [[nodiscard]] double steps(Seconds width) const;
  [[nodiscard]] const std::vector<StepAnchor>& anchors() const { return anchors_; }

 private:
  std::vector<StepAnchor> anchors_;  // sorted by width, ascending
};

struct DeviceParams {
  Siemens g_hcs{2.5e-6};
  Siemens g_lcs{1e-9};
  StepCalibration program_steps{{{Seconds(200e-6), 40.0}, {Seconds(10e-6), 1000.0}}};
  StepCalibration erase_steps{{{Seconds(200e-6), 32.0}, {Seconds(10e-6), 800.0}}};
  Volts v_read{2.0};
  Volts v_program{5.0};
  Volts v_erase{8.0};
  // Reads above this bias would program the cell.
  Volts v_program_threshold{4.0};
  Seconds read_pulse_width{5e-9};
  // Relative (log-domain) sigma of the per-write conductance jitter, clipped
  // at c2c_clip sigmas.
  double c2c_sigma = 0.009;
  double c2c_clip = 4.0;
  // Step shrink per completed cycle: dq = 1 / (steps * (1 + rate * cycles)).
  double program_degradation = 3.0e-4;
  double erase_degradation = 3.0e-3;
  Amperes reverse_leak_ceiling{1e-12};
  ModePowers power;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;

  /// Half-width of the multiplicative noise envelope around the nominal
  /// conductance curve.
  [[nodiscard]] double c2c_tolerance() const;
};

struct PulseResult {
  PulseMode mode;
  Seconds width;
  Joules energy;
  Siemens g_before;
  Siemens g_after;
};

/// Behavioural Y-Flash cell.
///
/// The stored state is a normalized floating-gate charge q in [0, 1]
/// (0 = fully programmed / LCS, 1 = fully erased / HCS). The 2 V secant
/// conductance is log-linear in q,
///
///     G(q) = g_lcs * (g_hcs / g_lcs)^q * jitter,
///
/// where jitter is a multiplicative cycle-to-cycle factor drawn on every
/// write. Reads are deterministic given (q, jitter) and never modify them.
class YFlashCell {
 public:
  explicit YFlashCell(DeviceParams params, std::uint64_t seed = 0);

  [[nodiscard]] double state() const { return q_; }
  [[nodiscard]] double jitter() const { return jitter_; }
  [[nodiscard]] int cycle_count() const { return cycle_count_; }
  [[nodiscard]] const DeviceParams& params() const { return params_; }
  [[nodiscard]] std::uint64_t read_count() const { return reads_; }

  [[nodiscard]] Siemens conductance() const;

  /// Terminal current at drain bias v (source grounded). Forward bias gives
  /// G * v; reverse bias leaks at most reverse_leak_ceiling.
  Amperes read(Volts v) const;

  PulseResult program_pulse(Seconds width);
  PulseResult erase_pulse(Seconds width);

  /// Places the cell at state q without a pulse (initialization, snapshot
  /// restore). Does not touch the cycle counter.
  void preset(double q, double jitter = 1.0);

 private:
  void resample_jitter();

  DeviceParams params_;
  double q_ = 1.0;
  double jitter_ = 1.0;
  int cycle_count_ = 0;
  bool reached_lcs_ = false;
  mutable std::uint64_t reads_ = 0;
  Rng rng_;
};

/// Log-linear conductance at charge state q, without jitter.
[[nodiscard]] Siemens nominal_conductance(const DeviceParams& params, double q);

/// Charge state whose nominal conductance equals g (clamped to [0, 1]).
[[nodiscard]] double state_for_conductance(const DeviceParams& params, Siemens g);

struct PopulationParams {
  Siemens lcs_mean{0.92e-9};
  Siemens lcs_sigma{0.047e-9};
  Siemens hcs_mean{1.04e-6};
  Siemens hcs_sigma{0.027e-6};

  void validate() const;
};

/// Draws a device: g_lcs and g_hcs from positive-truncated normals, every
/// other parameter from base. The cell starts erased (q = 1) and gets its
/// own random stream derived from rng.
[[nodiscard]] YFlashCell sample_device(const PopulationParams& pop, const DeviceParams& base, Rng& rng);

/// Pulses until q saturates at 0. Returns the pulse count.
int program_to_lcs(YFlashCell& cell, Seconds width, int pulse_cap);
/// Pulses until q saturates at 1. Returns the pulse count.
int erase_to_hcs(YFlashCell& cell, Seconds width, int pulse_cap);

struct EnduranceRecord {
  int cycle;
  Siemens lcs;
  Siemens hcs;
  Seconds t_program;
  Seconds t_erase;
};

/// Full program/erase cycles; t_program and t_erase are pulse count times
/// width. Throws EnduranceFailure when a traversal exceeds pulse_cap.
std::vector<EnduranceRecord> cycle_endurance(YFlashCell& cell, int n_cycles, Seconds width, int pulse_cap = 1000);

}  // namespace yflash
