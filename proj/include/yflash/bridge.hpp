#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "yflash/automata.hpp"
#include "yflash/device.hpp"

namespace yflash {

/// Signed accumulator of automaton state changes. Fires when the value
/// reaches +threshold or -threshold, then resets to zero.
struct DivergenceCounter {
  int value = 0;
  int threshold = 15;
};

struct LoggedPulse {
  std::size_t sample_index;
  std::size_t ta_index;
  int counter_at_fire;
  PulseResult pulse;
};

/// One automaton mirrored onto one cell. Counter overflow toward Include
/// issues an erase (conductance up), toward Exclude a program pulse.
struct MappedAutomaton {
  std::size_t ta_index;
  YFlashCell cell;
  DivergenceCounter dc;
  Seconds pulse_width{0.5e-3};
  std::vector<LoggedPulse> pulse_log;
};

struct ActionThreshold {
  Siemens g_mid;
};

/// Geometric mean of the device's LCS and HCS conductances.
[[nodiscard]] ActionThreshold default_action_threshold(const DeviceParams& params);

/// A freshly mapped automaton: cell preset to the threshold conductance,
/// counter at zero.
[[nodiscard]] MappedAutomaton make_mapped(std::size_t ta_index, const DeviceParams& params, std::uint64_t seed,
                                          int dc_threshold = 15, Seconds pulse_width = Seconds(0.5e-3));

/// Accumulates one automaton step (delta in {-1, 0, +1}) and issues at most
/// one blind write pulse.
std::optional<PulseResult> bridge_update(MappedAutomaton& m, int delta, std::size_t sample_index = 0);

[[nodiscard]] Action read_action(const MappedAutomaton& m, const ActionThreshold& thr);

struct MappedRunResult {
  std::size_t pulse_count = 0;
  std::size_t transition_count = 0;
  std::vector<Siemens> final_conductances;
  std::vector<std::size_t> pulses_per_ta;
  std::vector<std::size_t> transitions_per_ta;
  // Reads issued on any mapped cell during training; zero for a blind write stream.
  std::uint64_t reads_during_training = 0;
};

/// Called after each forwarded transition with the event, the mapped
/// automaton after its update, and the pulse (if one fired).
using MappingObserver =
    std::function<void(const TransitionEvent&, const MappedAutomaton&, const std::optional<PulseResult>&)>;

/// Trains tm over the dataset, forwarding every transition event to the
/// matching mapped automaton. cells must hold one entry per automaton,
/// indexed by the machine's flat automaton index.
MappedRunResult run_mapped_training(TsetlinMachine& tm, std::span<MappedAutomaton> cells,
                                    std::span<const Sample> dataset, Rng& rng,
                                    const MappingObserver& observer = {});

/// Pulse log CSV: sample_index,ta_index,mode,width_s,energy_J,g_before_S,g_after_S
void write_pulse_log_csv(std::ostream& os, std::span<const MappedAutomaton> cells);

}  // namespace yflash
