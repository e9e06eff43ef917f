#include "yflash/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "yflash/errors.hpp"

namespace yflash {

ActionThreshold default_action_threshold(const DeviceParams& params) {
  return {Siemens(std::sqrt(params.g_lcs.value() * params.g_hcs.value()))};
}

MappedAutomaton make_mapped(std::size_t ta_index, const DeviceParams& params, std::uint64_t seed, int dc_threshold,
                            Seconds pulse_width) {
  require(dc_threshold >= 1, "make_mapped: divergence threshold must be >= 1");
  require(pulse_width > Seconds(0.0), "make_mapped: pulse width must be > 0");
  MappedAutomaton m{ta_index, YFlashCell(params, seed), DivergenceCounter{0, dc_threshold}, pulse_width, {}};
  m.cell.preset(state_for_conductance(params, default_action_threshold(params).g_mid));
  return m;
}

std::optional<PulseResult> bridge_update(MappedAutomaton& m, int delta, std::size_t sample_index) {
  require(std::abs(delta) <= 1, "bridge_update: delta must be -1, 0 or +1");
  m.dc.value += delta;
  std::optional<PulseResult> pulse;
  if (m.dc.value >= m.dc.threshold) {
    pulse = m.cell.erase_pulse(m.pulse_width);
  } else if (m.dc.value <= -m.dc.threshold) {
    pulse = m.cell.program_pulse(m.pulse_width);
  }
  if (pulse) {
    m.pulse_log.push_back({sample_index, m.ta_index, m.dc.value, *pulse});
    m.dc.value = 0;
  }
  return pulse;
}

Action read_action(const MappedAutomaton& m, const ActionThreshold& thr) {
  return m.cell.conductance() >= thr.g_mid ? Action::Include : Action::Exclude;
}

MappedRunResult run_mapped_training(TsetlinMachine& tm, std::span<MappedAutomaton> cells,
                                    std::span<const Sample> dataset, Rng& rng, const MappingObserver& observer) {
  require(!dataset.empty(), "run_mapped_training: dataset is empty");
  require(cells.size() == tm.n_automata(), "run_mapped_training: need one mapped cell per automaton");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    require(cells[i].ta_index == i, "run_mapped_training: cells must be ordered by automaton index");
  }

  MappedRunResult result;
  result.pulses_per_ta.assign(cells.size(), 0);
  result.transitions_per_ta.assign(cells.size(), 0);
  std::vector<std::uint64_t> reads_before(cells.size());
  std::transform(cells.begin(), cells.end(), reads_before.begin(),
                 [](const MappedAutomaton& m) { return m.cell.read_count(); });

  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const auto& [features, label] = dataset[s];
    for (const TransitionEvent& ev : tm.train_step(features, label, rng, s)) {
      MappedAutomaton& m = cells[ev.ta_index];
      const auto pulse = bridge_update(m, ev.new_state - ev.old_state, s);
      ++result.transition_count;
      ++result.transitions_per_ta[ev.ta_index];
      if (pulse) {
        ++result.pulse_count;
        ++result.pulses_per_ta[ev.ta_index];
      }
      if (observer) observer(ev, m, pulse);
    }
  }

  result.final_conductances.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    result.reads_during_training += cells[i].cell.read_count() - reads_before[i];
    result.final_conductances.push_back(cells[i].cell.conductance());
  }
  return result;
}

void write_pulse_log_csv(std::ostream& os, std::span<const MappedAutomaton> cells) {
  std::vector<const LoggedPulse*> rows;
  for (const MappedAutomaton& m : cells) {
    for (const LoggedPulse& p : m.pulse_log) rows.push_back(&p);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const LoggedPulse* a, const LoggedPulse* b) {
    return a->sample_index != b->sample_index ? a->sample_index < b->sample_index : a->ta_index < b->ta_index;
  });
  os << "sample_index,ta_index,mode,width_s,energy_J,g_before_S,g_after_S\n";
  for (const LoggedPulse* p : rows) {
    fmt::print(os, "{},{},{},{:.6e},{:.6e},{:.6e},{:.6e}\n", p->sample_index, p->ta_index, to_string(p->pulse.mode),
               p->pulse.width.value(), p->pulse.energy.value(), p->pulse.g_before.value(), p->pulse.g_after.value());
  }
}

}  // namespace yflash
