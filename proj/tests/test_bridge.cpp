#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "yflash/bridge.hpp"
#include "yflash/errors.hpp"

using namespace yflash;
using namespace yflash::literals;

namespace {

DeviceParams noiseless() {
  DeviceParams p;
  p.c2c_sigma = 0.0;
  return p;
}

}  // namespace

TEST_CASE("counter fires at +threshold with an erase and resets") {
  MappedAutomaton m = make_mapped(0, noiseless(), 1);
  m.dc.value = 14;
  const auto pulse = bridge_update(m, +1);
  REQUIRE(pulse);
  CHECK(pulse->mode == PulseMode::Erase);
  CHECK(pulse->g_after > pulse->g_before);
  CHECK(m.dc.value == 0);
  CHECK(m.pulse_log.size() == 1);
  CHECK(m.pulse_log[0].counter_at_fire == 15);
}

TEST_CASE("counter fires at -threshold with a program pulse") {
  MappedAutomaton m = make_mapped(0, noiseless(), 1);
  m.dc.value = -14;
  const auto pulse = bridge_update(m, -1);
  REQUIRE(pulse);
  CHECK(pulse->mode == PulseMode::Program);
  CHECK(pulse->g_after < pulse->g_before);
  CHECK(pulse->energy.value() == doctest::Approx(347.5e-9));
  CHECK(m.dc.value == 0);
}

TEST_CASE("fifteen unit steps give exactly one pulse") {
  MappedAutomaton m = make_mapped(0, noiseless(), 1);
  int pulses = 0;
  for (int i = 0; i < 15; ++i) pulses += bridge_update(m, +1).has_value();
  CHECK(pulses == 1);
  for (int i = 0; i < 14; ++i) pulses += bridge_update(m, +1).has_value();
  CHECK(pulses == 1);
  CHECK(m.dc.value == 14);
  CHECK_FALSE(bridge_update(m, 0).has_value());
  CHECK_THROWS_AS(bridge_update(m, 2), ContractViolation);
}

TEST_CASE("mapped cell starts at the decision conductance") {
  const DeviceParams p = noiseless();
  const MappedAutomaton m = make_mapped(3, p, 1);
  // sqrt(1 nS * 2.5 uS) = 50 nS.
  CHECK(default_action_threshold(p).g_mid.value() == doctest::Approx(5e-8));
  CHECK(m.cell.conductance().value() == doctest::Approx(5e-8));
  CHECK(m.cell.state() == doctest::Approx(0.5));
  CHECK(m.ta_index == 3);
  CHECK(m.pulse_width == Seconds(0.5e-3));
}

TEST_CASE("read_action compares against g_mid") {
  const ActionThreshold thr{Siemens(50e-9)};
  MappedAutomaton m = make_mapped(0, noiseless(), 1);
  m.cell.preset(state_for_conductance(m.cell.params(), Siemens(2.33e-6)));
  CHECK(read_action(m, thr) == Action::Include);
  m.cell.preset(state_for_conductance(m.cell.params(), Siemens(23.2e-9)));
  CHECK(read_action(m, thr) == Action::Exclude);
  CHECK(read_action(m, ActionThreshold{m.cell.conductance()}) == Action::Include);
}

TEST_CASE("random delta streams: reset, bound and direction audit") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int thr = 1 + static_cast<int>(rng() % 25);
    MappedAutomaton m = make_mapped(0, DeviceParams{}, rng(), thr);
    long long sum = 0;
    long long pulsed_sum = 0;
    for (int i = 0; i < 500; ++i) {
      const int delta = static_cast<int>(rng() % 3) - 1;
      sum += delta;
      const auto p = bridge_update(m, delta, static_cast<std::size_t>(i));
      if (p) {
        REQUIRE(m.dc.value == 0);
        pulsed_sum += p->mode == PulseMode::Erase ? thr : -thr;
      }
      REQUIRE(std::abs(m.dc.value) < thr);
    }
    // Everything not yet written is still in the counter.
    CHECK(sum == pulsed_sum + m.dc.value);
    for (const LoggedPulse& lp : m.pulse_log) {
      if (lp.pulse.mode == PulseMode::Erase) {
        CHECK(lp.counter_at_fire >= thr);
      } else {
        CHECK(lp.counter_at_fire <= -thr);
      }
    }
  }
}

namespace {

struct MappedRun {
  TsetlinMachine tm;
  std::vector<MappedAutomaton> cells;
  MappedRunResult result;
};

MappedRun mapped_run(std::uint64_t seed, int threshold, std::size_t samples = 5000) {
  MappedRun r{TsetlinMachine(MachineConfig{}), {}, {}};
  for (std::size_t i = 0; i < r.tm.n_automata(); ++i) r.cells.push_back(make_mapped(i, DeviceParams{}, seed + i, threshold));
  Rng data_rng(seed);
  Rng rng(seed + 1000);
  const auto data = xor_dataset(samples, data_rng);
  r.result = run_mapped_training(r.tm, r.cells, data, rng);
  return r;
}

}  // namespace

TEST_CASE("mapped training respects the pulse budget and never reads") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const MappedRun r = mapped_run(seed, 15);
    CHECK(r.result.reads_during_training == 0);
    CHECK(r.result.pulse_count <= r.result.transition_count / 15);
    for (std::size_t i = 0; i < r.cells.size(); ++i) {
      // Net motion of the automaton is what the cell has absorbed plus what
      // is still pending in the counter.
      int net = 0;
      for (const LoggedPulse& p : r.cells[i].pulse_log) net += p.pulse.mode == PulseMode::Erase ? 15 : -15;
      CHECK(r.tm.automaton(i).state() - 150 == net + r.cells[i].dc.value);
      CHECK(r.result.pulses_per_ta[i] == r.cells[i].pulse_log.size());
    }
    CHECK(r.result.final_conductances.size() == r.tm.n_automata());
  }
}

TEST_CASE("threshold one writes on every transition") {
  const MappedRun r = mapped_run(8, 1, 1000);
  CHECK(r.result.pulse_count == r.result.transition_count);
  CHECK(r.result.transition_count > 0);
}

TEST_CASE("mapped training preconditions") {
  TsetlinMachine tm(MachineConfig{});
  std::vector<MappedAutomaton> cells;
  for (std::size_t i = 0; i < tm.n_automata(); ++i) cells.push_back(make_mapped(i, DeviceParams{}, i));
  Rng rng(1);
  const std::vector<Sample> empty;
  CHECK_THROWS_AS(run_mapped_training(tm, cells, empty, rng), ContractViolation);
  cells.pop_back();
  const auto data = xor_dataset(10, rng);
  CHECK_THROWS_AS(run_mapped_training(tm, cells, data, rng), ContractViolation);
}

TEST_CASE("pulse log CSV") {
  MappedAutomaton m = make_mapped(4, noiseless(), 1, 1);
  bridge_update(m, +1, 7);
  bridge_update(m, -1, 9);
  std::ostringstream os;
  const std::vector<MappedAutomaton> cells{m};
  write_pulse_log_csv(os, cells);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "sample_index,ta_index,mode,width_s,energy_J,g_before_S,g_after_S");
  std::getline(is, line);
  CHECK(line.rfind("7,4,erase,5.000000e-04,4.000000e-12,", 0) == 0);
  std::getline(is, line);
  CHECK(line.rfind("9,4,program,5.000000e-04,3.475000e-07,", 0) == 0);
}
