#include "yflash/experiments.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "yflash/errors.hpp"

namespace yflash {

namespace {

constexpr std::pair<Experiment, std::string_view> kNames[] = {
    {Experiment::Staircase, "staircase"}, {Experiment::Endurance, "endurance"}, {Experiment::D2D, "d2d"},
    {Experiment::XorMap, "xor-map"},      {Experiment::Energy, "energy"},       {Experiment::Train, "train"},
};

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

}  // namespace

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& [e, n] : kNames) {
    if (n == name) return e;
  }
  return std::nullopt;
}

std::string_view to_string(Experiment e) {
  for (const auto& [k, n] : kNames) {
    if (k == e) return n;
  }
  throw ContractViolation("unknown experiment");
}

std::vector<StaircaseRow> run_staircase(const SimConfig& cfg, std::uint64_t seed) {
  DeviceParams params = cfg.device;
  if (!cfg.staircase_noise) params.c2c_sigma = 0.0;
  YFlashCell cell(params, make_stream(seed, streams::kCells)());
  const Volts v = params.v_read;

  std::vector<StaircaseRow> rows;
  std::size_t index = 0;
  rows.push_back({index++, "initial", cell.conductance(), cell.read(v)});
  int pulses = 0;
  while (cell.state() > 0.0 && pulses++ < cfg.staircase_pulse_cap) {
    cell.program_pulse(cfg.staircase_width);
    rows.push_back({index++, "program", cell.conductance(), cell.read(v)});
  }
  pulses = 0;
  while (cell.state() < 1.0 && pulses++ < cfg.staircase_pulse_cap) {
    cell.erase_pulse(cfg.staircase_width);
    rows.push_back({index++, "erase", cell.conductance(), cell.read(v)});
  }
  return rows;
}

std::size_t program_side_states(const std::vector<StaircaseRow>& rows) {
  std::set<double> distinct;
  for (const StaircaseRow& r : rows) {
    if (r.mode != "erase") distinct.insert(r.g.value());
  }
  return distinct.size();
}

DeviceParams endurance_device(const SimConfig& cfg) {
  DeviceParams p = cfg.device;
  p.g_lcs = cfg.endurance_g_lcs;
  p.g_hcs = cfg.endurance_g_hcs;
  return p;
}

std::vector<EnduranceRecord> run_endurance(const SimConfig& cfg, std::uint64_t seed) {
  YFlashCell cell(endurance_device(cfg), make_stream(seed, streams::kCells)());
  return cycle_endurance(cell, cfg.endurance_cycles, cfg.endurance_width, cfg.endurance_pulse_cap);
}

SampleStats summarize(const std::vector<double>& xs) {
  SampleStats s;
  require(!xs.empty(), "summarize: empty sample");
  const double n = static_cast<double>(xs.size());
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.stddev = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

std::vector<D2DRow> run_d2d(const SimConfig& cfg, std::uint64_t seed) {
  Rng rng = make_stream(seed, streams::kPopulation);
  std::vector<D2DRow> rows;
  rows.reserve(cfg.d2d_devices);
  for (std::size_t i = 0; i < cfg.d2d_devices; ++i) {
    YFlashCell cell = sample_device(cfg.population, cfg.device, rng);
    program_to_lcs(cell, cfg.d2d_width, cfg.endurance_pulse_cap);
    const Siemens lcs = cell.conductance();
    erase_to_hcs(cell, cfg.d2d_width, cfg.endurance_pulse_cap);
    rows.push_back({i, lcs, cell.conductance()});
  }
  return rows;
}

std::vector<std::size_t> tracked_automata(const MachineConfig& machine, std::size_t tracked_clauses) {
  const std::size_t n_lits = 2 * machine.n_features;
  std::vector<std::size_t> out;
  // Positive clauses sit at even indices.
  for (std::size_t k = 0; k < tracked_clauses; ++k) {
    const std::size_t clause = 2 * k;
    require(clause < machine.n_clauses, "tracked_automata: not enough positive clauses");
    for (std::size_t l = 0; l < n_lits; ++l) out.push_back(clause * n_lits + l);
  }
  return out;
}

XorMapResult run_xor_map(const SimConfig& cfg, std::uint64_t seed, bool keep_trace) {
  TsetlinMachine tm(cfg.machine);
  require(cfg.machine.n_features == 2, "run_xor_map: XOR needs two features");
  Rng data_rng = make_stream(seed, streams::kDataset);
  Rng train_rng = make_stream(seed, streams::kTraining);
  Rng cell_rng = make_stream(seed, streams::kCells);
  const std::vector<Sample> data = xor_dataset(cfg.train_samples, data_rng);

  XorMapResult out;
  out.cells.reserve(tm.n_automata());
  for (std::size_t i = 0; i < tm.n_automata(); ++i) {
    out.cells.push_back(make_mapped(i, cfg.device, cell_rng(), cfg.dc_threshold, cfg.bridge_width));
  }

  MappingObserver observer;
  if (keep_trace) {
    observer = [&out](const TransitionEvent& ev, const MappedAutomaton& m, const std::optional<PulseResult>& p) {
      out.trace.push_back({ev.sample_index, ev.ta_index, ev.new_state, m.dc.value, p.has_value(), m.cell.conductance()});
    };
  }
  out.run = run_mapped_training(tm, out.cells, data, train_rng, observer);

  const ActionThreshold thr = default_action_threshold(cfg.device);
  const int n = cfg.machine.n_half;
  for (std::size_t i = 0; i < tm.n_automata(); ++i) {
    const int state = tm.automaton(i).state();
    const Action from_g = read_action(out.cells[i], thr);
    out.final_states.push_back(state);
    out.conductance_actions.push_back(from_g);
    if (state >= n + cfg.dc_threshold) {
      ++out.decided;
      if (from_g != Action::Include) ++out.disagreements;
    } else if (state <= n - cfg.dc_threshold) {
      ++out.decided;
      if (from_g != Action::Exclude) ++out.disagreements;
    }
  }
  out.tracked = tracked_automata(cfg.machine, cfg.tracked_clauses);
  for (std::size_t i : out.tracked) out.tracked_pulses += out.run.pulses_per_ta[i];
  out.accuracy = xor_accuracy(tm);
  return out;
}

TrainResult run_train(const SimConfig& cfg, std::uint64_t seed) {
  require(cfg.machine.n_features == 2, "run_train: XOR needs two features");
  TrainResult out{TsetlinMachine(cfg.machine)};
  Rng data_rng = make_stream(seed, streams::kDataset);
  Rng train_rng = make_stream(seed, streams::kTraining);
  const std::vector<Sample> data = xor_dataset(cfg.train_samples, data_rng);
  for (std::size_t s = 0; s < data.size(); ++s) {
    out.transitions += out.machine.train_step(data[s].first, data[s].second, train_rng, s).size();
  }
  out.accuracy = xor_accuracy(out.machine);
  return out;
}

std::vector<LedgerRow> run_energy(const SimConfig& cfg, std::uint64_t seed) {
  CrossbarArray array(1, 1, cfg.device, seed);
  for (std::size_t i = 0; i < cfg.energy_reads; ++i) array.read(0, 0, cfg.device.v_read);
  for (std::size_t i = 0; i < cfg.energy_program_pulses; ++i) array.program(0, 0, cfg.energy_write_width);
  for (std::size_t i = 0; i < cfg.energy_erase_pulses; ++i) array.erase(0, 0, cfg.energy_write_width);
  return ledger_report(array.ledger(), cfg.device);
}

namespace {

std::string write_staircase(const SimConfig& cfg, std::uint64_t seed, const std::filesystem::path& dir) {
  const auto rows = run_staircase(cfg, seed);
  auto out = open_output(dir / "staircase.csv");
  out << "pulse_index,mode,g_S,i_read_A\n";
  std::size_t n_prog = 0;
  std::size_t n_erase = 0;
  for (const StaircaseRow& r : rows) {
    fmt::print(out, "{},{},{:.6e},{:.6e}\n", r.pulse_index, r.mode, r.g.value(), r.i_read.value());
    n_prog += r.mode == "program";
    n_erase += r.mode == "erase";
  }
  return fmt::format(
      "staircase: {} program pulses, {} erase pulses, {} distinct program-side states\n"
      "  first g = {:.4e} S, lowest g = {:.4e} S\n",
      n_prog, n_erase, program_side_states(rows), rows.front().g.value(), rows[n_prog].g.value());
}

std::string write_endurance(const SimConfig& cfg, std::uint64_t seed, const std::filesystem::path& dir) {
  const auto rows = run_endurance(cfg, seed);
  auto out = open_output(dir / "endurance.csv");
  out << "cycle,lcs_S,hcs_S,t_program_s,t_erase_s\n";
  std::vector<double> lcs;
  std::vector<double> hcs;
  Seconds max_prog{0.0};
  Seconds max_erase{0.0};
  for (const EnduranceRecord& r : rows) {
    fmt::print(out, "{},{:.6e},{:.6e},{:.6e},{:.6e}\n", r.cycle, r.lcs.value(), r.hcs.value(), r.t_program.value(),
               r.t_erase.value());
    lcs.push_back(r.lcs.value());
    hcs.push_back(r.hcs.value());
    max_prog = std::max(max_prog, r.t_program);
    max_erase = std::max(max_erase, r.t_erase);
  }
  const SampleStats sl = summarize(lcs);
  const SampleStats sh = summarize(hcs);
  return fmt::format(
      "endurance: {} cycles\n"
      "  LCS range [{:.4e}, {:.4e}] S, HCS range [{:.4e}, {:.4e}] S\n"
      "  max program time {:.4e} s, max erase time {:.4e} s\n",
      rows.size(), sl.min, sl.max, sh.min, sh.max, max_prog.value(), max_erase.value());
}

std::string write_d2d(const SimConfig& cfg, std::uint64_t seed, const std::filesystem::path& dir) {
  const auto rows = run_d2d(cfg, seed);
  auto out = open_output(dir / "d2d.csv");
  out << "device_id,lcs_S,hcs_S\n";
  std::vector<double> lcs;
  std::vector<double> hcs;
  for (const D2DRow& r : rows) {
    fmt::print(out, "{},{:.6e},{:.6e}\n", r.device_id, r.lcs.value(), r.hcs.value());
    lcs.push_back(r.lcs.value());
    hcs.push_back(r.hcs.value());
  }
  const SampleStats sl = summarize(lcs);
  const SampleStats sh = summarize(hcs);
  return fmt::format(
      "d2d: {} devices\n"
      "  LCS mean {:.4e} S, sd {:.4e} S, range [{:.4e}, {:.4e}] S\n"
      "  HCS mean {:.4e} S, sd {:.4e} S, range [{:.4e}, {:.4e}] S\n",
      rows.size(), sl.mean, sl.stddev, sl.min, sl.max, sh.mean, sh.stddev, sh.min, sh.max);
}

std::string write_xor_map(const SimConfig& cfg, std::uint64_t seed, const std::filesystem::path& dir) {
  const XorMapResult res = run_xor_map(cfg, seed, true);
  {
    auto out = open_output(dir / "xor_map.csv");
    out << "sample_index,ta_index,ta_state,dc_value,pulse_issued,g_S\n";
    for (const XorTraceRow& r : res.trace) {
      fmt::print(out, "{},{},{},{},{},{:.6e}\n", r.sample_index, r.ta_index, r.ta_state, r.dc_value,
                 r.pulse_issued ? 1 : 0, r.g.value());
    }
  }
  {
    auto out = open_output(dir / "pulse_log.csv");
    write_pulse_log_csv(out, res.cells);
  }
  {
    auto out = open_output(dir / "xor_map_final.csv");
    out << "ta_index,tracked,ta_state,transitions,pulses,g_S,conductance_action\n";
    for (std::size_t i = 0; i < res.final_states.size(); ++i) {
      const bool tracked = std::find(res.tracked.begin(), res.tracked.end(), i) != res.tracked.end();
      fmt::print(out, "{},{},{},{},{},{:.6e},{}\n", i, tracked ? 1 : 0, res.final_states[i],
                 res.run.transitions_per_ta[i], res.run.pulses_per_ta[i], res.run.final_conductances[i].value(),
                 res.conductance_actions[i] == Action::Include ? "include" : "exclude");
    }
  }
  double g_inc_max = 0.0;
  double g_exc_min = std::numeric_limits<double>::infinity();
  std::size_t tracked_transitions = 0;
  for (std::size_t i : res.tracked) {
    const double g = res.run.final_conductances[i].value();
    tracked_transitions += res.run.transitions_per_ta[i];
    if (res.final_states[i] > cfg.machine.n_half) {
      g_inc_max = std::max(g_inc_max, g);
    } else {
      g_exc_min = std::min(g_exc_min, g);
    }
  }
  return fmt::format(
      "xor-map: {} samples, accuracy {:.2f}\n"
      "  all automata: {} transitions, {} pulses\n"
      "  tracked {} automata: {} transitions, {} pulses\n"
      "  tracked max included g = {:.4e} S, min excluded g = {:.4e} S\n"
      "  oracle agreement: {} of {} decided automata disagree -> {}\n"
      "  reads during training: {}\n",
      cfg.train_samples, res.accuracy, res.run.transition_count, res.run.pulse_count, res.tracked.size(),
      tracked_transitions, res.tracked_pulses, g_inc_max, g_exc_min, res.disagreements, res.decided,
      res.disagreements == 0 ? "agree" : "DISAGREE", res.run.reads_during_training);
}

std::string write_train(const SimConfig& cfg, std::uint64_t seed, const std::filesystem::path& dir) {
  const TrainResult res = run_train(cfg, seed);
  auto out = open_output(dir / "train.csv");
  out << "clause,literal,polarity,ta_state,action\n";
  const auto clauses = res.machine.clauses();
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    const auto automata = clauses[j].automata();
    for (std::size_t k = 0; k < automata.size(); ++k) {
      fmt::print(out, "{},{},{},{},{}\n", j, k, clauses[j].polarity(), automata[k].state(),
                 automata[k].action() == Action::Include ? "include" : "exclude");
    }
  }
  return fmt::format("train: {} samples, {} transitions, accuracy {:.2f}\n", cfg.train_samples, res.transitions,
                     res.accuracy);
}

std::string write_energy(const SimConfig& cfg, std::uint64_t seed, const std::filesystem::path& dir) {
  const auto rows = run_energy(cfg, seed);
  auto out = open_output(dir / "energy.csv");
  write_ledger_csv(out, rows);
  std::string summary = "energy:\n";
  for (const LedgerRow& r : rows) {
    summary += fmt::format("  {:<8} {:>4.1f} V  {:>4} pulses  avg power {:.3g} uW  energy/pulse {:.3g} nJ\n",
                           to_string(r.mode), r.voltage.value(), r.pulses, r.average_power.value() * 1e6,
                           r.energy_per_pulse.value() * 1e9);
  }
  return summary;
}

}  // namespace

std::string run_to_directory(Experiment e, const SimConfig& cfg, std::uint64_t seed,
                             const std::filesystem::path& out_dir) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);
  {
    auto echo = open_output(out_dir / "resolved_config.txt");
    fmt::print(echo, "# experiment = {}\n# seed = {}\n{}", to_string(e), seed, dump_config(cfg));
  }
  std::string summary;
  switch (e) {
    case Experiment::Staircase: summary = write_staircase(cfg, seed, out_dir); break;
    case Experiment::Endurance: summary = write_endurance(cfg, seed, out_dir); break;
    case Experiment::D2D: summary = write_d2d(cfg, seed, out_dir); break;
    case Experiment::XorMap: summary = write_xor_map(cfg, seed, out_dir); break;
    case Experiment::Energy: summary = write_energy(cfg, seed, out_dir); break;
    case Experiment::Train: summary = write_train(cfg, seed, out_dir); break;
  }
  auto out = open_output(out_dir / "summary.txt");
  out << summary;
  return summary;
}

}  // namespace yflash
