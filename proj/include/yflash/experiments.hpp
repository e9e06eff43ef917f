#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "yflash/array.hpp"
#include "yflash/bridge.hpp"
#include "yflash/config.hpp"

namespace yflash {

enum class Experiment : std::uint8_t { Staircase, Endurance, D2D, XorMap, Energy, Train };

[[nodiscard]] std::optional<Experiment> parse_experiment(std::string_view name);
[[nodiscard]] std::string_view to_string(Experiment e);

// Random streams used by the experiments, keyed off the run seed.
namespace streams {
inline constexpr std::uint64_t kDataset = 0;
inline constexpr std::uint64_t kTraining = 1;
inline constexpr std::uint64_t kCells = 2;
inline constexpr std::uint64_t kPopulation = 3;
}  // namespace streams

// --- staircase -----------------------------------------------------------

struct StaircaseRow {
  std::size_t pulse_index;
  std::string_view mode;  // "initial", "program" or "erase"
  Siemens g;
  Amperes i_read;
};

/// Fresh erased cell, program pulses until LCS, then erase pulses back to
/// HCS. Row 0 is the initial state.
[[nodiscard]] std::vector<StaircaseRow> run_staircase(const SimConfig& cfg, std::uint64_t seed);

/// Number of distinct conductances among the initial row and the program rows.
[[nodiscard]] std::size_t program_side_states(const std::vector<StaircaseRow>& rows);

// --- endurance -----------------------------------------------------------

[[nodiscard]] DeviceParams endurance_device(const SimConfig& cfg);
[[nodiscard]] std::vector<EnduranceRecord> run_endurance(const SimConfig& cfg, std::uint64_t seed);

// --- device-to-device ----------------------------------------------------

struct D2DRow {
  std::size_t device_id;
  Siemens lcs;
  Siemens hcs;
};

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  double min = 0.0;
  double max = 0.0;
};

[[nodiscard]] SampleStats summarize(const std::vector<double>& xs);

[[nodiscard]] std::vector<D2DRow> run_d2d(const SimConfig& cfg, std::uint64_t seed);

// --- mapped XOR training -------------------------------------------------

struct XorTraceRow {
  std::size_t sample_index;
  std::size_t ta_index;
  int ta_state;
  int dc_value;
  bool pulse_issued;
  Siemens g;
};

struct XorMapResult {
  MappedRunResult run;
  std::vector<int> final_states;
  std::vector<Action> conductance_actions;
  std::vector<std::size_t> tracked;
  std::size_t tracked_pulses = 0;
  double accuracy = 0.0;
  // Automata at least dc_threshold states from the boundary whose
  // conductance readout disagrees with the software action.
  std::size_t disagreements = 0;
  std::size_t decided = 0;
  std::vector<XorTraceRow> trace;
  std::vector<MappedAutomaton> cells;
};

/// Flat automaton indices of the first `tracked_clauses` positive clauses.
[[nodiscard]] std::vector<std::size_t> tracked_automata(const MachineConfig& machine, std::size_t tracked_clauses);

[[nodiscard]] XorMapResult run_xor_map(const SimConfig& cfg, std::uint64_t seed, bool keep_trace = true);

// --- software-only training ---------------------------------------------

struct TrainResult {
  TsetlinMachine machine;
  std::size_t transitions = 0;
  double accuracy = 0.0;
};

[[nodiscard]] TrainResult run_train(const SimConfig& cfg, std::uint64_t seed);

// --- energy --------------------------------------------------------------

[[nodiscard]] std::vector<LedgerRow> run_energy(const SimConfig& cfg, std::uint64_t seed);

/// Runs one experiment and writes its CSV artifacts, a summary and the
/// resolved configuration into out_dir. Returns the summary text.
std::string run_to_directory(Experiment e, const SimConfig& cfg, std::uint64_t seed,
                             const std::filesystem::path& out_dir);

}  // namespace yflash
