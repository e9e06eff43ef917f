#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "yflash/device.hpp"

namespace yflash {

class EnergyLedger {
 public:
  void record(const PulseResult& pulse);

  [[nodiscard]] std::size_t count(PulseMode mode) const { return slot(mode).count; }
  [[nodiscard]] Joules energy(PulseMode mode) const { return slot(mode).energy; }
  [[nodiscard]] Seconds time(PulseMode mode) const { return slot(mode).time; }
  [[nodiscard]] Joules total_energy() const;

 private:
  struct Slot {
    std::size_t count = 0;
    Joules energy{0.0};
    Seconds time{0.0};
  };
  [[nodiscard]] const Slot& slot(PulseMode mode) const { return slots_[static_cast<std::size_t>(mode)]; }

  Slot slots_[3];
};

struct LedgerRow {
  PulseMode mode;
  Volts voltage;
  std::size_t pulses;
  Watts average_power;
  Joules total_energy;
  Joules energy_per_pulse;
};

/// One row per mode (read, program, erase). Zero pulses give zero power
/// and energy.
[[nodiscard]] std::vector<LedgerRow> ledger_report(const EnergyLedger& ledger, const DeviceParams& params);

/// CSV: mode,voltage_V,pulses,avg_power_W,total_energy_J,energy_per_pulse_J
void write_ledger_csv(std::ostream& os, const std::vector<LedgerRow>& rows);

struct ArrayReadResult {
  Amperes selected;
  Amperes sneak_total;
};

/// Selector-free crossbar of Y-Flash cells, row-major. Drain lines run along
/// rows, source lines along columns. A read drives the selected row at
/// v_read and holds every other line at 0 V, so no unselected cell is
/// forward biased; every parasitic path into the sense column contains at
/// least one reverse-biased cell, whose leak bounds that path.
class CrossbarArray {
 public:
  CrossbarArray(std::size_t rows, std::size_t cols, const DeviceParams& params, std::uint64_t seed);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] const YFlashCell& cell(std::size_t row, std::size_t col) const;
  [[nodiscard]] const std::vector<PulseResult>& pulse_log(std::size_t row, std::size_t col) const;
  [[nodiscard]] const EnergyLedger& ledger() const { return ledger_; }

  ArrayReadResult read(std::size_t row, std::size_t col, Volts v_read);
  PulseResult program(std::size_t row, std::size_t col, Seconds width);
  PulseResult erase(std::size_t row, std::size_t col, Seconds width);

  /// Restores a cell's stored state without a pulse.
  void preset(std::size_t row, std::size_t col, double q, double jitter = 1.0);

  /// CSV: row,col,q,g_at_2V_S
  void write_snapshot(std::ostream& os) const;
  /// Reads a snapshot written by write_snapshot; dimensions must match.
  void load_snapshot(std::istream& is);

 private:
  [[nodiscard]] std::size_t index(std::size_t row, std::size_t col) const;

  std::size_t rows_;
  std::size_t cols_;
  std::vector<YFlashCell> cells_;
  std::vector<std::vector<PulseResult>> logs_;
  EnergyLedger ledger_;
};

}  // namespace yflash
