#include "yflash/array.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "yflash/errors.hpp"
#include "yflash/random.hpp"

namespace yflash {

void EnergyLedger::record(const PulseResult& pulse) {
  Slot& s = slots_[static_cast<std::size_t>(pulse.mode)];
  ++s.count;
  s.energy += pulse.energy;
  s.time += pulse.width;
}

Joules EnergyLedger::total_energy() const {
  return slots_[0].energy + slots_[1].energy + slots_[2].energy;
}

std::vector<LedgerRow> ledger_report(const EnergyLedger& ledger, const DeviceParams& params) {
  std::vector<LedgerRow> rows;
  for (PulseMode mode : {PulseMode::Read, PulseMode::Program, PulseMode::Erase}) {
    const std::size_t n = ledger.count(mode);
    const Joules e = ledger.energy(mode);
    const Volts v = mode == PulseMode::Read ? params.v_read : mode == PulseMode::Program ? params.v_program : params.v_erase;
    LedgerRow row{mode, v, n, Watts(0.0), e, Joules(0.0)};
    if (n > 0) {
      row.average_power = e / ledger.time(mode);
      row.energy_per_pulse = e / static_cast<double>(n);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_ledger_csv(std::ostream& os, const std::vector<LedgerRow>& rows) {
  os << "mode,voltage_V,pulses,avg_power_W,total_energy_J,energy_per_pulse_J\n";
  for (const LedgerRow& r : rows) {
    fmt::print(os, "{},{:.6e},{},{:.6e},{:.6e},{:.6e}\n", to_string(r.mode), r.voltage.value(), r.pulses,
               r.average_power.value(), r.total_energy.value(), r.energy_per_pulse.value());
  }
}

CrossbarArray::CrossbarArray(std::size_t rows, std::size_t cols, const DeviceParams& params, std::uint64_t seed)
    : rows_(rows), cols_(cols), logs_(rows * cols) {
  require(rows > 0 && cols > 0, "CrossbarArray: dimensions must be positive");
  cells_.reserve(rows * cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    Rng stream = make_stream(seed, i);
    cells_.emplace_back(params, stream());
  }
}

std::size_t CrossbarArray::index(std::size_t row, std::size_t col) const {
  if (row >= rows_ || col >= cols_) {
    throw ContractViolation(fmt::format("crossbar address ({}, {}) outside {}x{}", row, col, rows_, cols_));
  }
  return row * cols_ + col;
}

const YFlashCell& CrossbarArray::cell(std::size_t row, std::size_t col) const { return cells_[index(row, col)]; }

const std::vector<PulseResult>& CrossbarArray::pulse_log(std::size_t row, std::size_t col) const {
  return logs_[index(row, col)];
}

ArrayReadResult CrossbarArray::read(std::size_t row, std::size_t col, Volts v_read) {
  const std::size_t target = index(row, col);
  const YFlashCell& sel = cells_[target];
  ArrayReadResult out{sel.read(v_read), Amperes(0.0)};
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (i == target) continue;
    out.sneak_total += abs(cells_[i].read(-v_read));
  }
  const Siemens g = sel.conductance();
  const PulseResult pulse{PulseMode::Read, sel.params().read_pulse_width,
                          energy_of_pulse(PulseMode::Read, sel.params().read_pulse_width, sel.params().power), g, g};
  logs_[target].push_back(pulse);
  ledger_.record(pulse);
  return out;
}

PulseResult CrossbarArray::program(std::size_t row, std::size_t col, Seconds width) {
  const std::size_t i = index(row, col);
  const PulseResult pulse = cells_[i].program_pulse(width);
  logs_[i].push_back(pulse);
  ledger_.record(pulse);
  return pulse;
}

PulseResult CrossbarArray::erase(std::size_t row, std::size_t col, Seconds width) {
  const std::size_t i = index(row, col);
  const PulseResult pulse = cells_[i].erase_pulse(width);
  logs_[i].push_back(pulse);
  ledger_.record(pulse);
  return pulse;
}

void CrossbarArray::preset(std::size_t row, std::size_t col, double q, double jitter) {
  cells_[index(row, col)].preset(q, jitter);
}

void CrossbarArray::write_snapshot(std::ostream& os) const {
  os << "row,col,q,g_at_2V_S\n";
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const YFlashCell& cell = cells_[r * cols_ + c];
      fmt::print(os, "{},{},{:.17e},{:.17e}\n", r, c, cell.state(), cell.conductance().value());
    }
  }
}

void CrossbarArray::load_snapshot(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "row,col,q,g_at_2V_S") {
    throw ConfigError("array snapshot: missing or unexpected header");
  }
  std::vector<bool> seen(cells_.size(), false);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::size_t r = 0;
    std::size_t c = 0;
    double q = 0.0;
    double g = 0.0;
    char comma[3] = {};
    if (!(fields >> r >> comma[0] >> c >> comma[1] >> q >> comma[2] >> g) || comma[0] != ',' || comma[1] != ',' ||
        comma[2] != ',') {
      throw ConfigError(fmt::format("array snapshot: malformed line {}", lineno));
    }
    if (r >= rows_ || c >= cols_) throw ConfigError(fmt::format("array snapshot: address out of range on line {}", lineno));
    const std::size_t i = r * cols_ + c;
    if (q < 0.0 || q > 1.0 || !(g > 0.0)) throw ConfigError(fmt::format("array snapshot: bad state on line {}", lineno));
    // The stored conductance carries the cell's write jitter.
    const double jitter = g / nominal_conductance(cells_[i].params(), q).value();
    cells_[i].preset(q, jitter);
    seen[i] = true;
  }
  for (bool s : seen) {
    if (!s) throw ConfigError("array snapshot: not every cell is listed");
  }
}

}  // namespace yflash
