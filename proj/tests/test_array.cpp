#include <doctest.h>

#include <cmath>
#include <sstream>

#include "yflash/array.hpp"
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

TEST_CASE("1x1 read has no sneak current") {
  CrossbarArray arr(1, 1, noiseless(), 1);
  const auto r = arr.read(0, 0, 2.0_V);
  CHECK(r.selected.value() == doctest::Approx(5e-6));
  CHECK(r.sneak_total.value() == 0.0);
  CHECK(arr.ledger().count(PulseMode::Read) == 1);
}

TEST_CASE("16x16 all-HCS sneak total and margin") {
  CrossbarArray arr(16, 16, noiseless(), 1);
  const auto r = arr.read(3, 7, 2.0_V);
  // 255 unselected cells, each leaking the full 1 pA ceiling at HCS.
  CHECK(r.sneak_total.value() == doctest::Approx(255e-12));
  CHECK(r.selected / r.sneak_total == doctest::Approx(5e-6 / 255e-12));

  // Worst case: selected cell at LCS (2 nA) still dominates.
  CrossbarArray worst(16, 16, noiseless(), 2);
  worst.preset(0, 0, 0.0);
  const auto w = worst.read(0, 0, 2.0_V);
  CHECK(w.selected.value() == doctest::Approx(2e-9));
  CHECK(w.sneak_total.value() <= 255e-12 * (1 + 1e-12));
  CHECK(w.selected / w.sneak_total > 7.0);
}

TEST_CASE("sneak bound over random states") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng() % 8;
    const std::size_t cols = 1 + rng() % 8;
    CrossbarArray arr(rows, cols, DeviceParams{}, rng());
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) arr.preset(r, c, uniform01(rng), 1.0 + 0.05 * uniform01(rng));
    }
    const auto res = arr.read(rng() % rows, rng() % cols, 2.0_V);
    CHECK(res.sneak_total.value() <= static_cast<double>(rows * cols - 1) * 1e-12 * (1 + 1e-12));
  }
}

TEST_CASE("reads never alter any cell and writes stay local") {
  CrossbarArray arr(4, 5, DeviceParams{}, 3);
  arr.program(1, 1, 200_us);
  arr.program(2, 3, 200_us);
  std::vector<double> q;
  std::vector<double> j;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 5; ++c) {
      q.push_back(arr.cell(r, c).state());
      j.push_back(arr.cell(r, c).jitter());
    }
  }
  for (int i = 0; i < 10; ++i) arr.read(i % 4, i % 5, 2.0_V);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 5; ++c) {
      CHECK(arr.cell(r, c).state() == q[r * 5 + c]);
      CHECK(arr.cell(r, c).jitter() == j[r * 5 + c]);
    }
  }
  arr.erase(1, 1, 200_us);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 5; ++c) {
      if (r == 1 && c == 1) continue;
      CHECK(arr.cell(r, c).state() == q[r * 5 + c]);
    }
  }
}

TEST_CASE("out-of-bounds addresses throw") {
  CrossbarArray arr(2, 2, DeviceParams{}, 1);
  CHECK_THROWS_AS(arr.read(2, 0, 2.0_V), ContractViolation);
  CHECK_THROWS_AS(arr.program(0, 2, 200_us), ContractViolation);
  CHECK_THROWS_AS(CrossbarArray(0, 2, DeviceParams{}, 1), ContractViolation);
}

TEST_CASE("ledger report reproduces the per-mode energies") {
  CrossbarArray arr(1, 1, noiseless(), 1);
  for (int i = 0; i < 40; ++i) arr.program(0, 0, 200_us);
  for (int i = 0; i < 32; ++i) arr.erase(0, 0, 200_us);
  const auto rows = ledger_report(arr.ledger(), arr.cell(0, 0).params());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].pulses == 0);
  CHECK(rows[0].total_energy.value() == 0.0);
  CHECK(rows[0].average_power.value() == 0.0);
  CHECK(rows[1].pulses == 40);
  CHECK(rows[1].total_energy.value() == doctest::Approx(5.56e-6));
  CHECK(rows[1].energy_per_pulse.value() == doctest::Approx(139e-9));
  CHECK(rows[1].average_power.value() == doctest::Approx(695e-6));
  CHECK(rows[1].voltage.value() == 5.0);
  CHECK(rows[2].pulses == 32);
  CHECK(rows[2].total_energy.value() == doctest::Approx(51.2e-15));
  CHECK(rows[2].voltage.value() == 8.0);
}

TEST_CASE("empty ledger reports zeros") {
  const EnergyLedger ledger;
  for (const LedgerRow& r : ledger_report(ledger, DeviceParams{})) {
    CHECK(r.pulses == 0);
    CHECK(r.total_energy.value() == 0.0);
    CHECK(r.energy_per_pulse.value() == 0.0);
  }
}

TEST_CASE("ledger totals equal the per-cell pulse logs") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    CrossbarArray arr(3, 3, DeviceParams{}, rng());
    for (int i = 0; i < 60; ++i) {
      const std::size_t r = rng() % 3;
      const std::size_t c = rng() % 3;
      switch (rng() % 3) {
        case 0: arr.read(r, c, 2.0_V); break;
        case 1: arr.program(r, c, Seconds(1e-5 + 1e-3 * uniform01(rng))); break;
        default: arr.erase(r, c, Seconds(1e-5 + 1e-3 * uniform01(rng))); break;
      }
    }
    for (PulseMode m : {PulseMode::Read, PulseMode::Program, PulseMode::Erase}) {
      double e = 0.0;
      std::size_t n = 0;
      for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
          for (const auto& p : arr.pulse_log(r, c)) {
            if (p.mode != m) continue;
            e += p.energy.value();
            ++n;
          }
        }
      }
      CHECK(arr.ledger().count(m) == n);
      CHECK(arr.ledger().energy(m).value() == doctest::Approx(e).epsilon(1e-12));
    }
  }
}

TEST_CASE("snapshot export and import restore every cell") {
  CrossbarArray a(3, 4, DeviceParams{}, 11);
  Rng rng(2);
  for (int i = 0; i < 30; ++i) {
    if (rng() & 1) {
      a.program(rng() % 3, rng() % 4, 200_us);
    } else {
      a.erase(rng() % 3, rng() % 4, 100_us);
    }
  }
  std::stringstream ss;
  a.write_snapshot(ss);
  CrossbarArray b(3, 4, DeviceParams{}, 99);
  b.load_snapshot(ss);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK(b.cell(r, c).state() == a.cell(r, c).state());
      CHECK(b.cell(r, c).conductance().value() == doctest::Approx(a.cell(r, c).conductance().value()).epsilon(1e-14));
    }
  }

  std::stringstream bad("row,col,q,g_at_2V_S\n0,0,0.5,1e-8\n");
  CHECK_THROWS_AS(b.load_snapshot(bad), ConfigError);
  std::stringstream wrong_header("r,c,q,g\n");
  CHECK_THROWS_AS(b.load_snapshot(wrong_header), ConfigError);
  std::stringstream out_of_range("row,col,q,g_at_2V_S\n5,0,0.5,1e-8\n");
  CHECK_THROWS_AS(b.load_snapshot(out_of_range), ConfigError);
}
