#include "yflash/device.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "yflash/errors.hpp"

namespace yflash {

namespace {

// Charge states within this distance of a rail snap onto it, so that k
// equal steps of 1/k land exactly on the rail.
constexpr double kRailSnap = 1e-9;

}  // namespace

std::string_view to_string(PulseMode mode) {
  switch (mode) {
    case PulseMode::Read: return "read";
    case PulseMode::Program: return "program";
    case PulseMode::Erase: return "erase";
  }
  throw ContractViolation("unknown pulse mode");
}

Watts mode_power(PulseMode mode, const ModePowers& powers) {
  switch (mode) {
    case PulseMode::Read: return powers.read;
    case PulseMode::Program: return powers.program;
    case PulseMode::Erase: return powers.erase;
  }
  throw ContractViolation("unknown pulse mode");
}

Joules energy_of_pulse(PulseMode mode, Seconds width, const ModePowers& powers) {
  require(width > Seconds(0.0), "energy_of_pulse: width must be > 0");
  return mode_power(mode, powers) * width;
}

StepCalibration::StepCalibration(std::vector<StepAnchor> anchors) : anchors_(std::move(anchors)) {
  if (anchors_.size() < 2) throw ConfigError("step calibration needs at least two anchors");
  std::sort(anchors_.begin(), anchors_.end(), [](const StepAnchor& a, const StepAnchor& b) { return a.width < b.width; });
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    if (!(anchors_[i].width > Seconds(0.0)) || !(anchors_[i].steps > 0.0)) {
      throw ConfigError("step calibration anchors must have positive width and steps");
    }
    if (i > 0) {
      if (anchors_[i].width == anchors_[i - 1].width) throw ConfigError("step calibration: duplicate anchor width");
      if (anchors_[i].steps > anchors_[i - 1].steps) {
        throw ConfigError("step calibration: steps must be non-increasing in pulse width");
      }
    }
  }
}

double StepCalibration::steps(Seconds width) const {
  require(width > Seconds(0.0), "StepCalibration::steps: width must be > 0");
  const double lw = std::log(width.value());
  std::size_t hi = 1;
  while (hi + 1 < anchors_.size() && anchors_[hi].width < width) ++hi;
  const StepAnchor& a = anchors_[hi - 1];
  const StepAnchor& b = anchors_[hi];
  const double la = std::log(a.width.value());
  const double lb = std::log(b.width.value());
  const double t = (lw - la) / (lb - la);
  return std::exp(std::log(a.steps) + t * (std::log(b.steps) - std::log(a.steps)));
}

void DeviceParams::validate() const {
  if (!(g_lcs > Siemens(0.0))) throw ConfigError("g_lcs must be > 0");
  if (!(g_lcs < g_hcs)) throw ConfigError("g_lcs must be < g_hcs");
  if (!(v_read > Volts(0.0))) throw ConfigError("v_read must be > 0");
  if (!(v_read < v_program_threshold)) throw ConfigError("v_read must stay below the program threshold");
  if (!(read_pulse_width > Seconds(0.0))) throw ConfigError("read_pulse_width must be > 0");
  if (c2c_sigma < 0.0 || c2c_clip < 0.0) throw ConfigError("c2c_sigma and c2c_clip must be >= 0");
  if (program_degradation < 0.0 || erase_degradation < 0.0) throw ConfigError("degradation rates must be >= 0");
  if (reverse_leak_ceiling < Amperes(0.0)) throw ConfigError("reverse_leak_ceiling must be >= 0");
}

double DeviceParams::c2c_tolerance() const { return std::expm1(c2c_sigma * c2c_clip); }

Siemens nominal_conductance(const DeviceParams& params, double q) {
  return params.g_lcs * std::pow(params.g_hcs / params.g_lcs, q);
}

double state_for_conductance(const DeviceParams& params, Siemens g) {
  require(g > Siemens(0.0), "state_for_conductance: g must be > 0");
  const double q = std::log(g / params.g_lcs) / std::log(params.g_hcs / params.g_lcs);
  return std::clamp(q, 0.0, 1.0);
}

YFlashCell::YFlashCell(DeviceParams params, std::uint64_t seed) : params_(std::move(params)), rng_(seed) {
  params_.validate();
}

Siemens YFlashCell::conductance() const { return nominal_conductance(params_, q_) * jitter_; }

Amperes YFlashCell::read(Volts v) const {
  if (abs(v) > params_.v_program_threshold) {
    throw ReadDisturbError("read bias " + std::to_string(v.value()) + " V exceeds the program threshold");
  }
  ++reads_;
  const Siemens g = conductance();
  if (v >= Volts(0.0)) return g * v;
  const double fraction = std::min(1.0, g / params_.g_hcs);
  return -(params_.reverse_leak_ceiling * fraction);
}

void YFlashCell::resample_jitter() {
  if (params_.c2c_sigma == 0.0) {
    jitter_ = 1.0;
    return;
  }
  const double z = std::clamp(standard_normal(rng_), -params_.c2c_clip, params_.c2c_clip);
  jitter_ = std::exp(params_.c2c_sigma * z);
}

PulseResult YFlashCell::program_pulse(Seconds width) {
  require(width > Seconds(0.0), "program_pulse: width must be > 0");
  const Siemens before = conductance();
  const double dq = 1.0 / (params_.program_steps.steps(width) * (1.0 + params_.program_degradation * cycle_count_));
  q_ -= dq;
  if (q_ < kRailSnap) q_ = 0.0;
  if (q_ == 0.0) reached_lcs_ = true;
  resample_jitter();
  return {PulseMode::Program, width, energy_of_pulse(PulseMode::Program, width, params_.power), before, conductance()};
}

PulseResult YFlashCell::erase_pulse(Seconds width) {
  require(width > Seconds(0.0), "erase_pulse: width must be > 0");
  const Siemens before = conductance();
  const double dq = 1.0 / (params_.erase_steps.steps(width) * (1.0 + params_.erase_degradation * cycle_count_));
  q_ += dq;
  if (q_ > 1.0 - kRailSnap) q_ = 1.0;
  if (q_ == 1.0 && reached_lcs_) {
    ++cycle_count_;
    reached_lcs_ = false;
  }
  resample_jitter();
  return {PulseMode::Erase, width, energy_of_pulse(PulseMode::Erase, width, params_.power), before, conductance()};
}

void YFlashCell::preset(double q, double jitter) {
  require(q >= 0.0 && q <= 1.0, "YFlashCell::preset: q must lie in [0, 1]");
  require(jitter > 0.0, "YFlashCell::preset: jitter must be > 0");
  q_ = q;
  jitter_ = jitter;
  reached_lcs_ = (q == 0.0);
}

void PopulationParams::validate() const {
  if (lcs_sigma < Siemens(0.0) || hcs_sigma < Siemens(0.0)) throw ConfigError("population sigmas must be >= 0");
  if (!(lcs_mean > Siemens(0.0)) || !(hcs_mean > Siemens(0.0))) throw ConfigError("population means must be > 0");
  if (!(lcs_mean + 4.0 * lcs_sigma < hcs_mean - 4.0 * hcs_sigma)) {
    throw ConfigError("population LCS and HCS 4-sigma envelopes overlap");
  }
}

namespace {

Siemens positive_normal(Siemens mean, Siemens sigma, Rng& rng) {
  if (sigma == Siemens(0.0)) return mean;
  for (;;) {
    const Siemens g = mean + sigma * standard_normal(rng);
    if (g > Siemens(0.0)) return g;
  }
}

}  // namespace

YFlashCell sample_device(const PopulationParams& pop, const DeviceParams& base, Rng& rng) {
  pop.validate();
  DeviceParams p = base;
  p.g_lcs = positive_normal(pop.lcs_mean, pop.lcs_sigma, rng);
  p.g_hcs = positive_normal(pop.hcs_mean, pop.hcs_sigma, rng);
  return YFlashCell(std::move(p), rng());
}

int program_to_lcs(YFlashCell& cell, Seconds width, int pulse_cap) {
  int pulses = 0;
  while (cell.state() > 0.0) {
    if (pulses == pulse_cap) {
      throw EnduranceFailure("cell did not reach LCS within " + std::to_string(pulse_cap) + " program pulses");
    }
    cell.program_pulse(width);
    ++pulses;
  }
  return pulses;
}

int erase_to_hcs(YFlashCell& cell, Seconds width, int pulse_cap) {
  int pulses = 0;
  while (cell.state() < 1.0) {
    if (pulses == pulse_cap) {
      throw EnduranceFailure("cell did not reach HCS within " + std::to_string(pulse_cap) + " erase pulses");
    }
    cell.erase_pulse(width);
    ++pulses;
  }
  return pulses;
}

std::vector<EnduranceRecord> cycle_endurance(YFlashCell& cell, int n_cycles, Seconds width, int pulse_cap) {
  require(n_cycles >= 1, "cycle_endurance: n_cycles must be >= 1");
  require(pulse_cap >= 1, "cycle_endurance: pulse_cap must be >= 1");
  std::vector<EnduranceRecord> out;
  out.reserve(static_cast<std::size_t>(n_cycles));
  for (int c = 0; c < n_cycles; ++c) {
    const int n_prog = program_to_lcs(cell, width, pulse_cap);
    const Siemens lcs = cell.conductance();
    const int n_erase = erase_to_hcs(cell, width, pulse_cap);
    const Siemens hcs = cell.conductance();
    out.push_back({c + 1, lcs, hcs, width * n_prog, width * n_erase});
  }
  return out;
}

}  // namespace yflash
