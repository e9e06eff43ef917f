#include "yflash/automata.hpp"

#include <algorithm>
#include <string>

#include "yflash/errors.hpp"

namespace yflash {

TsetlinAutomaton::TsetlinAutomaton(int n_half) : TsetlinAutomaton(n_half, n_half) {}

TsetlinAutomaton::TsetlinAutomaton(int n_half, int state) : n_half_(n_half), state_(state) {
  require(n_half >= 1, "TsetlinAutomaton: n_half must be >= 1");
  require(state >= 1 && state <= 2 * n_half, "TsetlinAutomaton: state out of [1, 2N]");
}

int TsetlinAutomaton::step(Feedback fb) {
  const int old = state_;
  const bool include = action() == Action::Include;
  // +1 moves toward Include, -1 toward Exclude.
  const int toward_include = (fb == Feedback::Reward) == include ? 1 : -1;
  state_ = std::clamp(state_ + toward_include, 1, 2 * n_half_);
  return state_ - old;
}

TsetlinAutomaton ta_step(TsetlinAutomaton ta, Feedback fb) {
  ta.step(fb);
  return ta;
}

Clause::Clause(int polarity, std::size_t n_features, int n_half)
    : polarity_(polarity), automata_(2 * n_features, TsetlinAutomaton(n_half)) {
  require(polarity == 1 || polarity == -1, "Clause: polarity must be +1 or -1");
  require(n_features > 0, "Clause: need at least one feature");
}

bool Clause::evaluate(std::span<const std::uint8_t> literals, ClauseMode mode) const {
  require(literals.size() == automata_.size(),
          "Clause::evaluate: expected " + std::to_string(automata_.size()) + " literals, got " +
              std::to_string(literals.size()));
  bool any_included = false;
  for (std::size_t k = 0; k < automata_.size(); ++k) {
    if (automata_[k].action() != Action::Include) continue;
    any_included = true;
    if (literals[k] == 0) return false;
  }
  return any_included || mode == ClauseMode::Train;
}

BitVector make_literals(std::span<const std::uint8_t> features) {
  BitVector lits(2 * features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    lits[i] = features[i] ? 1 : 0;
    lits[i + features.size()] = features[i] ? 0 : 1;
  }
  return lits;
}

TsetlinMachine::TsetlinMachine(const MachineConfig& cfg) : cfg_(cfg) {
  require(cfg.n_features > 0, "TsetlinMachine: n_features must be > 0");
  require(cfg.n_clauses > 0 && cfg.n_clauses % 2 == 0, "TsetlinMachine: n_clauses must be positive and even");
  require(cfg.threshold > 0, "TsetlinMachine: threshold T must be > 0");
  require(cfg.specificity > 1.0, "TsetlinMachine: specificity s must be > 1");
  require(cfg.n_half >= 1, "TsetlinMachine: n_half must be >= 1");
  clauses_.reserve(cfg.n_clauses);
  for (std::size_t j = 0; j < cfg.n_clauses; ++j) {
    clauses_.emplace_back(j % 2 == 0 ? 1 : -1, cfg.n_features, cfg.n_half);
  }
}

const TsetlinAutomaton& TsetlinMachine::automaton(std::size_t flat_index) const {
  require(flat_index < n_automata(), "TsetlinMachine: automaton index out of range");
  return clauses_[flat_index / n_literals()].automata()[flat_index % n_literals()];
}

void TsetlinMachine::set_state(std::size_t flat_index, int state) {
  require(flat_index < n_automata(), "TsetlinMachine: automaton index out of range");
  clauses_[flat_index / n_literals()].automata()[flat_index % n_literals()] = TsetlinAutomaton(cfg_.n_half, state);
}

int TsetlinMachine::class_sum(std::span<const std::uint8_t> features, ClauseMode mode) const {
  require(features.size() == cfg_.n_features, "TsetlinMachine: feature length mismatch");
  const BitVector lits = make_literals(features);
  int sum = 0;
  for (const Clause& c : clauses_) {
    if (c.evaluate(lits, mode)) sum += c.polarity();
  }
  return sum;
}

std::vector<TransitionEvent> TsetlinMachine::train_step(std::span<const std::uint8_t> features, bool label, Rng& rng,
                                                        std::size_t sample_index) {
  require(features.size() == cfg_.n_features, "TsetlinMachine: feature length mismatch");
  const BitVector lits = make_literals(features);
  const std::size_t n_lits = lits.size();

  std::vector<std::uint8_t> outputs(clauses_.size());
  int v = 0;
  for (std::size_t j = 0; j < clauses_.size(); ++j) {
    outputs[j] = clauses_[j].evaluate(lits, ClauseMode::Train) ? 1 : 0;
    if (outputs[j]) v += clauses_[j].polarity();
  }
  const int T = cfg_.threshold;
  v = std::clamp(v, -T, T);
  const double p_feedback = label ? static_cast<double>(T - v) / (2.0 * T) : static_cast<double>(T + v) / (2.0 * T);
  const double p_strong = (cfg_.specificity - 1.0) / cfg_.specificity;
  const double p_weak = 1.0 / cfg_.specificity;

  std::vector<TransitionEvent> events;
  for (std::size_t j = 0; j < clauses_.size(); ++j) {
    if (uniform01(rng) >= p_feedback) continue;
    Clause& clause = clauses_[j];
    const bool type_one = (clause.polarity() == 1) == label;
    auto automata = clause.automata();
    for (std::size_t k = 0; k < n_lits; ++k) {
      TsetlinAutomaton& ta = automata[k];
      const int old = ta.state();
      if (type_one) {
        if (outputs[j] && lits[k]) {
          // Type Ia: reinforce Include for a true literal in a firing clause.
          if (uniform01(rng) < p_strong) {
            ta.step(ta.action() == Action::Include ? Feedback::Reward : Feedback::Penalty);
          }
        } else if (uniform01(rng) < p_weak) {
          // Type Ib: drift toward Exclude.
          ta.step(ta.action() == Action::Include ? Feedback::Penalty : Feedback::Reward);
        }
      } else if (outputs[j] && !lits[k] && ta.action() == Action::Exclude) {
        // Type II: include a false literal to block the false positive.
        ta.step(Feedback::Penalty);
      }
      if (ta.state() != old) events.push_back({j * n_lits + k, old, ta.state(), sample_index});
    }
  }
  return events;
}

bool TsetlinMachine::infer(std::span<const std::uint8_t> features) const {
  return class_sum(features, ClauseMode::Infer) >= 0;
}

std::vector<Sample> xor_dataset(std::size_t n_samples, Rng& rng) {
  require(n_samples > 0, "xor_dataset: n_samples must be > 0");
  std::vector<Sample> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const std::uint8_t x1 = static_cast<std::uint8_t>(rng() >> 63);
    const std::uint8_t x2 = static_cast<std::uint8_t>(rng() >> 63);
    out.emplace_back(BitVector{x1, x2}, (x1 ^ x2) != 0);
  }
  return out;
}

double xor_accuracy(const TsetlinMachine& tm) {
  require(tm.config().n_features == 2, "xor_accuracy: machine must have two features");
  int correct = 0;
  for (std::uint8_t x1 = 0; x1 < 2; ++x1) {
    for (std::uint8_t x2 = 0; x2 < 2; ++x2) {
      const BitVector in{x1, x2};
      if (tm.infer(in) == ((x1 ^ x2) != 0)) ++correct;
    }
  }
  return correct / 4.0;
}

}  // namespace yflash
