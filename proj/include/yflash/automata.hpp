#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "yflash/random.hpp"

namespace yflash {

enum class Action : std::uint8_t { Exclude, Include };
enum class Feedback : std::uint8_t { Reward, Penalty };
enum class ClauseMode : std::uint8_t { Train, Infer };

/// Two-action Tsetlin automaton with states 1..2N. States 1..N select
/// Exclude, N+1..2N select Include. Transitions saturate at both ends.
class TsetlinAutomaton {
 public:
  explicit TsetlinAutomaton(int n_half);
  TsetlinAutomaton(int n_half, int state);

  [[nodiscard]] int state() const { return state_; }
  [[nodiscard]] int n_half() const { return n_half_; }
  [[nodiscard]] Action action() const { return state_ > n_half_ ? Action::Include : Action::Exclude; }

  /// Reward deepens the current action, penalty moves toward (and across)
  /// the boundary. Returns the signed state change (-1, 0 or +1).
  int step(Feedback fb);

 private:
  int n_half_;
  int state_;
};

[[nodiscard]] TsetlinAutomaton ta_step(TsetlinAutomaton ta, Feedback fb);

using BitVector = std::vector<std::uint8_t>;

/// Conjunction over literals [x_0..x_{F-1}, !x_0..!x_{F-1}], one automaton
/// per literal.
class Clause {
 public:
  Clause(int polarity, std::size_t n_features, int n_half);

  [[nodiscard]] int polarity() const { return polarity_; }
  [[nodiscard]] std::size_t n_literals() const { return automata_.size(); }
  [[nodiscard]] std::span<const TsetlinAutomaton> automata() const { return automata_; }
  [[nodiscard]] std::span<TsetlinAutomaton> automata() { return automata_; }

  [[nodiscard]] bool evaluate(std::span<const std::uint8_t> literals, ClauseMode mode) const;

 private:
  int polarity_;
  std::vector<TsetlinAutomaton> automata_;
};

/// Expands features into the literal vector [x, !x].
[[nodiscard]] BitVector make_literals(std::span<const std::uint8_t> features);

struct TransitionEvent {
  std::size_t ta_index;
  int old_state;
  int new_state;
  std::size_t sample_index;
};

struct MachineConfig {
  std::size_t n_features = 2;
  std::size_t n_clauses = 8;
  int threshold = 2;
  double specificity = 3.9;
  int n_half = 150;
};

/// Single-output Tsetlin machine with alternating clause polarity
/// (even clause index +1, odd -1) and Type I / Type II feedback.
///
/// Automata are addressed by a flat index clause * n_literals + literal.
class TsetlinMachine {
 public:
  explicit TsetlinMachine(const MachineConfig& cfg);

  [[nodiscard]] const MachineConfig& config() const { return cfg_; }
  [[nodiscard]] std::span<const Clause> clauses() const { return clauses_; }
  [[nodiscard]] std::size_t n_literals() const { return 2 * cfg_.n_features; }
  [[nodiscard]] std::size_t n_automata() const { return clauses_.size() * n_literals(); }
  [[nodiscard]] const TsetlinAutomaton& automaton(std::size_t flat_index) const;
  void set_state(std::size_t flat_index, int state);

  /// Sum of polarity * clause output (unclamped).
  [[nodiscard]] int class_sum(std::span<const std::uint8_t> features, ClauseMode mode) const;

  /// One feedback round. Returns one event per automaton whose state changed.
  std::vector<TransitionEvent> train_step(std::span<const std::uint8_t> features, bool label, Rng& rng,
                                          std::size_t sample_index = 0);

  [[nodiscard]] bool infer(std::span<const std::uint8_t> features) const;

 private:
  MachineConfig cfg_;
  std::vector<Clause> clauses_;
};

using Sample = std::pair<BitVector, bool>;

/// Uniform 2-bit inputs labelled x1 XOR x2.
[[nodiscard]] std::vector<Sample> xor_dataset(std::size_t n_samples, Rng& rng);

/// Fraction of the four XOR truth-table rows classified correctly.
[[nodiscard]] double xor_accuracy(const TsetlinMachine& tm);

}  // namespace yflash
