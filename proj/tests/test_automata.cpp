#include <doctest.h>

#include <cstdlib>
#include <vector>

#include "yflash/automata.hpp"
#include "yflash/errors.hpp"

using namespace yflash;

TEST_CASE("ta_step moves one state and saturates") {
  CHECK(ta_step(TsetlinAutomaton(150, 150), Feedback::Reward).state() == 149);
  CHECK(ta_step(TsetlinAutomaton(150, 150), Feedback::Penalty).state() == 151);
  CHECK(ta_step(TsetlinAutomaton(150, 1), Feedback::Reward).state() == 1);
  CHECK(ta_step(TsetlinAutomaton(150, 300), Feedback::Reward).state() == 300);
  CHECK(ta_step(TsetlinAutomaton(150, 151), Feedback::Penalty).state() == 150);
  CHECK(ta_step(TsetlinAutomaton(150, 151), Feedback::Reward).state() == 152);
}

TEST_CASE("action boundary sits between N and N+1") {
  CHECK(TsetlinAutomaton(150, 150).action() == Action::Exclude);
  CHECK(TsetlinAutomaton(150, 151).action() == Action::Include);
  CHECK(TsetlinAutomaton(150).state() == 150);
  CHECK_THROWS_AS(TsetlinAutomaton(150, 0), ContractViolation);
  CHECK_THROWS_AS(TsetlinAutomaton(150, 301), ContractViolation);
}

TEST_CASE("state bounds hold over random feedback streams") {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 200);
    TsetlinAutomaton ta(n, 1 + static_cast<int>(rng() % (2 * n)));
    for (int i = 0; i < 400; ++i) {
      const int before = ta.state();
      ta.step(rng() & 1 ? Feedback::Reward : Feedback::Penalty);
      REQUIRE(ta.state() >= 1);
      REQUIRE(ta.state() <= 2 * n);
      REQUIRE(std::abs(ta.state() - before) <= 1);
    }
  }
}

namespace {

// Clause over 2 features with literal order [x1, x2, !x1, !x2].
Clause clause_including(std::initializer_list<std::size_t> literals) {
  Clause c(1, 2, 150);
  for (std::size_t k : literals) c.automata()[k] = TsetlinAutomaton(150, 200);
  return c;
}

}  // namespace

TEST_CASE("clause_eval is a conjunction of included literals") {
  const Clause x1_not_x2 = clause_including({0, 3});
  CHECK(x1_not_x2.evaluate(make_literals(BitVector{1, 0}), ClauseMode::Infer));
  CHECK_FALSE(x1_not_x2.evaluate(make_literals(BitVector{1, 1}), ClauseMode::Infer));

  const Clause x1 = clause_including({0});
  CHECK_FALSE(x1.evaluate(make_literals(BitVector{0, 1}), ClauseMode::Infer));

  const Clause empty(1, 2, 150);
  CHECK(empty.evaluate(make_literals(BitVector{0, 0}), ClauseMode::Train));
  CHECK_FALSE(empty.evaluate(make_literals(BitVector{0, 0}), ClauseMode::Infer));

  CHECK_THROWS_AS((void)empty.evaluate(BitVector{1, 0, 1}, ClauseMode::Infer), ContractViolation);
}

TEST_CASE("tm_infer ties resolve to class 1") {
  MachineConfig cfg;
  cfg.n_clauses = 4;
  TsetlinMachine tm(cfg);
  CHECK(tm.class_sum(BitVector{0, 1}, ClauseMode::Infer) == 0);
  CHECK(tm.infer(BitVector{0, 1}));
  CHECK(tm.infer(BitVector{1, 1}));
}

TEST_CASE("single positive clause x1 & !x2") {
  MachineConfig cfg;
  cfg.n_clauses = 2;
  TsetlinMachine tm(cfg);
  tm.set_state(0, 200);  // x1
  tm.set_state(3, 200);  // !x2
  CHECK(tm.infer(BitVector{1, 0}));
  CHECK(tm.class_sum(BitVector{1, 0}, ClauseMode::Infer) == 1);
}

TEST_CASE("machine validates its configuration") {
  MachineConfig cfg;
  cfg.n_clauses = 3;
  CHECK_THROWS_AS(TsetlinMachine{cfg}, ContractViolation);
  cfg = {};
  cfg.specificity = 1.0;
  CHECK_THROWS_AS(TsetlinMachine{cfg}, ContractViolation);
  cfg = {};
  TsetlinMachine tm(cfg);
  Rng rng(1);
  CHECK_THROWS_AS(tm.train_step(BitVector{1}, true, rng), ContractViolation);
}

TEST_CASE("xor_dataset follows the truth table") {
  Rng rng(3);
  const auto data = xor_dataset(5000, rng);
  CHECK(data.size() == 5000);
  int seen[4] = {};
  for (const auto& [x, y] : data) {
    REQUIRE(x.size() == 2);
    CHECK(y == ((x[0] ^ x[1]) != 0));
    ++seen[x[0] * 2 + x[1]];
  }
  for (int n : seen) CHECK(n > 1000);
  CHECK_THROWS_AS((void)xor_dataset(0, rng), ContractViolation);
}

TEST_CASE("training emits unit-step events and is deterministic") {
  auto run = [](std::uint64_t seed) {
    TsetlinMachine tm(MachineConfig{});
    Rng data_rng(seed);
    Rng rng(seed + 1);
    std::vector<TransitionEvent> all;
    const auto data = xor_dataset(2000, data_rng);
    for (std::size_t s = 0; s < data.size(); ++s) {
      for (const auto& ev : tm.train_step(data[s].first, data[s].second, rng, s)) all.push_back(ev);
    }
    return std::pair{all, xor_accuracy(tm)};
  };
  const auto [a, acc_a] = run(11);
  const auto [b, acc_b] = run(11);
  REQUIRE(a.size() == b.size());
  CHECK(acc_a == acc_b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(std::abs(a[i].new_state - a[i].old_state) == 1);
    REQUIRE(a[i].ta_index == b[i].ta_index);
    REQUIRE(a[i].new_state == b[i].new_state);
    REQUIRE(a[i].sample_index == b[i].sample_index);
  }
}

TEST_CASE("default machine learns XOR and includes the XOR literals") {
  TsetlinMachine tm(MachineConfig{});
  Rng data_rng(21);
  Rng rng(22);
  const auto data = xor_dataset(5000, data_rng);
  for (std::size_t s = 0; s < data.size(); ++s) tm.train_step(data[s].first, data[s].second, rng, s);
  CHECK(xor_accuracy(tm) == 1.0);
  CHECK_FALSE(tm.infer(BitVector{0, 0}));
  CHECK(tm.infer(BitVector{0, 1}));
  CHECK(tm.infer(BitVector{1, 0}));
  CHECK_FALSE(tm.infer(BitVector{1, 1}));

  // Every XOR conjunction needs both of its literals included somewhere.
  int included = 0;
  for (std::size_t i = 0; i < tm.n_automata(); ++i) included += tm.automaton(i).action() == Action::Include;
  CHECK(included >= 4);
}
