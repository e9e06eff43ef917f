#pragma once

#include <stdexcept>
#include <string>

namespace yflash {

// Caller broke a documented precondition (bad index, length mismatch, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A read was requested at a bias that would program the cell.
class ReadDisturbError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EnduranceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

}  // namespace yflash
