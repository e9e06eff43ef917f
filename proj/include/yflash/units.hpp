#pragma once

#include <cmath>
#include <compare>

namespace yflash {

// Thin strong wrapper around a double carrying an SI dimension tag.
template <class Tag>
class Quantity {
 public:
  constexpr Quantity() = default;
  constexpr explicit Quantity(double si) : value_(si) {}

  [[nodiscard]] constexpr double value() const { return value_; }

  constexpr Quantity& operator+=(Quantity o) {
    value_ += o.value_;
    return *this;
  }
  constexpr Quantity& operator-=(Quantity o) {
    value_ -= o.value_;
    return *this;
  }

  friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity(a.value_ + b.value_); }
  friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity(a.value_ - b.value_); }
  friend constexpr Quantity operator-(Quantity a) { return Quantity(-a.value_); }
  friend constexpr Quantity operator*(Quantity a, double k) { return Quantity(a.value_ * k); }
  friend constexpr Quantity operator*(double k, Quantity a) { return Quantity(a.value_ * k); }
  friend constexpr Quantity operator/(Quantity a, double k) { return Quantity(a.value_ / k); }
  friend constexpr double operator/(Quantity a, Quantity b) { return a.value_ / b.value_; }
  friend constexpr auto operator<=>(Quantity, Quantity) = default;

 private:
  double value_ = 0.0;
};

struct ConductanceTag {};
struct VoltageTag {};
struct CurrentTag {};
struct TimeTag {};
struct PowerTag {};
struct EnergyTag {};

using Siemens = Quantity<ConductanceTag>;
using Volts = Quantity<VoltageTag>;
using Amperes = Quantity<CurrentTag>;
using Seconds = Quantity<TimeTag>;
using Watts = Quantity<PowerTag>;
using Joules = Quantity<EnergyTag>;

constexpr Amperes operator*(Siemens g, Volts v) { return Amperes(g.value() * v.value()); }
constexpr Amperes operator*(Volts v, Siemens g) { return g * v; }
constexpr Joules operator*(Watts p, Seconds t) { return Joules(p.value() * t.value()); }
constexpr Joules operator*(Seconds t, Watts p) { return p * t; }
constexpr Watts operator/(Joules e, Seconds t) { return Watts(e.value() / t.value()); }

template <class Tag>
Quantity<Tag> abs(Quantity<Tag> q) {
  return Quantity<Tag>(std::abs(q.value()));
}

namespace literals {

constexpr Siemens operator""_S(long double v) { return Siemens(static_cast<double>(v)); }
constexpr Siemens operator""_uS(long double v) { return Siemens(static_cast<double>(v) * 1e-6); }
constexpr Siemens operator""_nS(long double v) { return Siemens(static_cast<double>(v) * 1e-9); }
constexpr Siemens operator""_nS(unsigned long long v) { return Siemens(static_cast<double>(v) * 1e-9); }
constexpr Volts operator""_V(long double v) { return Volts(static_cast<double>(v)); }
constexpr Volts operator""_V(unsigned long long v) { return Volts(static_cast<double>(v)); }
constexpr Amperes operator""_A(long double v) { return Amperes(static_cast<double>(v)); }
constexpr Amperes operator""_uA(long double v) { return Amperes(static_cast<double>(v) * 1e-6); }
constexpr Amperes operator""_nA(long double v) { return Amperes(static_cast<double>(v) * 1e-9); }
constexpr Amperes operator""_pA(long double v) { return Amperes(static_cast<double>(v) * 1e-12); }
constexpr Amperes operator""_pA(unsigned long long v) { return Amperes(static_cast<double>(v) * 1e-12); }
constexpr Seconds operator""_s(long double v) { return Seconds(static_cast<double>(v)); }
constexpr Seconds operator""_ms(long double v) { return Seconds(static_cast<double>(v) * 1e-3); }
constexpr Seconds operator""_us(long double v) { return Seconds(static_cast<double>(v) * 1e-6); }
constexpr Seconds operator""_us(unsigned long long v) { return Seconds(static_cast<double>(v) * 1e-6); }
constexpr Seconds operator""_ns(long double v) { return Seconds(static_cast<double>(v) * 1e-9); }
constexpr Seconds operator""_ns(unsigned long long v) { return Seconds(static_cast<double>(v) * 1e-9); }
constexpr Watts operator""_uW(long double v) { return Watts(static_cast<double>(v) * 1e-6); }
constexpr Watts operator""_uW(unsigned long long v) { return Watts(static_cast<double>(v) * 1e-6); }
constexpr Watts operator""_nW(long double v) { return Watts(static_cast<double>(v) * 1e-9); }
constexpr Watts operator""_nW(unsigned long long v) { return Watts(static_cast<double>(v) * 1e-9); }
constexpr Joules operator""_nJ(long double v) { return Joules(static_cast<double>(v) * 1e-9); }

}  // namespace literals

}  // namespace yflash
