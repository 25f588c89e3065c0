#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace e2c {

/// Integer microsecond tick count. Used both as a point on the simulated
/// timeline and as a duration; the engine never touches floating-point time.
class Ticks {
public:
    static constexpr std::int64_t kPerSecond = 1'000'000;

    constexpr Ticks() = default;
    constexpr explicit Ticks(std::int64_t count) : count_(count) {}

    static constexpr Ticks from_seconds(std::int64_t s) { return Ticks{s * kPerSecond}; }

    [[nodiscard]] constexpr std::int64_t count() const { return count_; }
    [[nodiscard]] constexpr double seconds() const {
        return static_cast<double>(count_) / static_cast<double>(kPerSecond);
    }

    constexpr auto operator<=>(const Ticks&) const = default;

    constexpr Ticks& operator+=(Ticks o) { count_ += o.count_; return *this; }
    constexpr Ticks& operator-=(Ticks o) { count_ -= o.count_; return *this; }
    friend constexpr Ticks operator+(Ticks a, Ticks b) { return Ticks{a.count_ + b.count_}; }
    friend constexpr Ticks operator-(Ticks a, Ticks b) { return Ticks{a.count_ - b.count_}; }
    friend constexpr Ticks operator*(Ticks a, std::int64_t k) { return Ticks{a.count_ * k}; }
    friend constexpr Ticks operator*(std::int64_t k, Ticks a) { return Ticks{a.count_ * k}; }

private:
    std::int64_t count_ = 0;
};

using TimePoint = Ticks;
using Duration = Ticks;

/// Parses a non-negative decimal number of seconds with at most six
/// fractional digits ("2", "0.5", "1.000250"). Throws ParseError otherwise.
Ticks parse_seconds(std::string_view text);

/// Canonical seconds text: no padding, trailing fractional zeros trimmed.
std::string format_seconds(Ticks t);

/// Fixed-point text with `decimals` places, rounded half away from zero.
std::string format_fixed(double value, int decimals);

} // namespace e2c
