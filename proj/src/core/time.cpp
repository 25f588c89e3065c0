#include <e2c/core/time.hpp>

#include <e2c/core/errors.hpp>

#include <cmath>
#include <cstdio>
#include <limits>

namespace e2c {

Ticks parse_seconds(std::string_view text) {
    auto fail = [&]() -> Ticks {
        throw ParseError("invalid seconds value '" + std::string(text) + "'");
    };
    if (text.empty()) return fail();

    std::size_t pos = 0;
    std::int64_t whole = 0;
    bool any_digit = false;
    constexpr std::int64_t kMaxWhole = std::numeric_limits<std::int64_t>::max() / Ticks::kPerSecond - 1;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        whole = whole * 10 + (text[pos] - '0');
        if (whole > kMaxWhole) return fail();
        any_digit = true;
        ++pos;
    }
    std::int64_t frac = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        int digits = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (digits == 6) return fail();
            frac = frac * 10 + (text[pos] - '0');
            ++digits;
            any_digit = true;
            ++pos;
        }
        for (; digits < 6; ++digits) frac *= 10;
    }
    if (!any_digit || pos != text.size()) return fail();
    return Ticks{whole * Ticks::kPerSecond + frac};
}

std::string format_seconds(Ticks t) {
    std::int64_t c = t.count();
    std::string out;
    if (c < 0) {
        out.push_back('-');
        c = -c;
    }
    out += std::to_string(c / Ticks::kPerSecond);
    std::int64_t frac = c % Ticks::kPerSecond;
    if (frac != 0) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "%06lld", static_cast<long long>(frac));
        std::string digits(buf);
        while (digits.back() == '0') digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

std::string format_fixed(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    double rounded = std::round(value * scale) / scale;
    if (rounded == 0.0) rounded = 0.0; // no "-0.000"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
    return buf;
}

} // namespace e2c
