#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "error.hpp"

namespace sensortext {

/// Shortest decimal string that round-trips to `value`.
inline std::string shortest_repr(double value) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw FormatError("cannot format number");
    return std::string(buf.data(), ptr);
}

/// Rounds to two decimals using the decimal-string semantics of `%.2f`.
inline double round2(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::fixed, 2);
    if (ec != std::errc{}) throw FormatError("cannot format number");
    double out = 0.0;
    std::from_chars(buf.data(), ptr, out);
    return out == 0.0 ? 0.0 : out;
}

/// Seconds as printed in trend text: two decimals, trailing zeros trimmed,
/// at least one fractional digit ("0.0", "0.3", "0.62", "12.0").
inline std::string format_seconds(double seconds) {
    std::string s = shortest_repr(round2(seconds));
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

/// Sample rate as printed in prompts: "50", "12.5".
inline std::string format_rate(double hz) {
    return shortest_repr(hz);
}

namespace detail {
inline constexpr std::array<std::string_view, 20> kSmallNumberWords = {
    "zero",    "one",     "two",       "three",    "four",
    "five",    "six",     "seven",     "eight",    "nine",
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
inline constexpr std::array<std::string_view, 10> kTensWords = {
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"};
}  // namespace detail

/// English cardinal for 0..99; larger values fall back to digits.
inline std::string number_word(long long n) {
    if (n < 0 || n > 99) return std::to_string(n);
    if (n < 20) return std::string(detail::kSmallNumberWords[static_cast<std::size_t>(n)]);
    std::string out(detail::kTensWords[static_cast<std::size_t>(n / 10)]);
    if (n % 10 != 0) {
        out += '-';
        out += detail::kSmallNumberWords[static_cast<std::size_t>(n % 10)];
    }
    return out;
}

/// Parses a lowercase English cardinal 0..99 ("seven", "twenty-one").
inline std::optional<long long> parse_number_word(std::string_view word) {
    for (std::size_t i = 0; i < detail::kSmallNumberWords.size(); ++i)
        if (word == detail::kSmallNumberWords[i]) return static_cast<long long>(i);
    for (std::size_t t = 2; t < detail::kTensWords.size(); ++t) {
        std::string_view tens = detail::kTensWords[t];
        if (word == tens) return static_cast<long long>(t * 10);
        if (word.size() > tens.size() + 1 && word.substr(0, tens.size()) == tens &&
            (word[tens.size()] == '-' || word[tens.size()] == ' ')) {
            std::string_view unit = word.substr(tens.size() + 1);
            for (std::size_t u = 1; u < 10; ++u)
                if (unit == detail::kSmallNumberWords[u])
                    return static_cast<long long>(t * 10 + u);
        }
    }
    return std::nullopt;
}

}  // namespace sensortext
