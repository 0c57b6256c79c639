#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

//! Canonical number formatting for CSV and reports. std::to_chars emits the
//! shortest round-trip decimal form, which is locale-independent and stable
//! across runs, so byte-identical output is a property of the values alone.
//! Infinite log-LRs (exclusions, zero likelihoods) serialize as the literal
//! tokens "inf" and "-inf".

namespace lrbayes {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_u64(std::uint64_t v) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

//! log10 of a likelihood ratio with the sentinel conventions: 0 maps to
//! "-inf", +inf to "inf".
inline std::string format_log10_lr(double lr) {
    return format_double(std::log10(lr));
}

} // namespace lrbayes
