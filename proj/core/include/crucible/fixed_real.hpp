#pragma once

#include <cstdint>
#include <string>

#include "crucible/bigint.hpp"

namespace crucible::chaos {

/// Signed fixed-point real with 256 fractional bits.
///
/// The value is raw() / 2^256 exactly. Every operation that cannot be
/// represented exactly truncates toward zero at the 256th fractional bit, so
/// two machines computing the same expression always agree bit for bit. The
/// integer part is unbounded (the map can stray outside [-2, 2] when driven
/// with a coefficient >= 2; see chaos_hash.hpp).
class FixedReal {
public:
    static constexpr unsigned kFractionBits = 256;

    FixedReal() = default;

    static FixedReal from_raw(BigInt scaled);
    static FixedReal from_int(long v);
    /// num/den truncated toward zero at 256 fractional bits.
    static FixedReal from_ratio(long num, unsigned long den);
    /// Parses decimal like "-0.25" or "1.8", truncating toward zero.
    static FixedReal from_decimal(std::string_view text);

    const BigInt& raw() const { return raw_; }

    /// Product truncated toward zero at 256 fractional bits.
    FixedReal mul_trunc(const FixedReal& other) const;
    /// Exact: scales by a small non-negative integer.
    FixedReal mul_u8(std::uint8_t w) const;
    FixedReal abs() const;
    /// Exact: 1 - *this.
    FixedReal one_minus() const;
    FixedReal operator+(const FixedReal& other) const;
    FixedReal operator-() const;

    bool operator==(const FixedReal& other) const = default;
    auto operator<=>(const FixedReal& other) const { return raw_ <=> other.raw_; }

    bool is_zero() const { return raw_ == 0; }
    /// |value| < 1.
    bool in_open_unit_interval() const;

    /// Decimal rendering with the given number of fractional digits
    /// (truncated); intended for logs and debugging.
    std::string to_decimal(unsigned digits = 12) const;

private:
    explicit FixedReal(BigInt raw) : raw_(std::move(raw)) {}

    BigInt raw_;  // value * 2^256
};

}  // namespace crucible::chaos
