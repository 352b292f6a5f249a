#include "crucible/fixed_real.hpp"

#include <stdexcept>

namespace crucible::chaos {

namespace {

const BigInt& scale_one() {
    static const BigInt one = BigInt(1) << FixedReal::kFractionBits;
    return one;
}

// Truncate num/den toward zero; signs handled by the caller.
BigInt div_trunc_nonneg(const BigInt& num, const BigInt& den) {
    return num / den;  // cpp_int division truncates toward zero
}

}  // namespace

FixedReal FixedReal::from_raw(BigInt scaled) {
    return FixedReal(std::move(scaled));
}

FixedReal FixedReal::from_int(long v) {
    return FixedReal(BigInt(v) * scale_one());
}

FixedReal FixedReal::from_ratio(long num, unsigned long den) {
    if (den == 0) throw std::invalid_argument("FixedReal::from_ratio: zero denominator");
    const bool neg = num < 0;
    BigInt mag = BigInt(neg ? -num : num) * scale_one();
    BigInt q = div_trunc_nonneg(mag, BigInt(den));
    return FixedReal(neg ? -q : q);
}

FixedReal FixedReal::from_decimal(std::string_view text) {
    std::size_t pos = 0;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        neg = text[pos] == '-';
        ++pos;
    }
    BigInt int_part = 0;
    BigInt frac_num = 0;
    BigInt frac_den = 1;
    bool seen_digit = false;
    bool in_frac = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '.') {
            if (in_frac) throw std::invalid_argument("FixedReal::from_decimal: two dots");
            in_frac = true;
            continue;
        }
        if (c < '0' || c > '9') throw std::invalid_argument("FixedReal::from_decimal: bad character");
        seen_digit = true;
        if (in_frac) {
            frac_num = frac_num * 10 + (c - '0');
            frac_den *= 10;
        } else {
            int_part = int_part * 10 + (c - '0');
        }
    }
    if (!seen_digit) throw std::invalid_argument("FixedReal::from_decimal: no digits");
    BigInt mag = int_part * scale_one() + div_trunc_nonneg(frac_num * scale_one(), frac_den);
    return FixedReal(neg ? -mag : mag);
}

FixedReal FixedReal::mul_trunc(const FixedReal& other) const {
    const bool neg = (raw_ < 0) != (other.raw_ < 0);
    BigInt mag = boost::multiprecision::abs(raw_) * boost::multiprecision::abs(other.raw_);
    mag >>= kFractionBits;  // non-negative, so shift == truncation toward zero
    return FixedReal(neg ? -mag : mag);
}

FixedReal FixedReal::mul_u8(std::uint8_t w) const {
    return FixedReal(raw_ * w);
}

FixedReal FixedReal::abs() const {
    return FixedReal(boost::multiprecision::abs(raw_));
}

FixedReal FixedReal::one_minus() const {
    return FixedReal(scale_one() - raw_);
}

FixedReal FixedReal::operator+(const FixedReal& other) const {
    return FixedReal(raw_ + other.raw_);
}

FixedReal FixedReal::operator-() const {
    return FixedReal(-raw_);
}

bool FixedReal::in_open_unit_interval() const {
    return boost::multiprecision::abs(raw_) < scale_one();
}

std::string FixedReal::to_decimal(unsigned digits) const {
    BigInt mag = boost::multiprecision::abs(raw_);
    BigInt int_part = mag >> kFractionBits;
    BigInt frac = mag - (int_part << kFractionBits);
    std::string out = raw_ < 0 ? "-" : "";
    out += int_part.str();
    if (digits > 0) {
        out.push_back('.');
        for (unsigned i = 0; i < digits; ++i) {
            frac *= 10;
            BigInt digit = frac >> kFractionBits;
            out.push_back(static_cast<char>('0' + static_cast<int>(digit)));
            frac -= digit << kFractionBits;
        }
    }
    return out;
}

}  // namespace crucible::chaos
