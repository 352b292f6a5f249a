#include "crucible/bigint.hpp"

#include <sodium.h>

#include <stdexcept>

namespace crucible {

unsigned bit_length(const BigInt& v) {
    if (v == 0) return 0;
    return static_cast<unsigned>(boost::multiprecision::msb(v)) + 1;
}

Bytes be_bytes(const BigInt& v) {
    if (v < 0) throw std::invalid_argument("be_bytes: negative value");
    if (v == 0) return {};
    Bytes out((bit_length(v) + 7) / 8);
    BigInt tmp = v;
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = static_cast<std::uint8_t>(tmp & 0xff);
        tmp >>= 8;
    }
    return out;
}

BigInt bigint_from_be_bytes(ByteView bytes) {
    BigInt v = 0;
    for (std::uint8_t b : bytes) {
        v <<= 8;
        v |= b;
    }
    return v;
}

std::string to_hex_fixed(const BigInt& v, std::size_t hex_chars) {
    if (v < 0) throw std::invalid_argument("to_hex_fixed: negative value");
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(hex_chars, '0');
    BigInt tmp = v;
    std::size_t i = hex_chars;
    while (tmp != 0) {
        if (i == 0) throw std::invalid_argument("to_hex_fixed: value too wide");
        out[--i] = digits[static_cast<unsigned>(tmp & 0xf)];
        tmp >>= 4;
    }
    return out;
}

BigInt bigint_from_hex(std::string_view hex) {
    BigInt v = 0;
    for (char c : hex) {
        int nib;
        if (c >= '0' && c <= '9') nib = c - '0';
        else if (c >= 'a' && c <= 'f') nib = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') nib = c - 'A' + 10;
        else throw std::invalid_argument("bigint_from_hex: bad character");
        v <<= 4;
        v |= nib;
    }
    return v;
}

Bytes RandomSource::bytes(std::size_t len) {
    Bytes out(len);
    if (len > 0) fill(out.data(), len);
    return out;
}

BigInt RandomSource::uniform_below(const BigInt& bound) {
    if (bound < 1) throw std::invalid_argument("uniform_below: bound must be >= 1");
    if (bound == 1) return 0;
    const unsigned bits = bit_length(bound - 1);
    const std::size_t nbytes = (bits + 7) / 8;
    const unsigned excess = static_cast<unsigned>(nbytes * 8 - bits);
    Bytes buf(nbytes);
    for (;;) {
        fill(buf.data(), buf.size());
        buf[0] &= static_cast<std::uint8_t>(0xff >> excess);
        BigInt candidate = bigint_from_be_bytes(buf);
        if (candidate < bound) return candidate;
    }
}

std::uint64_t RandomSource::uniform_u64(std::uint64_t bound) {
    return static_cast<std::uint64_t>(uniform_below(BigInt(bound)));
}

void SystemRandom::fill(std::uint8_t* out, std::size_t len) {
    randombytes_buf(out, len);
}

void SeededRandom::fill(std::uint8_t* out, std::size_t len) {
    std::size_t i = 0;
    while (i < len) {
        std::uint64_t word = engine_();
        for (std::size_t j = 0; j < 8 && i < len; ++j, ++i) {
            out[i] = static_cast<std::uint8_t>(word >> (8 * j));
        }
    }
}

}  // namespace crucible
