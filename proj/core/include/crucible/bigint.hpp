#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "crucible/bytes.hpp"

namespace crucible {

using BigInt = boost::multiprecision::cpp_int;

unsigned bit_length(const BigInt& v);

/// Minimal big-endian magnitude bytes; 0 encodes as the empty string.
Bytes be_bytes(const BigInt& v);
BigInt bigint_from_be_bytes(ByteView bytes);

/// Lowercase hex, zero-padded on the left to exactly `hex_chars` characters.
/// Throws if the value does not fit.
std::string to_hex_fixed(const BigInt& v, std::size_t hex_chars);
BigInt bigint_from_hex(std::string_view hex);

/// Source of random bytes. Implementations: process CSPRNG and a seeded
/// deterministic stream for tests.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(std::uint8_t* out, std::size_t len) = 0;

    Bytes bytes(std::size_t len);
    /// Uniform in [0, bound), bound >= 1, by rejection sampling.
    BigInt uniform_below(const BigInt& bound);
    std::uint64_t uniform_u64(std::uint64_t bound);
};

class SystemRandom final : public RandomSource {
public:
    void fill(std::uint8_t* out, std::size_t len) override;
};

/// mt19937_64-backed byte stream; sequence is fixed by the standard, so
/// expected values frozen in tests stay valid everywhere.
class SeededRandom final : public RandomSource {
public:
    explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}
    void fill(std::uint8_t* out, std::size_t len) override;

private:
    std::mt19937_64 engine_;
};

}  // namespace crucible
