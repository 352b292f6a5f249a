#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "crucible/bigint.hpp"
#include "crucible/bytes.hpp"
#include "crucible/chaos_hash.hpp"

namespace crucible::hashing {

/// Keyed hash behind one interface so protocol code does not care whether
/// the chaotic map or BLAKE2b is underneath. The key is bound at
/// construction; digest() is a pure function of the message.
class KeyedHash {
public:
    virtual ~KeyedHash() = default;
    virtual unsigned digest_bits() const = 0;
    virtual BigInt digest(ByteView message) const = 0;

    /// Lowercase hex, fixed width digest_bits()/4.
    std::string hex_digest(ByteView message) const;
};

/// BLAKE2b with an optional key (empty key = plain hash). out_bytes in
/// [16, 64].
class Blake2bHash final : public KeyedHash {
public:
    Blake2bHash(Bytes key, unsigned out_bytes);
    unsigned digest_bits() const override { return out_bytes_ * 8; }
    BigInt digest(ByteView message) const override;

private:
    Bytes key_;
    unsigned out_bytes_;
};

/// Chaotic-map keyed hash (see chaos_hash.hpp).
class ChaosKeyedHash final : public KeyedHash {
public:
    ChaosKeyedHash(chaos::ChaosKey key, chaos::ChaosHashParams params);
    unsigned digest_bits() const override { return params_.digest_bits; }
    BigInt digest(ByteView message) const override;

private:
    chaos::ChaosKey key_;
    chaos::ChaosHashParams params_;
};

/// Raw keyed BLAKE2b digest. key may be empty; key size <= 64, out_bytes in
/// [16, 64]. Throws std::invalid_argument outside those bounds.
Bytes keyed_blake2b(ByteView message, ByteView key, unsigned out_bytes);

/// Process-wide count of hash-function executions (all backends). The
/// knock-matching fast path must not move this counter; tests assert that.
std::uint64_t hash_invocations();
void count_hash_invocation();

}  // namespace crucible::hashing
