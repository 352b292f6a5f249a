#pragma once

#include <cstdint>

#include "crucible/bytes.hpp"
#include "crucible/fixed_real.hpp"

namespace crucible::chaos {

/// Initial value of the chaotic map; doubles as the hash key.
/// Must satisfy 0 < |value| < 1 (zero is degenerate: the first map step
/// always lands on 1 regardless of the coefficient).
struct ChaosKey {
    FixedReal value;

    bool valid() const { return !value.is_zero() && value.in_open_unit_interval(); }

    /// Uniform nonzero key drawn from (-1, 1).
    static ChaosKey generate(RandomSource& rng);
};

struct ChaosHashParams {
    std::uint32_t iterations = 64;   // map steps per absorbed byte
    std::uint32_t digest_bits = 256; // 128 or 256

    bool valid() const {
        return iterations >= 1 && (digest_bits == 128 || digest_bits == 256);
    }
};

/// Appends ASCII '0' (0x30) until the length is a multiple of 8 bytes.
/// A length that is already a multiple of 8 (including zero) is unchanged.
Bytes pad_message(ByteView message);

/// Map coefficient for one absorbed byte: 0.0015 * w + 1.8, with 0.0015 and
/// 1.8 fixed once as their 256-fractional-bit truncations. For w in the
/// printable range 32..126 this lies in [1.848, 1.989]; larger bytes push it
/// up to just under 2.1825, where the map may leave (-1, 1] (accepted, see
/// chaos_hash notes).
FixedReal alpha_for_byte(std::uint8_t w);

/// One step of the absolute-value map: 1 - |alpha * x|, truncated toward
/// zero at 256 fractional bits. For |x| <= 1 and alpha < 2 the result stays
/// in [1 - alpha, 1] subset of (-1, 1].
FixedReal map_step(const FixedReal& x, const FixedReal& alpha);

/// Keyed hash: pads the message, then for each byte runs `iterations` map
/// steps with that byte's coefficient, chaining the state from the key.
/// The final state x is normalised to floor(((x + 1) / 2) * 2^digest_bits),
/// clamped into [0, 2^digest_bits).
///
/// Bytes >= 134 give a coefficient above 2, where the map can diverge and
/// the clamp saturates the digest; the statistical quality claims hold for
/// the printable-ASCII domain only. Arbitrary bytes are still accepted.
///
/// Throws std::invalid_argument on an invalid key or params.
BigInt chaos_hash(ByteView message, const ChaosKey& key, const ChaosHashParams& params);

/// Digest rendered as lowercase hex, fixed width digest_bits/4.
std::string chaos_hash_hex(ByteView message, const ChaosKey& key, const ChaosHashParams& params);

}  // namespace crucible::chaos
