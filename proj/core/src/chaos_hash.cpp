#include "crucible/chaos_hash.hpp"

#include <stdexcept>

#include "crucible/hashing.hpp"

namespace crucible::chaos {

namespace {

const FixedReal& coeff_scale() {
    static const FixedReal c = FixedReal::from_ratio(15, 10000);  // 0.0015 truncated
    return c;
}

const FixedReal& coeff_base() {
    static const FixedReal c = FixedReal::from_ratio(9, 5);  // 1.8 truncated
    return c;
}

}  // namespace

ChaosKey ChaosKey::generate(RandomSource& rng) {
    const BigInt one = BigInt(1) << FixedReal::kFractionBits;
    for (;;) {
        // magnitude in [0, 2^256), sign from one extra byte
        Bytes buf = rng.bytes(33);
        BigInt mag = bigint_from_be_bytes(ByteView(buf.data(), 32));
        if (mag == 0 || mag >= one) continue;
        const bool neg = (buf[32] & 1) != 0;
        return ChaosKey{FixedReal::from_raw(neg ? -mag : mag)};
    }
}

Bytes pad_message(ByteView message) {
    Bytes out(message.begin(), message.end());
    while (out.size() % 8 != 0) out.push_back(0x30);
    return out;
}

FixedReal alpha_for_byte(std::uint8_t w) {
    return coeff_scale().mul_u8(w) + coeff_base();
}

FixedReal map_step(const FixedReal& x, const FixedReal& alpha) {
    return alpha.mul_trunc(x).abs().one_minus();
}

BigInt chaos_hash(ByteView message, const ChaosKey& key, const ChaosHashParams& params) {
    if (!key.valid()) throw std::invalid_argument("chaos_hash: key must satisfy 0 < |k| < 1");
    if (!params.valid()) throw std::invalid_argument("chaos_hash: bad params");
    hashing::count_hash_invocation();

    FixedReal state = key.value;
    const Bytes padded = pad_message(message);
    for (std::uint8_t w : padded) {
        const FixedReal alpha = alpha_for_byte(w);
        for (std::uint32_t i = 0; i < params.iterations; ++i) {
            state = map_step(state, alpha);
        }
    }

    // floor(((x + 1) / 2) * 2^digest_bits), clamped into the digest range.
    const BigInt one = BigInt(1) << FixedReal::kFractionBits;
    const BigInt max_digest = (BigInt(1) << params.digest_bits) - 1;
    BigInt shifted = state.raw() + one;
    if (shifted <= 0) return 0;
    BigInt digest = shifted >> (FixedReal::kFractionBits + 1 - params.digest_bits);
    if (digest > max_digest) return max_digest;
    return digest;
}

std::string chaos_hash_hex(ByteView message, const ChaosKey& key, const ChaosHashParams& params) {
    return to_hex_fixed(chaos_hash(message, key, params), params.digest_bits / 4);
}

}  // namespace crucible::chaos
