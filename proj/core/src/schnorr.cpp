#include "crucible/schnorr.hpp"

#include <array>
#include <stdexcept>

namespace crucible::schnorr {

namespace {

using boost::multiprecision::powm;

constexpr unsigned kMillerRabinRounds = 64;
constexpr unsigned kMaxPrimeSearchTries = 200000;

constexpr std::array<unsigned, 54> kSmallPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,  61,
    67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
    157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};

BigInt random_odd_with_top_bit(unsigned bits, RandomSource& rng) {
    BigInt candidate = rng.uniform_below(BigInt(1) << bits);
    boost::multiprecision::bit_set(candidate, bits - 1);
    boost::multiprecision::bit_set(candidate, 0);
    return candidate;
}

}  // namespace

bool GroupParams::valid() const {
    if (p < 5 || q < 2 || g <= 1 || g >= p) return false;
    if ((p - 1) % q != 0) return false;
    return powm(g, q, p) == 1;
}

bool is_probable_prime(const BigInt& n, unsigned rounds, RandomSource& rng) {
    if (n < 2) return false;
    for (unsigned sp : kSmallPrimes) {
        if (n == sp) return true;
        if (n % sp == 0) return false;
    }
    // n - 1 = d * 2^s with d odd
    BigInt d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (unsigned round = 0; round < rounds; ++round) {
        BigInt witness = rng.uniform_below(n - 3) + 2;  // [2, n-2]
        BigInt x = powm(witness, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < s; ++i) {
            x = (x * x) % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

GroupParams generate_params(unsigned p_bits, unsigned q_bits, RandomSource& rng) {
    if (q_bits >= p_bits) throw std::invalid_argument("generate_params: need q_bits < p_bits");
    if (q_bits < 8) throw std::invalid_argument("generate_params: q_bits too small");

    for (unsigned attempt = 0; attempt < 64; ++attempt) {
        // Random prime q.
        BigInt q;
        bool found_q = false;
        for (unsigned tries = 0; tries < kMaxPrimeSearchTries; ++tries) {
            q = random_odd_with_top_bit(q_bits, rng);
            if (is_probable_prime(q, kMillerRabinRounds, rng)) {
                found_q = true;
                break;
            }
        }
        if (!found_q) throw std::runtime_error("generate_params: no prime q found");

        // Search p = k*q + 1 with exactly p_bits bits.
        const BigInt p_min = BigInt(1) << (p_bits - 1);
        const BigInt p_max = (BigInt(1) << p_bits) - 1;
        BigInt k = (p_min - 1) / q + 1;
        if ((k & 1) == 1) ++k;  // k must be even so that p = k*q + 1 is odd
        for (BigInt p = k * q + 1; p <= p_max; p += 2 * q) {
            if (!is_probable_prime(p, kMillerRabinRounds, rng)) continue;
            // Any h with h^((p-1)/q) != 1 yields a generator of the
            // order-q subgroup.
            const BigInt exponent = (p - 1) / q;
            for (BigInt h = 2; h < p - 1; ++h) {
                BigInt g = powm(h, exponent, p);
                if (g != 1) {
                    GroupParams params{p, q, g};
                    if (!params.valid()) break;  // should not happen; retry q
                    return params;
                }
            }
        }
        // No p in range for this q; draw a fresh q.
    }
    throw std::runtime_error("generate_params: exhausted retries (rng or size problem)");
}

KeyPair keygen(const GroupParams& params, RandomSource& rng) {
    for (;;) {
        BigInt a = rng.uniform_below(params.q);
        if (a == 0) continue;
        return KeyPair{a, powm(params.g, a, params.p)};
    }
}

Commitment prover_commit(const GroupParams& params, RandomSource& rng) {
    for (;;) {
        BigInt v = rng.uniform_below(params.q);
        BigInt big_v = powm(params.g, v, params.p);
        if (big_v == 1) continue;
        return Commitment{v, big_v};
    }
}

BigInt verifier_challenge(ChallengeBits t, RandomSource& rng) {
    if (t.t < 1) throw std::invalid_argument("verifier_challenge: t must be >= 1");
    // Upper bound 2^(t-1) inclusive.
    return rng.uniform_below((BigInt(1) << (t.t - 1)) + 1);
}

BigInt prover_respond(const BigInt& a, const BigInt& v, const BigInt& c, const BigInt& q) {
    BigInt r = (v - a * c) % q;
    if (r < 0) r += q;
    return r;
}

bool verify_interactive(const GroupParams& params, const BigInt& public_key, const BigInt& big_v,
                        const BigInt& c, const BigInt& r) {
    if (public_key < 2 || public_key > params.p - 1) return false;
    if (powm(public_key, params.q, params.p) != 1) return false;
    BigInt expected = (powm(params.g, r, params.p) * powm(public_key, c, params.p)) % params.p;
    return expected == big_v;
}

Bytes canonical_hash_input(const BigInt& g, const BigInt& big_v, const BigInt& public_key,
                           ByteView user_id, ByteView other_info) {
    Bytes out;
    auto append_field = [&out](ByteView field) {
        append_u32_be(out, static_cast<std::uint32_t>(field.size()));
        out.insert(out.end(), field.begin(), field.end());
    };
    Bytes g_bytes = be_bytes(g);
    Bytes v_bytes = be_bytes(big_v);
    Bytes a_bytes = be_bytes(public_key);
    append_field(g_bytes);
    append_field(v_bytes);
    append_field(a_bytes);
    append_field(user_id);
    append_field(other_info);
    return out;
}

NizkpProof nizkp_prove_with_nonce(const GroupParams& params, const KeyPair& keypair,
                                  ByteView user_id, ByteView other_info,
                                  const hashing::KeyedHash& hash, const BigInt& v) {
    if (hash.digest_bits() < bit_length(params.q)) {
        throw std::invalid_argument("nizkp_prove: hash digest narrower than q");
    }
    BigInt big_v = powm(params.g, v, params.p);
    BigInt c = hash.digest(canonical_hash_input(params.g, big_v, keypair.public_key, user_id, other_info));
    BigInt r = prover_respond(keypair.a, v, c % params.q, params.q);
    return NizkpProof{Bytes(user_id.begin(), user_id.end()),
                      Bytes(other_info.begin(), other_info.end()), c, r};
}

NizkpProof nizkp_prove(const GroupParams& params, const KeyPair& keypair, ByteView user_id,
                       ByteView other_info, const hashing::KeyedHash& hash, RandomSource& rng) {
    return nizkp_prove_with_nonce(params, keypair, user_id, other_info, hash,
                                  prover_commit(params, rng).v);
}

bool nizkp_verify(const GroupParams& params, const BigInt& public_key, const NizkpProof& proof,
                  const hashing::KeyedHash& hash) {
    if (public_key < 2 || public_key > params.p - 1) return false;
    if (powm(public_key, params.q, params.p) != 1) return false;
    if (proof.c < 0 || proof.r < 0) return false;
    BigInt recovered_v =
        (powm(params.g, proof.r, params.p) * powm(public_key, proof.c % params.q, params.p)) %
        params.p;
    BigInt expected_c =
        hash.digest(canonical_hash_input(params.g, recovered_v, public_key, proof.user_id, proof.other_info));
    return expected_c == proof.c;
}

std::size_t proof_payload_length(unsigned digest_bits, const BigInt& q) {
    return digest_bits / 4 + (bit_length(q) + 3) / 4;
}

std::string encode_proof_payload(const NizkpProof& proof, unsigned digest_bits, const BigInt& q) {
    const std::size_t r_width = (bit_length(q) + 3) / 4;
    return to_hex_fixed(proof.c, digest_bits / 4) + to_hex_fixed(proof.r, r_width);
}

std::optional<DecodedPayload> decode_proof_payload(std::string_view payload, unsigned digest_bits,
                                                   const BigInt& q) {
    const std::size_t c_width = digest_bits / 4;
    const std::size_t r_width = (bit_length(q) + 3) / 4;
    if (payload.size() != c_width + r_width) return std::nullopt;
    for (char ch : payload) {
        const bool ok = (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f');
        if (!ok) return std::nullopt;
    }
    return DecodedPayload{bigint_from_hex(payload.substr(0, c_width)),
                          bigint_from_hex(payload.substr(c_width))};
}

}  // namespace crucible::schnorr
