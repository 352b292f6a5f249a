#pragma once

#include <cstdint>
#include <string>

#include "crucible/bigint.hpp"
#include "crucible/bytes.hpp"
#include "crucible/hashing.hpp"

namespace crucible::schnorr {

/// Prime-order subgroup of Z_p^*: q | p-1, g generates the order-q
/// subgroup, 1 < g < p.
struct GroupParams {
    BigInt p;
    BigInt q;
    BigInt g;

    bool valid() const;
};

struct KeyPair {
    BigInt a;         // private exponent in [1, q-1]
    BigInt public_key;  // g^a mod p
};

struct Commitment {
    BigInt v;  // ephemeral secret, caller keeps it private
    BigInt big_v;  // g^v mod p
};

struct NizkpProof {
    Bytes user_id;
    Bytes other_info;
    BigInt c;  // full hash digest as transmitted
    BigInt r;  // v - a*c mod q
};

/// Interactive challenge bit length; must satisfy 1 <= t <= bitlength(q).
struct ChallengeBits {
    unsigned t;
};

/// Miller-Rabin with the given number of random witnesses, preceded by
/// small-prime trial division.
bool is_probable_prime(const BigInt& n, unsigned rounds, RandomSource& rng);

/// DSA-style construction: random prime q of q_bits, then p = k*q + 1 of
/// p_bits, then g = h^((p-1)/q) != 1. Primality uses 64 Miller-Rabin
/// rounds. Throws std::runtime_error after a bounded number of failed
/// candidate searches.
GroupParams generate_params(unsigned p_bits, unsigned q_bits, RandomSource& rng);

/// a uniform in [0, q-1], resampled when a = 0 (a degenerate key with
/// public part 1 would be rejected by every verifier check).
KeyPair keygen(const GroupParams& params, RandomSource& rng);

/// v uniform in [0, q-1], resampled while g^v = 1.
Commitment prover_commit(const GroupParams& params, RandomSource& rng);

/// Challenge drawn uniformly from [0, 2^(t-1)], upper bound inclusive.
BigInt verifier_challenge(ChallengeBits t, RandomSource& rng);

/// r = v - a*c mod q, reduced into [0, q-1].
BigInt prover_respond(const BigInt& a, const BigInt& v, const BigInt& c, const BigInt& q);

/// Accepts iff 2 <= A <= p-1, A^q = 1 mod p, and V = g^r * A^c mod p.
bool verify_interactive(const GroupParams& params, const BigInt& public_key, const BigInt& big_v,
                        const BigInt& c, const BigInt& r);

/// Fiat-Shamir proof: c = H(g || V || A || user_id || other_info) over the
/// canonical serialization, r = v - a*(c mod q) mod q. The hash digest must
/// be at least as wide as q; throws std::invalid_argument otherwise.
NizkpProof nizkp_prove(const GroupParams& params, const KeyPair& keypair, ByteView user_id,
                       ByteView other_info, const hashing::KeyedHash& hash, RandomSource& rng);

/// Same with a caller-fixed ephemeral v (deterministic; for tests).
NizkpProof nizkp_prove_with_nonce(const GroupParams& params, const KeyPair& keypair,
                                  ByteView user_id, ByteView other_info,
                                  const hashing::KeyedHash& hash, const BigInt& v);

/// Recomputes V' = g^r * A^(c mod q) mod p and accepts iff the public-key
/// checks pass and H(g || V' || A || user_id || other_info) equals c.
bool nizkp_verify(const GroupParams& params, const BigInt& public_key, const NizkpProof& proof,
                  const hashing::KeyedHash& hash);

/// Hash input: 4-byte big-endian length prefix before each field, g, V and
/// A as big-endian magnitude bytes, then user_id, then other_info.
Bytes canonical_hash_input(const BigInt& g, const BigInt& big_v, const BigInt& public_key,
                           ByteView user_id, ByteView other_info);

/// Wire form consumed by the knock transport: hex(c) zero-padded to
/// digest_bits/4 characters followed by hex(r) zero-padded to
/// ceil(bitlength(q)/4) characters.
std::string encode_proof_payload(const NizkpProof& proof, unsigned digest_bits, const BigInt& q);
std::size_t proof_payload_length(unsigned digest_bits, const BigInt& q);

struct DecodedPayload {
    BigInt c;
    BigInt r;
};

/// Splits a wire payload by the fixed widths; nullopt when the length is
/// wrong or a character is not hex.
std::optional<DecodedPayload> decode_proof_payload(std::string_view payload, unsigned digest_bits,
                                                   const BigInt& q);

}  // namespace crucible::schnorr
