#include "crucible/hashing.hpp"

#include <sodium.h>

#include <atomic>
#include <stdexcept>

namespace crucible::hashing {

namespace {

std::atomic<std::uint64_t> g_hash_invocations{0};

}  // namespace

std::uint64_t hash_invocations() {
    return g_hash_invocations.load(std::memory_order_relaxed);
}

void count_hash_invocation() {
    g_hash_invocations.fetch_add(1, std::memory_order_relaxed);
}

std::string KeyedHash::hex_digest(ByteView message) const {
    return to_hex_fixed(digest(message), digest_bits() / 4);
}

Blake2bHash::Blake2bHash(Bytes key, unsigned out_bytes)
    : key_(std::move(key)), out_bytes_(out_bytes) {
    if (out_bytes_ < crypto_generichash_BYTES_MIN || out_bytes_ > crypto_generichash_BYTES_MAX) {
        throw std::invalid_argument("Blake2bHash: output size out of range");
    }
    if (key_.size() > crypto_generichash_KEYBYTES_MAX) {
        throw std::invalid_argument("Blake2bHash: key too long");
    }
}

BigInt Blake2bHash::digest(ByteView message) const {
    return bigint_from_be_bytes(keyed_blake2b(message, key_, out_bytes_));
}

ChaosKeyedHash::ChaosKeyedHash(chaos::ChaosKey key, chaos::ChaosHashParams params)
    : key_(std::move(key)), params_(params) {
    if (!key_.valid()) throw std::invalid_argument("ChaosKeyedHash: bad key");
    if (!params_.valid()) throw std::invalid_argument("ChaosKeyedHash: bad params");
}

BigInt ChaosKeyedHash::digest(ByteView message) const {
    return chaos::chaos_hash(message, key_, params_);
}

Bytes keyed_blake2b(ByteView message, ByteView key, unsigned out_bytes) {
    if (out_bytes < crypto_generichash_BYTES_MIN || out_bytes > crypto_generichash_BYTES_MAX) {
        throw std::invalid_argument("keyed_blake2b: output size out of range");
    }
    if (key.size() > crypto_generichash_KEYBYTES_MAX) {
        throw std::invalid_argument("keyed_blake2b: key too long");
    }
    count_hash_invocation();
    Bytes out(out_bytes);
    crypto_generichash(out.data(), out.size(), message.data(), message.size(),
                       key.empty() ? nullptr : key.data(), key.size());
    return out;
}

}  // namespace crucible::hashing
