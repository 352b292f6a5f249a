#include "crucible/argon2.hpp"

#include <sodium.h>

#include <bit>
#include <cstring>
#include <initializer_list>
#include <memory>
#include <stdexcept>
#include <thread>
#include <vector>

namespace crucible::argon2 {

namespace {

constexpr std::uint32_t kVersion = 0x13;
constexpr std::uint32_t kTypeArgon2i = 1;
constexpr std::uint32_t kSyncPoints = 4;
constexpr std::uint32_t kBlockWords = 128;  // 1 KiB block
constexpr std::uint32_t kAddressesPerBlock = 128;
constexpr std::uint32_t kPrehashDigestLen = 64;
constexpr std::uint32_t kPrehashSeedLen = 72;

struct Block {
    std::uint64_t v[kBlockWords];
};

void xor_into(Block& dst, const Block& src) {
    for (std::uint32_t i = 0; i < kBlockWords; ++i) dst.v[i] ^= src.v[i];
}

void store_le32(std::uint8_t* out, std::uint32_t v) {
    out[0] = static_cast<std::uint8_t>(v);
    out[1] = static_cast<std::uint8_t>(v >> 8);
    out[2] = static_cast<std::uint8_t>(v >> 16);
    out[3] = static_cast<std::uint8_t>(v >> 24);
}

void block_to_bytes(const Block& b, std::uint8_t* out) {
    for (std::uint32_t i = 0; i < kBlockWords; ++i) {
        std::uint64_t w = b.v[i];
        for (int j = 0; j < 8; ++j) out[8 * i + j] = static_cast<std::uint8_t>(w >> (8 * j));
    }
}

void block_from_bytes(Block& b, const std::uint8_t* in) {
    for (std::uint32_t i = 0; i < kBlockWords; ++i) {
        std::uint64_t w = 0;
        for (int j = 7; j >= 0; --j) w = (w << 8) | in[8 * i + j];
        b.v[i] = w;
    }
}

void blake2b(std::uint8_t* out, std::size_t out_len, std::initializer_list<ByteView> parts) {
    crypto_generichash_state st;
    crypto_generichash_init(&st, nullptr, 0, out_len);
    for (ByteView part : parts) {
        if (!part.empty()) crypto_generichash_update(&st, part.data(), part.size());
    }
    crypto_generichash_final(&st, out, out_len);
}

// Variable-length hash H': chains 64-byte digests, emitting 32 bytes per
// link, with a shorter final digest for the tail.
void blake2b_long(std::uint8_t* out, std::uint32_t out_len, ByteView in) {
    std::uint8_t len_le[4];
    store_le32(len_le, out_len);
    if (out_len <= 64) {
        blake2b(out, out_len, {ByteView(len_le, 4), in});
        return;
    }
    std::uint8_t buf[64];
    blake2b(buf, 64, {ByteView(len_le, 4), in});
    std::memcpy(out, buf, 32);
    out += 32;
    std::uint32_t to_produce = out_len - 32;
    while (to_produce > 64) {
        blake2b(buf, 64, {ByteView(buf, 64)});
        std::memcpy(out, buf, 32);
        out += 32;
        to_produce -= 32;
    }
    std::uint8_t tail[64];
    blake2b(tail, to_produce, {ByteView(buf, 64)});
    std::memcpy(out, tail, to_produce);
}

inline std::uint64_t mix_mul(std::uint64_t x, std::uint64_t y) {
    const std::uint64_t m = 0xffffffffu;
    return x + y + 2 * (x & m) * (y & m);
}

inline void g_mix(std::uint64_t& a, std::uint64_t& b, std::uint64_t& c, std::uint64_t& d) {
    a = mix_mul(a, b);
    d = std::rotr(d ^ a, 32);
    c = mix_mul(c, d);
    b = std::rotr(b ^ c, 24);
    a = mix_mul(a, b);
    d = std::rotr(d ^ a, 16);
    c = mix_mul(c, d);
    b = std::rotr(b ^ c, 63);
}

inline void permutation_round(std::uint64_t* v, int i0, int i1, int i2, int i3, int i4, int i5,
                              int i6, int i7, int i8, int i9, int i10, int i11, int i12, int i13,
                              int i14, int i15) {
    g_mix(v[i0], v[i4], v[i8], v[i12]);
    g_mix(v[i1], v[i5], v[i9], v[i13]);
    g_mix(v[i2], v[i6], v[i10], v[i14]);
    g_mix(v[i3], v[i7], v[i11], v[i15]);
    g_mix(v[i0], v[i5], v[i10], v[i15]);
    g_mix(v[i1], v[i6], v[i11], v[i12]);
    g_mix(v[i2], v[i7], v[i8], v[i13]);
    g_mix(v[i3], v[i4], v[i9], v[i14]);
}

// Compression function G. with_xor selects the pass>0 behaviour of
// version 0x13 (result additionally XORed over the previous contents).
void fill_block(const Block& prev, const Block& ref, Block& next, bool with_xor) {
    Block r;
    for (std::uint32_t i = 0; i < kBlockWords; ++i) r.v[i] = prev.v[i] ^ ref.v[i];
    Block tmp = r;
    if (with_xor) xor_into(tmp, next);

    for (int i = 0; i < 8; ++i) {
        int b = 16 * i;
        permutation_round(r.v, b, b + 1, b + 2, b + 3, b + 4, b + 5, b + 6, b + 7, b + 8, b + 9,
                          b + 10, b + 11, b + 12, b + 13, b + 14, b + 15);
    }
    for (int i = 0; i < 8; ++i) {
        int b = 2 * i;
        permutation_round(r.v, b, b + 1, b + 16, b + 17, b + 32, b + 33, b + 48, b + 49, b + 64,
                          b + 65, b + 80, b + 81, b + 96, b + 97, b + 112, b + 113);
    }
    for (std::uint32_t i = 0; i < kBlockWords; ++i) next.v[i] = tmp.v[i] ^ r.v[i];
}

struct Instance {
    Block* memory = nullptr;
    std::uint32_t passes = 0;
    std::uint32_t lanes = 0;
    std::uint32_t lane_length = 0;
    std::uint32_t segment_length = 0;
    std::uint32_t memory_blocks = 0;
};

struct Position {
    std::uint32_t pass;
    std::uint32_t lane;
    std::uint32_t slice;
    std::uint32_t index;
};

std::uint32_t index_alpha(const Instance& inst, const Position& pos, std::uint32_t pseudo_rand,
                          bool same_lane) {
    std::uint32_t reference_area_size;
    if (pos.pass == 0) {
        if (pos.slice == 0) {
            reference_area_size = pos.index - 1;
        } else if (same_lane) {
            reference_area_size = pos.slice * inst.segment_length + pos.index - 1;
        } else {
            reference_area_size = pos.slice * inst.segment_length - (pos.index == 0 ? 1 : 0);
        }
    } else {
        if (same_lane) {
            reference_area_size = inst.lane_length - inst.segment_length + pos.index - 1;
        } else {
            reference_area_size = inst.lane_length - inst.segment_length - (pos.index == 0 ? 1 : 0);
        }
    }

    std::uint64_t rel = pseudo_rand;
    rel = (rel * rel) >> 32;
    rel = reference_area_size - 1 - ((reference_area_size * rel) >> 32);

    std::uint32_t start_position = 0;
    if (pos.pass != 0) {
        start_position = pos.slice == kSyncPoints - 1 ? 0 : (pos.slice + 1) * inst.segment_length;
    }
    return static_cast<std::uint32_t>((start_position + rel) % inst.lane_length);
}

void next_addresses(Block& address_block, Block& input_block) {
    static const Block zero_block = {};
    input_block.v[6]++;
    fill_block(zero_block, input_block, address_block, false);
    fill_block(zero_block, address_block, address_block, false);
}

void fill_segment(const Instance& inst, Position pos) {
    Block address_block{};
    Block input_block{};
    input_block.v[0] = pos.pass;
    input_block.v[1] = pos.lane;
    input_block.v[2] = pos.slice;
    input_block.v[3] = inst.memory_blocks;
    input_block.v[4] = inst.passes;
    input_block.v[5] = kTypeArgon2i;

    std::uint32_t starting_index = 0;
    if (pos.pass == 0 && pos.slice == 0) {
        starting_index = 2;  // first two blocks of each lane are seeded
        next_addresses(address_block, input_block);
    }

    std::uint32_t curr_offset =
        pos.lane * inst.lane_length + pos.slice * inst.segment_length + starting_index;
    std::uint32_t prev_offset =
        curr_offset % inst.lane_length == 0 ? curr_offset + inst.lane_length - 1 : curr_offset - 1;

    for (std::uint32_t i = starting_index; i < inst.segment_length;
         ++i, ++curr_offset, ++prev_offset) {
        if (curr_offset % inst.lane_length == 1) prev_offset = curr_offset - 1;

        if (i % kAddressesPerBlock == 0) next_addresses(address_block, input_block);
        const std::uint64_t pseudo_rand = address_block.v[i % kAddressesPerBlock];

        std::uint32_t ref_lane =
            static_cast<std::uint32_t>((pseudo_rand >> 32) % inst.lanes);
        if (pos.pass == 0 && pos.slice == 0) ref_lane = pos.lane;

        pos.index = i;
        const std::uint32_t ref_index =
            index_alpha(inst, pos, static_cast<std::uint32_t>(pseudo_rand), ref_lane == pos.lane);

        const Block& ref = inst.memory[inst.lane_length * ref_lane + ref_index];
        fill_block(inst.memory[prev_offset], ref, inst.memory[curr_offset], pos.pass != 0);
    }
}

void ensure_sodium() {
    static const int ok = sodium_init();
    if (ok < 0) throw std::runtime_error("libsodium initialisation failed");
}

}  // namespace

void Argon2Params::validate() const {
    if (passes < 1) throw std::invalid_argument("argon2: passes must be >= 1");
    if (lanes < 1 || lanes > 0xFFFFFF) throw std::invalid_argument("argon2: lanes out of range");
    if (memory_kib < 8 * lanes) throw std::invalid_argument("argon2: memory must be >= 8*lanes KiB");
    // 16-byte floor comes from the BLAKE2b backend; nothing here needs less.
    if (out_len < 16 || out_len > 1024) throw std::invalid_argument("argon2: tag length out of range");
}

Bytes argon2i_hash(ByteView password, ByteView salt, const Argon2Params& params) {
    params.validate();
    if (salt.size() < 8) throw std::invalid_argument("argon2: salt must be at least 8 bytes");
    ensure_sodium();

    Instance inst;
    inst.passes = params.passes;
    inst.lanes = params.lanes;
    inst.memory_blocks = 4 * params.lanes * (params.memory_kib / (4 * params.lanes));
    inst.segment_length = inst.memory_blocks / (params.lanes * kSyncPoints);
    inst.lane_length = inst.segment_length * kSyncPoints;

    std::unique_ptr<Block[]> memory(new Block[inst.memory_blocks]);
    inst.memory = memory.get();

    // H0 commits to every parameter and input.
    std::uint8_t h0[kPrehashSeedLen] = {};
    {
        std::uint8_t le[4];
        crypto_generichash_state st;
        crypto_generichash_init(&st, nullptr, 0, kPrehashDigestLen);
        auto feed32 = [&](std::uint32_t v) {
            store_le32(le, v);
            crypto_generichash_update(&st, le, 4);
        };
        feed32(params.lanes);
        feed32(params.out_len);
        feed32(params.memory_kib);
        feed32(params.passes);
        feed32(kVersion);
        feed32(kTypeArgon2i);
        feed32(static_cast<std::uint32_t>(password.size()));
        if (!password.empty()) crypto_generichash_update(&st, password.data(), password.size());
        feed32(static_cast<std::uint32_t>(salt.size()));
        crypto_generichash_update(&st, salt.data(), salt.size());
        feed32(0);  // secret
        feed32(0);  // associated data
        crypto_generichash_final(&st, h0, kPrehashDigestLen);
    }

    // First two blocks of every lane come from H0.
    std::uint8_t block_bytes[1024];
    for (std::uint32_t lane = 0; lane < inst.lanes; ++lane) {
        for (std::uint32_t idx = 0; idx < 2; ++idx) {
            store_le32(h0 + kPrehashDigestLen, idx);
            store_le32(h0 + kPrehashDigestLen + 4, lane);
            blake2b_long(block_bytes, 1024, ByteView(h0, kPrehashSeedLen));
            block_from_bytes(inst.memory[lane * inst.lane_length + idx], block_bytes);
        }
    }

    for (std::uint32_t pass = 0; pass < inst.passes; ++pass) {
        for (std::uint32_t slice = 0; slice < kSyncPoints; ++slice) {
            if (inst.lanes == 1) {
                fill_segment(inst, Position{pass, 0, slice, 0});
            } else {
                std::vector<std::thread> workers;
                workers.reserve(inst.lanes);
                for (std::uint32_t lane = 0; lane < inst.lanes; ++lane) {
                    workers.emplace_back(
                        [&, lane] { fill_segment(inst, Position{pass, lane, slice, 0}); });
                }
                for (auto& w : workers) w.join();
            }
        }
    }

    Block final_block = inst.memory[inst.lane_length - 1];
    for (std::uint32_t lane = 1; lane < inst.lanes; ++lane) {
        xor_into(final_block, inst.memory[lane * inst.lane_length + inst.lane_length - 1]);
    }
    block_to_bytes(final_block, block_bytes);

    Bytes tag(params.out_len);
    blake2b_long(tag.data(), params.out_len, ByteView(block_bytes, 1024));
    sodium_memzero(h0, sizeof h0);
    return tag;
}

}  // namespace crucible::argon2
