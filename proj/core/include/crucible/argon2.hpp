#pragma once

#include <cstdint>

#include "crucible/bytes.hpp"

namespace crucible::argon2 {

/// Argon2 cost parameters (version 0x13, type Argon2i, no secret or
/// associated data).
struct Argon2Params {
    std::uint32_t passes = 3;        // time cost t
    std::uint32_t memory_kib = 64;   // memory cost m, one KiB block each
    std::uint32_t lanes = 1;         // parallelism p
    std::uint32_t out_len = 32;      // tag length in bytes

    /// Throws std::invalid_argument when outside the supported ranges:
    /// passes >= 1, 1 <= lanes <= 2^24-1, memory_kib >= 8*lanes,
    /// 16 <= out_len <= 1024.
    void validate() const;
};

/// Raw Argon2i tag for (password, salt). salt must be at least 8 bytes.
/// Deterministic; lanes > 1 are computed on worker threads but the result
/// is identical to the sequential schedule.
Bytes argon2i_hash(ByteView password, ByteView salt, const Argon2Params& params);

}  // namespace crucible::argon2
