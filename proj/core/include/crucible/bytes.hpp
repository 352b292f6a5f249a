#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crucible {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

Bytes bytes_of(std::string_view s);
std::string string_of(ByteView b);

/// Lowercase hex, two characters per byte.
std::string to_hex(ByteView data);
std::optional<Bytes> from_hex(std::string_view hex);

/// Unpadded standard-alphabet base64 (the form used inside argon2 encoded
/// hash strings).
std::string to_base64_nopad(ByteView data);

/// Timing-safe equality; false when lengths differ.
bool constant_time_equal(ByteView a, ByteView b);

void append_u32_be(Bytes& out, std::uint32_t v);

}  // namespace crucible
