#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace ossa {

/// FNV-1a 64-bit over a byte range. Used for artifact provenance digests
/// logged into reports, not for security.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);

std::string digest_hex(std::uint64_t digest);

/// Digest of a whole file's bytes. Throws IoError if unreadable.
std::string digest_file(const std::string& path);

std::string digest_string(const std::string& text);

}  // namespace ossa
