#include "ossa/digest.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

#include "ossa/errors.hpp"

namespace ossa {

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for digest");
    std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>()};
    return digest_hex(fnv1a64(bytes));
}

std::string digest_string(const std::string& text) {
    std::span<const unsigned char> bytes(reinterpret_cast<const unsigned char*>(text.data()),
                                         text.size());
    return digest_hex(fnv1a64(bytes));
}

}  // namespace ossa
