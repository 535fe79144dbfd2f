#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dosn {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline std::string to_string(ByteView b) { return std::string(b.begin(), b.end()); }

// Lowercase hex, no prefix.
std::string to_hex(ByteView data);

// Throws Error(InvalidEncoding) on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

// Little-endian, length-prefixed field writer used for every digest and
// signature input. Fields are appended in declaration order.
class CanonicalWriter {
public:
    CanonicalWriter& u8(std::uint8_t v) {
        out_.push_back(v);
        return *this;
    }

    CanonicalWriter& u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        return *this;
    }

    CanonicalWriter& bytes(ByteView b) {
        u64(b.size());
        out_.insert(out_.end(), b.begin(), b.end());
        return *this;
    }

    CanonicalWriter& str(std::string_view s) {
        u64(s.size());
        out_.insert(out_.end(), s.begin(), s.end());
        return *this;
    }

    const Bytes& data() const& { return out_; }
    Bytes take() && { return std::move(out_); }

private:
    Bytes out_;
};

}  // namespace dosn
