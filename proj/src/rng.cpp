#include "dosn/rng.hpp"

#include <sodium.h>

#include <array>
#include <limits>

#include "dosn/error.hpp"

namespace dosn {

namespace {
constexpr std::size_t kBlock = 64;
}

DeterministicRng::DeterministicRng(std::uint64_t seed, std::uint64_t position)
    : seed_(seed), position_(position) {
    if (sodium_init() < 0) throw Error(ErrorCode::InvalidArgument, "libsodium initialisation failed");
    CanonicalWriter w;
    w.str("dosn/rng/v1").u64(seed);
    crypto_hash_sha256(key_, w.data().data(), w.data().size());
}

void DeterministicRng::fill(std::span<std::uint8_t> out) {
    static const std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
    std::array<std::uint8_t, kBlock> block{};
    std::size_t written = 0;
    while (written < out.size()) {
        const auto counter = static_cast<std::uint32_t>(position_ / kBlock);
        const std::size_t offset = position_ % kBlock;
        block.fill(0);
        crypto_stream_chacha20_ietf_xor_ic(block.data(), block.data(), block.size(), nonce.data(),
                                           counter, key_);
        const std::size_t take = std::min(kBlock - offset, out.size() - written);
        std::copy_n(block.begin() + static_cast<std::ptrdiff_t>(offset), take,
                    out.begin() + static_cast<std::ptrdiff_t>(written));
        written += take;
        position_ += take;
    }
}

Bytes DeterministicRng::bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
}

std::uint8_t DeterministicRng::next_u8() {
    std::uint8_t b = 0;
    fill(std::span(&b, 1));
    return b;
}

std::uint64_t DeterministicRng::next_u64() {
    std::array<std::uint8_t, 8> raw{};
    fill(raw);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | raw[static_cast<std::size_t>(i)];
    return v;
}

std::uint64_t DeterministicRng::uniform(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorCode::InvalidArgument, "uniform bound must be nonzero");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % bound;
}

}  // namespace dosn
