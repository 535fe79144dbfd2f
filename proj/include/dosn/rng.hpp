#pragma once

#include <cstdint>
#include <span>

#include "dosn/bytes.hpp"

namespace dosn {

// Seeded ChaCha20 keystream. Every secret in the system (content keys,
// nonces, signing seeds, polynomial coefficients, placement shuffles) is
// drawn from one of these, so a seed fully determines a run.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed, std::uint64_t position = 0);

    void fill(std::span<std::uint8_t> out);
    Bytes bytes(std::size_t n);
    std::uint8_t next_u8();
    std::uint64_t next_u64();

    // Uniform in [0, bound). bound must be nonzero.
    std::uint64_t uniform(std::uint64_t bound);

    std::uint64_t seed() const noexcept { return seed_; }
    // Keystream octets consumed so far; (seed, position) restores the stream.
    std::uint64_t position() const noexcept { return position_; }

private:
    std::uint64_t seed_;
    std::uint64_t position_;
    std::uint8_t key_[32];
};

}  // namespace dosn
