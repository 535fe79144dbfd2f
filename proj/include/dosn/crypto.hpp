#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "dosn/bytes.hpp"
#include "dosn/rng.hpp"

namespace dosn {

// SHA-256; shared by content identifiers, block digests and state digests.
using Digest = std::array<std::uint8_t, 32>;
Digest sha256(ByteView data);

class SymmetricKey {
public:
    static constexpr std::size_t kSize = 32;

    static SymmetricKey from_bytes(ByteView raw);

    ByteView bytes() const noexcept { return raw_; }
    bool operator==(const SymmetricKey&) const = default;

private:
    SymmetricKey() = default;
    friend SymmetricKey generate_key(DeterministicRng& rng);

    std::array<std::uint8_t, kSize> raw_{};
};

SymmetricKey generate_key(DeterministicRng& rng);

// XChaCha20-Poly1305 with a detached tag.
struct Ciphertext {
    static constexpr std::size_t kNonceSize = 24;
    static constexpr std::size_t kTagSize = 16;
    static constexpr std::size_t kOverhead = kNonceSize + kTagSize;

    Bytes nonce;
    Bytes body;
    Bytes tag;

    // nonce || body || tag
    Bytes serialize() const;
    // Throws Error(InvalidEncoding) when shorter than kOverhead.
    static Ciphertext parse(ByteView wire);
};

// Random 16-octet prefix drawn once, followed by a 64-bit counter; nonces
// never repeat for the lifetime of the source.
class NonceSource {
public:
    explicit NonceSource(DeterministicRng& rng);
    Bytes next();

private:
    Bytes prefix_;
    std::uint64_t counter_ = 0;
};

Ciphertext encrypt(const SymmetricKey& key, ByteView plaintext, ByteView ad, NonceSource& nonces);

// Throws Error(AuthenticationFailed) on wrong key or any modified field.
Bytes decrypt(const SymmetricKey& key, const Ciphertext& ct, ByteView ad);

// Lowercase hex of an Ed25519 verification key.
struct Address {
    std::string hex;

    auto operator<=>(const Address&) const = default;
    bool empty() const noexcept { return hex.empty(); }
};

struct Signature {
    std::array<std::uint8_t, 64> bytes{};

    bool operator==(const Signature&) const = default;
    std::string hex() const { return to_hex(bytes); }
    static Signature from_hex(std::string_view hex);
};

class KeyPair {
public:
    static constexpr std::size_t kSeedSize = 32;

    static KeyPair generate(DeterministicRng& rng);
    static KeyPair from_seed(ByteView seed);

    const Address& address() const noexcept { return address_; }
    ByteView seed() const noexcept { return seed_; }

    Signature sign(ByteView message) const;

private:
    std::array<std::uint8_t, kSeedSize> seed_{};
    std::array<std::uint8_t, 64> secret_{};
    Address address_;
};

// False for malformed addresses as well as bad signatures.
bool verify(const Address& address, ByteView message, const Signature& sig);

}  // namespace dosn
