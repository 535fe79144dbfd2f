#include "dosn/crypto.hpp"

#include <sodium.h>

#include <algorithm>

#include "dosn/error.hpp"

namespace dosn {

namespace {

void ensure_sodium() {
    static const bool ready = sodium_init() >= 0;
    if (!ready) throw Error(ErrorCode::InvalidArgument, "libsodium initialisation failed");
}

}  // namespace

static_assert(Ciphertext::kNonceSize == crypto_aead_xchacha20poly1305_ietf_NPUBBYTES);
static_assert(Ciphertext::kTagSize == crypto_aead_xchacha20poly1305_ietf_ABYTES);
static_assert(SymmetricKey::kSize == crypto_aead_xchacha20poly1305_ietf_KEYBYTES);

Digest sha256(ByteView data) {
    ensure_sodium();
    Digest out{};
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

SymmetricKey SymmetricKey::from_bytes(ByteView raw) {
    if (raw.size() != kSize)
        throw Error(ErrorCode::InvalidArgument, "symmetric key must be 32 octets");
    SymmetricKey key;
    std::copy(raw.begin(), raw.end(), key.raw_.begin());
    return key;
}

SymmetricKey generate_key(DeterministicRng& rng) {
    SymmetricKey key;
    rng.fill(key.raw_);
    return key;
}

Bytes Ciphertext::serialize() const {
    Bytes out;
    out.reserve(nonce.size() + body.size() + tag.size());
    out.insert(out.end(), nonce.begin(), nonce.end());
    out.insert(out.end(), body.begin(), body.end());
    out.insert(out.end(), tag.begin(), tag.end());
    return out;
}

Ciphertext Ciphertext::parse(ByteView wire) {
    if (wire.size() < kOverhead) throw Error(ErrorCode::InvalidEncoding, "ciphertext too short");
    Ciphertext ct;
    ct.nonce.assign(wire.begin(), wire.begin() + kNonceSize);
    ct.body.assign(wire.begin() + kNonceSize, wire.end() - kTagSize);
    ct.tag.assign(wire.end() - kTagSize, wire.end());
    return ct;
}

NonceSource::NonceSource(DeterministicRng& rng) : prefix_(rng.bytes(Ciphertext::kNonceSize - 8)) {}

Bytes NonceSource::next() {
    Bytes nonce = prefix_;
    const std::uint64_t c = counter_++;
    for (int i = 0; i < 8; ++i) nonce.push_back(static_cast<std::uint8_t>(c >> (8 * i)));
    return nonce;
}

Ciphertext encrypt(const SymmetricKey& key, ByteView plaintext, ByteView ad, NonceSource& nonces) {
    ensure_sodium();
    Ciphertext ct;
    ct.nonce = nonces.next();
    ct.body.resize(plaintext.size());
    ct.tag.resize(Ciphertext::kTagSize);
    crypto_aead_xchacha20poly1305_ietf_encrypt_detached(
        ct.body.data(), ct.tag.data(), nullptr, plaintext.data(), plaintext.size(), ad.data(),
        ad.size(), nullptr, ct.nonce.data(), key.bytes().data());
    return ct;
}

Bytes decrypt(const SymmetricKey& key, const Ciphertext& ct, ByteView ad) {
    ensure_sodium();
    if (ct.nonce.size() != Ciphertext::kNonceSize || ct.tag.size() != Ciphertext::kTagSize)
        throw Error(ErrorCode::AuthenticationFailed, "malformed nonce or tag");
    Bytes plain(ct.body.size());
    const int rc = crypto_aead_xchacha20poly1305_ietf_decrypt_detached(
        plain.data(), nullptr, ct.body.data(), ct.body.size(), ct.tag.data(), ad.data(), ad.size(),
        ct.nonce.data(), key.bytes().data());
    if (rc != 0) throw Error(ErrorCode::AuthenticationFailed, "ciphertext rejected");
    return plain;
}

Signature Signature::from_hex(std::string_view hex) {
    const Bytes raw = dosn::from_hex(hex);
    if (raw.size() != 64) throw Error(ErrorCode::InvalidEncoding, "signature must be 64 octets");
    Signature sig;
    std::copy(raw.begin(), raw.end(), sig.bytes.begin());
    return sig;
}

KeyPair KeyPair::generate(DeterministicRng& rng) {
    const Bytes seed = rng.bytes(kSeedSize);
    return from_seed(seed);
}

KeyPair KeyPair::from_seed(ByteView seed) {
    ensure_sodium();
    if (seed.size() != kSeedSize) throw Error(ErrorCode::InvalidArgument, "seed must be 32 octets");
    KeyPair kp;
    std::copy(seed.begin(), seed.end(), kp.seed_.begin());
    std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES> pk{};
    crypto_sign_seed_keypair(pk.data(), kp.secret_.data(), kp.seed_.data());
    kp.address_ = Address{to_hex(pk)};
    return kp;
}

Signature KeyPair::sign(ByteView message) const {
    Signature sig;
    crypto_sign_detached(sig.bytes.data(), nullptr, message.data(), message.size(), secret_.data());
    return sig;
}

bool verify(const Address& address, ByteView message, const Signature& sig) {
    ensure_sodium();
    if (address.hex.size() != 2 * crypto_sign_PUBLICKEYBYTES) return false;
    if (std::any_of(address.hex.begin(), address.hex.end(), [](char c) { return c >= 'A' && c <= 'F'; }))
        return false;
    Bytes pk;
    try {
        pk = from_hex(address.hex);
    } catch (const Error&) {
        return false;
    }
    return crypto_sign_verify_detached(sig.bytes.data(), message.data(), message.size(),
                                       pk.data()) == 0;
}

}  // namespace dosn
