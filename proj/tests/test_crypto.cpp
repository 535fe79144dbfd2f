#include <gtest/gtest.h>

#include "dosn/crypto.hpp"
#include "dosn/error.hpp"
#include "dosn/rng.hpp"

using namespace dosn;

TEST(Sha256, KnownVectors) {
    // Values computed with Python's hashlib.
    EXPECT_EQ(to_hex(sha256(Bytes{})), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(to_hex(sha256(to_bytes("abc"))), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Hex, RoundTripAndRejects) {
    const Bytes b{0x00, 0xAB, 0xFF};
    EXPECT_EQ(to_hex(b), "00abff");
    EXPECT_EQ(from_hex("00abff"), b);
    EXPECT_EQ(from_hex("00ABFF"), b);
    EXPECT_THROW(from_hex("abc"), Error);
    EXPECT_THROW(from_hex("zz"), Error);
}

TEST(Rng, DeterministicAndRestorable) {
    DeterministicRng a(1);
    DeterministicRng b(1);
    EXPECT_EQ(a.bytes(100), b.bytes(100));
    DeterministicRng c(2);
    EXPECT_NE(DeterministicRng(1).bytes(32), c.bytes(32));

    DeterministicRng full(9);
    const Bytes head = full.bytes(37);
    const Bytes tail = full.bytes(100);
    DeterministicRng resumed(9, 37);
    EXPECT_EQ(resumed.bytes(100), tail);
    EXPECT_EQ(full.position(), 137U);
    (void)head;
}

TEST(Rng, UniformStaysInRange) {
    DeterministicRng r(3);
    std::array<int, 7> hist{};
    for (int i = 0; i < 7000; ++i) ++hist[r.uniform(7)];
    for (int h : hist) EXPECT_GT(h, 800);
}

class AeadTest : public ::testing::Test {
protected:
    DeterministicRng rng{17};
    SymmetricKey key = generate_key(rng);
    NonceSource nonces{rng};
    Bytes ad = to_bytes("owner");
};

TEST_F(AeadTest, RoundTrip) {
    for (std::size_t len : {0U, 1U, 63U, 64U, 1000U}) {
        const Bytes pt = rng.bytes(len);
        const Ciphertext ct = encrypt(key, pt, ad, nonces);
        EXPECT_EQ(ct.nonce.size(), Ciphertext::kNonceSize);
        EXPECT_EQ(ct.tag.size(), Ciphertext::kTagSize);
        EXPECT_EQ(ct.serialize().size(), len + Ciphertext::kOverhead);
        EXPECT_EQ(decrypt(key, Ciphertext::parse(ct.serialize()), ad), pt);
    }
}

TEST_F(AeadTest, EveryBitFlipIsDetected) {
    const Bytes pt = rng.bytes(24);
    const Bytes wire = encrypt(key, pt, ad, nonces).serialize();
    for (std::size_t bit = 0; bit < wire.size() * 8; ++bit) {
        Bytes bad = wire;
        bad[bit / 8] ^= static_cast<std::uint8_t>(1U << (bit % 8));
        try {
            decrypt(key, Ciphertext::parse(bad), ad);
            FAIL() << "bit " << bit << " accepted";
        } catch (const Error& e) {
            ASSERT_EQ(e.code(), ErrorCode::AuthenticationFailed);
        }
    }
}

TEST_F(AeadTest, WrongKeyOrAdFails) {
    const Ciphertext ct = encrypt(key, to_bytes("hi"), ad, nonces);
    const SymmetricKey other = generate_key(rng);
    EXPECT_THROW(decrypt(other, ct, ad), Error);
    EXPECT_THROW(decrypt(key, ct, to_bytes("someone else")), Error);
}

TEST_F(AeadTest, NoncesNeverRepeat) {
    std::set<Bytes> seen;
    for (int i = 0; i < 1000; ++i) ASSERT_TRUE(seen.insert(nonces.next()).second);
}

TEST_F(AeadTest, ShortWireIsInvalidEncoding) {
    try {
        Ciphertext::parse(Bytes(39));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidEncoding);
    }
}

TEST(Keys, KeyFromBytesChecksLength) {
    EXPECT_THROW(SymmetricKey::from_bytes(Bytes(31)), Error);
    EXPECT_NO_THROW(SymmetricKey::from_bytes(Bytes(32)));
}

TEST(Signatures, SignVerify) {
    DeterministicRng rng(5);
    const KeyPair kp = KeyPair::generate(rng);
    const KeyPair other = KeyPair::generate(rng);
    const Bytes msg = to_bytes("message");
    const Signature sig = kp.sign(msg);
    EXPECT_EQ(kp.address().hex.size(), 64U);
    EXPECT_TRUE(verify(kp.address(), msg, sig));
    EXPECT_FALSE(verify(other.address(), msg, sig));
    EXPECT_FALSE(verify(kp.address(), to_bytes("massage"), sig));
    Signature bad = sig;
    bad.bytes[0] ^= 1;
    EXPECT_FALSE(verify(kp.address(), msg, bad));
    EXPECT_FALSE(verify(Address{"nothex"}, msg, sig));

    std::string upper = kp.address().hex;
    for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (upper != kp.address().hex) {
        EXPECT_FALSE(verify(Address{upper}, msg, sig));
    }
}

TEST(Signatures, SeedDeterminesKeyPair) {
    DeterministicRng rng(6);
    const KeyPair kp = KeyPair::generate(rng);
    const KeyPair again = KeyPair::from_seed(kp.seed());
    EXPECT_EQ(again.address(), kp.address());
    EXPECT_EQ(Signature::from_hex(kp.sign(to_bytes("x")).hex()), again.sign(to_bytes("x")));
}
