#include <gtest/gtest.h>

#include "dosn/gf256.hpp"

namespace {

// Oracle: carry-less product reduced by long division with 0x11B.
std::uint8_t slow_mul(std::uint8_t a, std::uint8_t b) {
    std::uint16_t acc = 0;
    for (int i = 0; i < 8; ++i)
        if ((b >> i) & 1) acc ^= static_cast<std::uint16_t>(a) << i;
    for (int bit = 15; bit >= 8; --bit)
        if ((acc >> bit) & 1) acc ^= static_cast<std::uint16_t>(0x11B << (bit - 8));
    return static_cast<std::uint8_t>(acc);
}

// Oracle: linear search for the inverse.
std::uint8_t slow_inv(std::uint8_t a) {
    for (int b = 1; b < 256; ++b)
        if (slow_mul(a, static_cast<std::uint8_t>(b)) == 1) return static_cast<std::uint8_t>(b);
    return 0;
}

}  // namespace

using namespace dosn;

TEST(Gf256, KnownVectors) {
    EXPECT_EQ(gf256::mul(2, 3), 6);
    EXPECT_EQ(gf256::mul(0x53, 0xCA), 1);
    EXPECT_EQ(gf256::inv(0x53), 0xCA);
    EXPECT_EQ(gf256::inv(0xCA), 0x53);
    EXPECT_EQ(gf256::mul(0x57, 0x83), 0xC1);
    EXPECT_EQ(gf256::add(0x57, 0x83), 0xD4);
}

TEST(Gf256, MulMatchesBruteForceExhaustively) {
    for (int a = 0; a < 256; ++a)
        for (int b = 0; b < 256; ++b)
            ASSERT_EQ(gf256::mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)),
                      slow_mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)))
                << a << " * " << b;
}

TEST(Gf256, InverseMatchesBruteForce) {
    for (int a = 1; a < 256; ++a) {
        const auto x = static_cast<std::uint8_t>(a);
        ASSERT_EQ(gf256::inv(x), slow_inv(x)) << a;
        ASSERT_EQ(gf256::mul(x, gf256::inv(x)), 1);
    }
}

TEST(Gf256, ZeroHasNoInverse) {
    try {
        (void)gf256::inv(0);
        FAIL() << "expected DivisionByZero";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DivisionByZero);
    }
    EXPECT_THROW((void)gf256::div(5, 0), Error);
}

TEST(Gf256, FieldAxioms) {
    for (int a = 0; a < 256; ++a) {
        const auto x = static_cast<std::uint8_t>(a);
        ASSERT_EQ(gf256::add(x, x), 0);
        ASSERT_EQ(gf256::mul(x, 1), x);
        ASSERT_EQ(gf256::mul(x, 0), 0);
        for (int b = 0; b < 256; b += 7) {
            const auto y = static_cast<std::uint8_t>(b);
            ASSERT_EQ(gf256::mul(x, y), gf256::mul(y, x));
            for (int c = 0; c < 256; c += 29) {
                const auto z = static_cast<std::uint8_t>(c);
                ASSERT_EQ(gf256::mul(x, gf256::add(y, z)), gf256::add(gf256::mul(x, y), gf256::mul(x, z)));
                ASSERT_EQ(gf256::mul(gf256::mul(x, y), z), gf256::mul(x, gf256::mul(y, z)));
            }
            if (y != 0) {
                ASSERT_EQ(gf256::mul(gf256::div(x, y), y), x);
            }
        }
    }
}
