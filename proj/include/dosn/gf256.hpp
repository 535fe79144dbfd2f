#pragma once

#include <cstdint>

#include "dosn/error.hpp"

// Arithmetic in GF(2^8) with reduction polynomial x^8 + x^4 + x^3 + x + 1.
namespace dosn::gf256 {

inline constexpr std::uint16_t kReduction = 0x11B;

constexpr std::uint8_t add(std::uint8_t a, std::uint8_t b) noexcept {
    return static_cast<std::uint8_t>(a ^ b);
}

constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) noexcept {
    std::uint8_t product = 0;
    std::uint8_t x = a;
    for (std::uint8_t y = b; y != 0; y >>= 1) {
        if (y & 1) product ^= x;
        const bool carry = x & 0x80;
        x = static_cast<std::uint8_t>(x << 1);
        if (carry) x ^= static_cast<std::uint8_t>(kReduction & 0xFF);
    }
    return product;
}

// a^254 = a^-1 since the multiplicative group has order 255.
constexpr std::uint8_t inv(std::uint8_t a) {
    if (a == 0) throw Error(ErrorCode::DivisionByZero, "zero has no inverse in GF(256)");
    std::uint8_t result = 1;
    std::uint8_t base = a;
    for (unsigned e = 254; e != 0; e >>= 1) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
    }
    return result;
}

constexpr std::uint8_t div(std::uint8_t a, std::uint8_t b) { return mul(a, inv(b)); }

static_assert(mul(0x53, 0xCA) == 0x01);
static_assert(inv(0x01) == 0x01);

}  // namespace dosn::gf256
