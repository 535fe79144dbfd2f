#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dosn/bytes.hpp"
#include "dosn/error.hpp"
#include "dosn/gf256.hpp"
#include "dosn/rng.hpp"

namespace dosn {

// One point on each of the per-octet polynomials of a shared secret.
struct KeyShare {
    std::string content_id;
    std::uint8_t x = 0;
    std::uint8_t threshold = 0;
    std::uint8_t share_count = 0;
    Bytes y;

    bool operator==(const KeyShare&) const = default;
};

namespace shamir {

inline void check_parameters(std::size_t secret_len, unsigned n, unsigned t) {
    if (t == 0 || t > n || n > 255)
        throw Error(ErrorCode::InvalidThreshold,
                    "need 1 <= t <= n <= 255, got t=" + std::to_string(t) + " n=" + std::to_string(n));
    if (secret_len == 0) throw Error(ErrorCode::InvalidArgument, "secret must not be empty");
}

// Evaluates sum_k coeff[k] * x^k by Horner's rule.
inline std::uint8_t evaluate(std::span<const std::uint8_t> coeffs, std::uint8_t x) {
    std::uint8_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = gf256::add(gf256::mul(acc, x), *it);
    return acc;
}

}  // namespace shamir

// Splits with caller-chosen higher coefficients: coefficient(octet_index, degree)
// returns the coefficient of x^degree (degree >= 1) for that octet's polynomial.
// Share i (0-based) gets x = i + 1.
template <typename CoefficientSource>
    requires std::invocable<CoefficientSource&, std::size_t, unsigned>
std::vector<KeyShare> split_with(ByteView secret, unsigned n, unsigned t, const std::string& content_id,
                                 CoefficientSource&& coefficient) {
    shamir::check_parameters(secret.size(), n, t);
    std::vector<KeyShare> shares(n);
    for (unsigned i = 0; i < n; ++i) {
        shares[i].content_id = content_id;
        shares[i].x = static_cast<std::uint8_t>(i + 1);
        shares[i].threshold = static_cast<std::uint8_t>(t);
        shares[i].share_count = static_cast<std::uint8_t>(n);
        shares[i].y.resize(secret.size());
    }
    std::vector<std::uint8_t> coeffs(t);
    for (std::size_t pos = 0; pos < secret.size(); ++pos) {
        coeffs[0] = secret[pos];
        for (unsigned d = 1; d < t; ++d) coeffs[d] = static_cast<std::uint8_t>(coefficient(pos, d));
        for (auto& share : shares) share.y[pos] = shamir::evaluate(coeffs, share.x);
    }
    return shares;
}

std::vector<KeyShare> split(ByteView secret, unsigned n, unsigned t, DeterministicRng& rng,
                            const std::string& content_id = {});

// Lagrange interpolation at x = 0 over the first `threshold` shares.
// Throws MismatchedShares for inconsistent metadata, duplicate or zero x, and
// InsufficientShares when fewer than `threshold` shares are supplied.
Bytes reconstruct(std::span<const KeyShare> shares);

}  // namespace dosn
