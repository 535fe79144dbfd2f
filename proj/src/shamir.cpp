#include "dosn/shamir.hpp"

#include <set>

namespace dosn {

std::vector<KeyShare> split(ByteView secret, unsigned n, unsigned t, DeterministicRng& rng,
                            const std::string& content_id) {
    return split_with(secret, n, t, content_id, [&rng](std::size_t, unsigned) { return rng.next_u8(); });
}

Bytes reconstruct(std::span<const KeyShare> shares) {
    if (shares.empty()) throw Error(ErrorCode::InsufficientShares, "no shares supplied");

    const KeyShare& first = shares.front();
    std::set<std::uint8_t> seen;
    for (const auto& s : shares) {
        if (s.threshold != first.threshold || s.share_count != first.share_count ||
            s.content_id != first.content_id || s.y.size() != first.y.size())
            throw Error(ErrorCode::MismatchedShares, "share metadata differs");
        if (s.x == 0 || s.x > s.share_count) throw Error(ErrorCode::MismatchedShares, "share index out of range");
        if (!seen.insert(s.x).second) throw Error(ErrorCode::MismatchedShares, "duplicate share index");
    }
    if (first.threshold == 0 || first.threshold > first.share_count)
        throw Error(ErrorCode::MismatchedShares, "share carries an invalid threshold");
    if (shares.size() < first.threshold)
        throw Error(ErrorCode::InsufficientShares, "have " + std::to_string(shares.size()) + " of " +
                                                       std::to_string(first.threshold) + " shares");

    const auto used = shares.first(first.threshold);

    // basis_i(0) = prod_{j != i} x_j / (x_j - x_i); subtraction is XOR here.
    std::vector<std::uint8_t> basis(used.size());
    for (std::size_t i = 0; i < used.size(); ++i) {
        std::uint8_t num = 1;
        std::uint8_t den = 1;
        for (std::size_t j = 0; j < used.size(); ++j) {
            if (i == j) continue;
            num = gf256::mul(num, used[j].x);
            den = gf256::mul(den, gf256::add(used[j].x, used[i].x));
        }
        basis[i] = gf256::div(num, den);
    }

    Bytes secret(first.y.size(), 0);
    for (std::size_t pos = 0; pos < secret.size(); ++pos) {
        std::uint8_t acc = 0;
        for (std::size_t i = 0; i < used.size(); ++i) acc ^= gf256::mul(used[i].y[pos], basis[i]);
        secret[pos] = acc;
    }
    return secret;
}

}  // namespace dosn
