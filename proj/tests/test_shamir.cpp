#include <gtest/gtest.h>

#include <algorithm>

#include "dosn/gf256.hpp"
#include "dosn/rng.hpp"
#include "dosn/shamir.hpp"

using namespace dosn;

namespace {

// Oracle: Lagrange interpolation at zero written directly from the formula.
std::uint8_t lagrange_at_zero(const std::vector<std::pair<std::uint8_t, std::uint8_t>>& pts) {
    std::uint8_t acc = 0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        std::uint8_t num = 1;
        std::uint8_t den = 1;
        for (std::size_t m = 0; m < pts.size(); ++m) {
            if (m == j) continue;
            num = gf256::mul(num, pts[m].first);
            den = gf256::mul(den, gf256::add(pts[m].first, pts[j].first));
        }
        acc = gf256::add(acc, gf256::mul(pts[j].second, gf256::div(num, den)));
    }
    return acc;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Shamir, ForcedCoefficientVector) {
    // f(x) = 0x2A + 0x07 x: f(1) = 0x2D, f(2) = 0x2A ^ 0x0E = 0x24.
    const Bytes secret{0x2A};
    auto shares = split_with(secret, 2, 2, "c", [](std::size_t, unsigned) { return 0x07; });
    ASSERT_EQ(shares.size(), 2U);
    EXPECT_EQ(shares[0].x, 1);
    EXPECT_EQ(shares[0].y[0], 0x2D);
    EXPECT_EQ(shares[1].x, 2);
    EXPECT_EQ(shares[1].y[0], 0x24);
    EXPECT_EQ(reconstruct(shares), secret);
}

TEST(Shamir, ReconstructMatchesOracle) {
    DeterministicRng rng(11);
    for (unsigned n = 1; n <= 6; ++n)
        for (unsigned t = 1; t <= n; ++t) {
            const Bytes secret = rng.bytes(8);
            const auto shares = split(secret, n, t, rng);
            std::vector<KeyShare> subset(shares.end() - t, shares.end());
            const Bytes got = reconstruct(subset);
            ASSERT_EQ(got, secret);
            for (std::size_t pos = 0; pos < secret.size(); ++pos) {
                std::vector<std::pair<std::uint8_t, std::uint8_t>> pts;
                for (const auto& s : subset) pts.emplace_back(s.x, s.y[pos]);
                ASSERT_EQ(lagrange_at_zero(pts), secret[pos]);
            }
        }
}

TEST(Shamir, EverySubsetAtThresholdReconstructs) {
    DeterministicRng rng(3);
    const Bytes secret = rng.bytes(32);
    const auto shares = split(secret, 6, 4, rng, "cid");
    for (unsigned mask = 0; mask < 64; ++mask) {
        std::vector<KeyShare> subset;
        for (unsigned i = 0; i < 6; ++i)
            if (mask & (1U << i)) subset.push_back(shares[i]);
        if (subset.size() >= 4) {
            ASSERT_EQ(reconstruct(subset), secret) << mask;
        } else if (!subset.empty()) {
            ASSERT_EQ(code_of([&] { reconstruct(subset); }), ErrorCode::InsufficientShares) << mask;
        }
    }
}

TEST(Shamir, ThresholdOneIsReplication) {
    DeterministicRng rng(4);
    const Bytes secret = rng.bytes(5);
    for (const auto& s : split(secret, 4, 1, rng)) EXPECT_EQ(s.y, secret);
}

TEST(Shamir, ParameterValidation) {
    DeterministicRng rng(5);
    const Bytes secret{1, 2, 3};
    EXPECT_EQ(code_of([&] { split(secret, 3, 0, rng); }), ErrorCode::InvalidThreshold);
    EXPECT_EQ(code_of([&] { split(secret, 3, 4, rng); }), ErrorCode::InvalidThreshold);
    EXPECT_EQ(code_of([&] { split(secret, 256, 2, rng); }), ErrorCode::InvalidThreshold);
    EXPECT_EQ(code_of([&] { split(Bytes{}, 3, 2, rng); }), ErrorCode::InvalidArgument);
    EXPECT_NO_THROW(split(secret, 255, 255, rng));
}

TEST(Shamir, RejectsInconsistentShares) {
    DeterministicRng rng(6);
    const Bytes secret = rng.bytes(4);
    auto shares = split(secret, 4, 2, rng, "a");
    EXPECT_EQ(code_of([] { reconstruct(std::vector<KeyShare>{}); }), ErrorCode::InsufficientShares);

    auto dup = std::vector<KeyShare>{shares[0], shares[0]};
    EXPECT_EQ(code_of([&] { reconstruct(dup); }), ErrorCode::MismatchedShares);

    auto zero = std::vector<KeyShare>{shares[0], shares[1]};
    zero[1].x = 0;
    EXPECT_EQ(code_of([&] { reconstruct(zero); }), ErrorCode::MismatchedShares);

    auto other_content = std::vector<KeyShare>{shares[0], shares[1]};
    other_content[1].content_id = "b";
    EXPECT_EQ(code_of([&] { reconstruct(other_content); }), ErrorCode::MismatchedShares);

    auto other_len = std::vector<KeyShare>{shares[0], shares[1]};
    other_len[1].y.push_back(0);
    EXPECT_EQ(code_of([&] { reconstruct(other_len); }), ErrorCode::MismatchedShares);

    auto other_t = std::vector<KeyShare>{shares[0], shares[1]};
    other_t[1].threshold = 3;
    EXPECT_EQ(code_of([&] { reconstruct(other_t); }), ErrorCode::MismatchedShares);
}

TEST(Shamir, CorruptedShareYieldsWrongSecret) {
    DeterministicRng rng(8);
    const Bytes secret = rng.bytes(16);
    auto shares = split(secret, 3, 3, rng);
    shares[1].y[0] ^= 1;
    EXPECT_NE(reconstruct(shares), secret);
}

// Perfect secrecy at t = 2: a single share is consistent with every secret.
TEST(Shamir, SingleShareRevealsNothing) {
    for (int s = 0; s < 256; s += 17) {
        const Bytes secret{static_cast<std::uint8_t>(s)};
        for (int c = 1; c < 256; c += 51) {
            const auto shares = split_with(secret, 3, 2, "", [&](std::size_t, unsigned) { return c; });
            for (const auto& share : shares) {
                int consistent = 0;
                for (int cand = 0; cand < 256; ++cand)
                    for (int a1 = 0; a1 < 256; ++a1)
                        if (gf256::add(static_cast<std::uint8_t>(cand),
                                       gf256::mul(static_cast<std::uint8_t>(a1), share.x)) == share.y[0]) {
                            ++consistent;
                            break;
                        }
                ASSERT_EQ(consistent, 256);
            }
        }
    }
}

TEST(Shamir, SplitIsDeterministicPerSeed) {
    DeterministicRng a(42);
    DeterministicRng b(42);
    const Bytes secret{9, 8, 7};
    EXPECT_EQ(split(secret, 5, 3, a), split(secret, 5, 3, b));
}
