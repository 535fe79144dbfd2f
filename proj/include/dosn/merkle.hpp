#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dosn/bytes.hpp"
#include "dosn/crypto.hpp"

namespace dosn {

// Content identifier: a SHA-256 digest, rendered as lowercase hex.
struct Cid {
    Digest digest{};

    auto operator<=>(const Cid&) const = default;
    std::string hex() const { return to_hex(digest); }
    static Cid from_hex(std::string_view hex);
};

struct CidHash {
    std::size_t operator()(const Cid& c) const noexcept {
        std::size_t h = 0;
        for (std::size_t i = 0; i < sizeof(std::size_t); ++i) h = (h << 8) | c.digest[i];
        return h;
    }
};

inline constexpr std::size_t kDefaultChunkSize = 256 * 1024;
inline constexpr std::uint8_t kLeafPrefix = 0x00;
inline constexpr std::uint8_t kInteriorPrefix = 0x01;

// Plain hash of the data.
Cid cid(ByteView data);
// Leaf node digest: cid(0x00 || chunk).
Cid leaf_cid(ByteView chunk);
// Interior node digest: cid(0x01 || left || right).
Cid interior_cid(const Cid& left, const Cid& right);

// Fixed-size split; the last chunk may be short. Zero-length content yields a
// single empty chunk when allow_empty is set and EmptyContent otherwise.
std::vector<Bytes> chunk(ByteView content, std::size_t chunk_size, bool allow_empty = false);

struct DagManifest {
    Cid root;
    std::vector<Cid> leaf_cids;
    std::size_t chunk_size = kDefaultChunkSize;
    std::size_t total_len = 0;

    bool operator==(const DagManifest&) const = default;
    // Zero-length content is one empty chunk.
    bool is_empty_content() const noexcept { return total_len == 0; }
};

// Binary tree over the leaves; an odd trailing node is promoted unchanged.
Cid merkle_root(std::span<const Cid> leaves);

DagManifest build_dag(std::span<const Bytes> chunks, std::size_t chunk_size);
// Rebuilds a manifest (and its root) from the leaf list alone.
DagManifest manifest_from_leaves(std::vector<Cid> leaf_cids, std::size_t chunk_size, std::size_t total_len);

enum class Side : std::uint8_t { Left, Right };

struct ProofStep {
    Cid sibling;
    Side side;  // where the sibling sits relative to the running hash

    bool operator==(const ProofStep&) const = default;
};

struct MerkleProof {
    std::size_t leaf_index = 0;
    std::size_t leaf_count = 0;
    std::vector<ProofStep> path;

    bool operator==(const MerkleProof&) const = default;
};

// Throws IndexOutOfRange.
MerkleProof prove(const DagManifest& manifest, std::size_t leaf_index);

// Recomputes the path hash and checks that every step's side matches the
// position implied by (leaf_index, leaf_count). Never throws.
bool verify(const Cid& root, ByteView chunk, std::size_t leaf_index, const MerkleProof& proof);

}  // namespace dosn

template <>
struct std::hash<dosn::Cid> : dosn::CidHash {};
