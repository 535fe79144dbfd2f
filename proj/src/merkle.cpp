#include "dosn/merkle.hpp"

#include <algorithm>
#include <numeric>

#include "dosn/error.hpp"

namespace dosn {

Cid Cid::from_hex(std::string_view hex) {
    const Bytes raw = dosn::from_hex(hex);
    if (raw.size() != 32) throw Error(ErrorCode::InvalidEncoding, "cid must be 32 octets");
    Cid c;
    std::copy(raw.begin(), raw.end(), c.digest.begin());
    return c;
}

Cid cid(ByteView data) { return Cid{sha256(data)}; }

Cid leaf_cid(ByteView chunk) {
    Bytes buf;
    buf.reserve(chunk.size() + 1);
    buf.push_back(kLeafPrefix);
    buf.insert(buf.end(), chunk.begin(), chunk.end());
    return cid(buf);
}

Cid interior_cid(const Cid& left, const Cid& right) {
    Bytes buf;
    buf.reserve(65);
    buf.push_back(kInteriorPrefix);
    buf.insert(buf.end(), left.digest.begin(), left.digest.end());
    buf.insert(buf.end(), right.digest.begin(), right.digest.end());
    return cid(buf);
}

std::vector<Bytes> chunk(ByteView content, std::size_t chunk_size, bool allow_empty) {
    if (chunk_size == 0) throw Error(ErrorCode::InvalidArgument, "chunk_size must be positive");
    if (content.empty()) {
        if (!allow_empty) throw Error(ErrorCode::EmptyContent, "zero-length content without empty marker");
        return {Bytes{}};
    }
    std::vector<Bytes> chunks;
    chunks.reserve((content.size() + chunk_size - 1) / chunk_size);
    for (std::size_t off = 0; off < content.size(); off += chunk_size) {
        const std::size_t len = std::min(chunk_size, content.size() - off);
        chunks.emplace_back(content.begin() + static_cast<std::ptrdiff_t>(off),
                            content.begin() + static_cast<std::ptrdiff_t>(off + len));
    }
    return chunks;
}

namespace {

std::vector<Cid> next_level(const std::vector<Cid>& level) {
    std::vector<Cid> up;
    up.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) up.push_back(interior_cid(level[i], level[i + 1]));
    if (level.size() % 2 == 1) up.push_back(level.back());
    return up;
}

}  // namespace

Cid merkle_root(std::span<const Cid> leaves) {
    if (leaves.empty()) throw Error(ErrorCode::InvalidArgument, "merkle tree needs at least one leaf");
    std::vector<Cid> level(leaves.begin(), leaves.end());
    while (level.size() > 1) level = next_level(level);
    return level.front();
}

DagManifest manifest_from_leaves(std::vector<Cid> leaf_cids, std::size_t chunk_size, std::size_t total_len) {
    if (chunk_size == 0) throw Error(ErrorCode::InvalidArgument, "chunk_size must be positive");
    if (leaf_cids.empty()) throw Error(ErrorCode::InvalidArgument, "manifest needs at least one leaf");
    if (total_len > leaf_cids.size() * chunk_size)
        throw Error(ErrorCode::InvalidArgument, "total_len exceeds leaf capacity");
    DagManifest m;
    m.root = merkle_root(leaf_cids);
    m.leaf_cids = std::move(leaf_cids);
    m.chunk_size = chunk_size;
    m.total_len = total_len;
    return m;
}

DagManifest build_dag(std::span<const Bytes> chunks, std::size_t chunk_size) {
    std::vector<Cid> leaves;
    leaves.reserve(chunks.size());
    std::size_t total = 0;
    for (const auto& c : chunks) {
        if (c.size() > chunk_size) throw Error(ErrorCode::InvalidArgument, "chunk exceeds chunk_size");
        leaves.push_back(leaf_cid(c));
        total += c.size();
    }
    return manifest_from_leaves(std::move(leaves), chunk_size, total);
}

MerkleProof prove(const DagManifest& manifest, std::size_t leaf_index) {
    const std::size_t count = manifest.leaf_cids.size();
    if (leaf_index >= count)
        throw Error(ErrorCode::IndexOutOfRange,
                    "leaf " + std::to_string(leaf_index) + " of " + std::to_string(count));
    MerkleProof proof{leaf_index, count, {}};
    std::vector<Cid> level = manifest.leaf_cids;
    std::size_t idx = leaf_index;
    while (level.size() > 1) {
        const std::size_t sibling = idx ^ 1U;
        if (sibling < level.size())
            proof.path.push_back({level[sibling], idx % 2 == 0 ? Side::Right : Side::Left});
        level = next_level(level);
        idx /= 2;
    }
    return proof;
}

bool verify(const Cid& root, ByteView chunk, std::size_t leaf_index, const MerkleProof& proof) {
    if (proof.leaf_index != leaf_index || leaf_index >= proof.leaf_count) return false;
    Cid running = leaf_cid(chunk);
    std::size_t idx = leaf_index;
    std::size_t width = proof.leaf_count;
    std::size_t step = 0;
    while (width > 1) {
        const bool promoted = (idx == width - 1) && (width % 2 == 1);
        if (!promoted) {
            if (step >= proof.path.size()) return false;
            const ProofStep& s = proof.path[step++];
            const Side expected = idx % 2 == 0 ? Side::Right : Side::Left;
            if (s.side != expected) return false;
            running = s.side == Side::Right ? interior_cid(running, s.sibling) : interior_cid(s.sibling, running);
        }
        idx /= 2;
        width = (width + 1) / 2;
    }
    return step == proof.path.size() && running == root;
}

}  // namespace dosn
