#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dosn/crypto.hpp"
#include "dosn/merkle.hpp"
#include "dosn/shamir.hpp"

namespace dosn {

enum class Behavior : std::uint8_t { Honest, Tamper, Offline };

std::string_view to_string(Behavior b);
// Throws InvalidArgument for anything but "honest", "tamper", "offline".
Behavior behavior_from_string(std::string_view s);

struct StoredShare {
    KeyShare share;
    Address owner;  // only this address may authorise deletion

    bool operator==(const StoredShare&) const = default;
};

// One storage node's off-chain holdings.
struct MinerRecord {
    Address address;
    std::map<Cid, Bytes> shards;
    std::map<std::string, StoredShare> key_shares;
    Behavior behavior = Behavior::Honest;
    std::uint64_t bytes_stored = 0;
    // Number of tampered responses served; selects which bit gets flipped.
    std::uint64_t tamper_count = 0;

    bool operator==(const MinerRecord&) const = default;
};

struct PlacementPlan {
    std::map<Cid, std::vector<Address>> shards;
    // shares[i] receives the share with x = i + 1.
    std::vector<Address> shares;

    bool operator==(const PlacementPlan&) const = default;
};

// Shuffles `miners` with a generator seeded by `seed`. Key shares go to the
// first n_shares miners of that order; shard i replica k goes to position
// (n_shares + i * r + k) mod |miners|, so shares and shards use disjoint
// miners whenever there are enough of them. Duplicate leaf cids are placed once.
PlacementPlan place(std::span<const Cid> leaf_cids, unsigned n_shares, unsigned r,
                    std::span<const Address> miners, std::uint64_t seed);

struct ShardResponse {
    Bytes data;
    MerkleProof proof;
};

// Owner-signed permission for a miner to drop its share of a content.
struct DeleteAuthorization {
    Address owner;
    Signature signature;

    static Bytes message(const std::string& content_id, const Address& miner);
    static DeleteAuthorization make(const KeyPair& owner, const std::string& content_id, const Address& miner);
};

struct StorageReport {
    std::uint64_t shard_bytes = 0;
    std::uint64_t share_bytes = 0;
    std::uint64_t manifest_bytes = 0;
    std::uint64_t total_bytes = 0;
    std::map<Address, std::uint64_t> per_node;
};

// Simulated storage network. Shards and shares live on miners; DAG manifests
// live in a network-wide directory keyed by root, stored once per content.
// All calls are serialised by an internal mutex.
class StorageNetwork {
public:
    StorageNetwork() = default;
    StorageNetwork(const StorageNetwork& other);
    StorageNetwork& operator=(const StorageNetwork&) = delete;

    void add_miner(const Address& address, Behavior behavior = Behavior::Honest);
    void set_behavior(const Address& miner, Behavior behavior);
    std::vector<Address> miners() const;
    bool has_miner(const Address& miner) const;
    MinerRecord miner(const Address& address) const;

    void store_shard(const Address& miner, const Cid& cid, ByteView data);
    void store_key_share(const Address& miner, const std::string& content_id, const KeyShare& share,
                         const Address& owner);
    void publish_manifest(const DagManifest& manifest);

    // Compensating deletes used by publish rollback.
    void remove_shard(const Address& miner, const Cid& cid);
    void remove_key_share(const Address& miner, const std::string& content_id);
    void remove_manifest(const Cid& root);

    bool holds_shard(const Address& miner, const Cid& cid) const;
    bool holds_key_share(const Address& miner, const std::string& content_id) const;
    bool has_manifest(const Cid& root) const;
    std::optional<DagManifest> manifest(const Cid& root) const;

    // Shard at `leaf_index` of the DAG rooted at `root`, with its proof.
    // Throws Unavailable (offline), NotStored, UnknownMiner, IndexOutOfRange.
    ShardResponse retrieve_shard(const Address& miner, const Cid& root, std::size_t leaf_index);
    KeyShare retrieve_key_share(const Address& miner, const std::string& content_id);

    void delete_key_share(const Address& miner, const std::string& content_id, const DeleteAuthorization& auth);

    StorageReport report() const;
    std::uint64_t total_bytes() const { return report().total_bytes; }

    // Every retrieve_* call, successful or not.
    std::uint64_t request_count() const;
    void reset_request_count();

    // Restores persisted state.
    void load_miner(MinerRecord record);
    std::vector<DagManifest> manifests() const;

private:
    MinerRecord& find(const Address& miner);
    const MinerRecord& find(const Address& miner) const;

    mutable std::mutex mutex_;
    std::map<Address, MinerRecord> miners_;
    std::vector<Address> order_;
    std::map<Cid, DagManifest> manifests_;
    std::uint64_t requests_ = 0;
};

// Bytes a manifest occupies in the directory: 32 per leaf plus root, chunk
// size and total length.
std::uint64_t manifest_size(const DagManifest& m);

// Prior architecture: k trusted nodes each keep a full plaintext copy of
// every content.
class TrustedNodeBaseline {
public:
    explicit TrustedNodeBaseline(std::size_t k);

    void store(const std::string& content_id, ByteView content);
    std::size_t node_count() const noexcept { return nodes_.size(); }
    StorageReport report() const;
    std::uint64_t total_bytes() const { return report().total_bytes; }

private:
    std::vector<std::map<std::string, Bytes>> nodes_;
};

}  // namespace dosn
