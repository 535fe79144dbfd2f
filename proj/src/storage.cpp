#include "dosn/storage.hpp"

#include <algorithm>
#include <numeric>

#include "dosn/error.hpp"

namespace dosn {

std::string_view to_string(Behavior b) {
    switch (b) {
        case Behavior::Honest: return "honest";
        case Behavior::Tamper: return "tamper";
        case Behavior::Offline: return "offline";
    }
    return "unknown";
}

Behavior behavior_from_string(std::string_view s) {
    if (s == "honest") return Behavior::Honest;
    if (s == "tamper") return Behavior::Tamper;
    if (s == "offline") return Behavior::Offline;
    throw Error(ErrorCode::InvalidArgument, "unknown behavior '" + std::string(s) + "'");
}

PlacementPlan place(std::span<const Cid> leaf_cids, unsigned n_shares, unsigned r,
                    std::span<const Address> miners, std::uint64_t seed) {
    if (r == 0) throw Error(ErrorCode::InvalidArgument, "replication factor must be at least 1");
    const std::size_t m = miners.size();
    if (m < std::max<std::size_t>(r, n_shares))
        throw Error(ErrorCode::NotEnoughMiners, std::to_string(m) + " miners for r=" + std::to_string(r) +
                                                    ", n=" + std::to_string(n_shares));
    std::set<Address> distinct(miners.begin(), miners.end());
    if (distinct.size() != m) throw Error(ErrorCode::DuplicateMiner, "miner set contains duplicates");

    std::vector<Address> order(miners.begin(), miners.end());
    DeterministicRng rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform(i)]);

    PlacementPlan plan;
    plan.shares.assign(order.begin(), order.begin() + n_shares);
    std::size_t shard = 0;
    for (const auto& c : leaf_cids) {
        if (plan.shards.contains(c)) continue;
        auto& holders = plan.shards[c];
        for (unsigned k = 0; k < r; ++k) holders.push_back(order[(n_shares + shard * r + k) % m]);
        ++shard;
    }
    return plan;
}

Bytes DeleteAuthorization::message(const std::string& content_id, const Address& miner) {
    CanonicalWriter w;
    w.str("dosn/delete-share/v1").str(content_id).str(miner.hex);
    return std::move(w).take();
}

DeleteAuthorization DeleteAuthorization::make(const KeyPair& owner, const std::string& content_id,
                                              const Address& miner) {
    return {owner.address(), owner.sign(message(content_id, miner))};
}

std::uint64_t manifest_size(const DagManifest& m) {
    // root + leaves + chunk_size (u64) + total_len (u64)
    return 32 * (m.leaf_cids.size() + 1) + 16;
}

StorageNetwork::StorageNetwork(const StorageNetwork& other) {
    std::lock_guard lock(other.mutex_);
    miners_ = other.miners_;
    order_ = other.order_;
    manifests_ = other.manifests_;
    requests_ = other.requests_;
}

MinerRecord& StorageNetwork::find(const Address& miner) {
    auto it = miners_.find(miner);
    if (it == miners_.end()) throw Error(ErrorCode::UnknownMiner, miner.hex);
    return it->second;
}

const MinerRecord& StorageNetwork::find(const Address& miner) const {
    auto it = miners_.find(miner);
    if (it == miners_.end()) throw Error(ErrorCode::UnknownMiner, miner.hex);
    return it->second;
}

void StorageNetwork::add_miner(const Address& address, Behavior behavior) {
    std::lock_guard lock(mutex_);
    if (address.empty()) throw Error(ErrorCode::InvalidArgument, "empty miner address");
    if (miners_.contains(address)) throw Error(ErrorCode::DuplicateMiner, address.hex);
    MinerRecord rec;
    rec.address = address;
    rec.behavior = behavior;
    miners_.emplace(address, std::move(rec));
    order_.push_back(address);
}

void StorageNetwork::load_miner(MinerRecord record) {
    std::lock_guard lock(mutex_);
    if (miners_.contains(record.address)) throw Error(ErrorCode::DuplicateMiner, record.address.hex);
    std::uint64_t bytes = 0;
    for (const auto& [_, data] : record.shards) bytes += data.size();
    for (const auto& [_, s] : record.key_shares) bytes += s.share.y.size();
    if (bytes != record.bytes_stored)
        throw Error(ErrorCode::WorkspaceError, "miner " + record.address.hex + " accounting does not match holdings");
    order_.push_back(record.address);
    miners_.emplace(record.address, std::move(record));
}

void StorageNetwork::set_behavior(const Address& miner, Behavior behavior) {
    std::lock_guard lock(mutex_);
    find(miner).behavior = behavior;
}

std::vector<Address> StorageNetwork::miners() const {
    std::lock_guard lock(mutex_);
    return order_;
}

bool StorageNetwork::has_miner(const Address& miner) const {
    std::lock_guard lock(mutex_);
    return miners_.contains(miner);
}

MinerRecord StorageNetwork::miner(const Address& address) const {
    std::lock_guard lock(mutex_);
    return find(address);
}

void StorageNetwork::store_shard(const Address& miner, const Cid& cid, ByteView data) {
    std::lock_guard lock(mutex_);
    auto& rec = find(miner);
    if (rec.shards.contains(cid)) return;
    rec.shards.emplace(cid, Bytes(data.begin(), data.end()));
    rec.bytes_stored += data.size();
}

void StorageNetwork::store_key_share(const Address& miner, const std::string& content_id, const KeyShare& share,
                                     const Address& owner) {
    std::lock_guard lock(mutex_);
    auto& rec = find(miner);
    auto it = rec.key_shares.find(content_id);
    if (it != rec.key_shares.end()) {
        if (it->second.share == share) return;
        throw Error(ErrorCode::InvalidArgument,
                    "miner " + miner.hex + " already holds a different share of " + content_id);
    }
    rec.key_shares.emplace(content_id, StoredShare{share, owner});
    rec.bytes_stored += share.y.size();
}

void StorageNetwork::publish_manifest(const DagManifest& manifest) {
    std::lock_guard lock(mutex_);
    manifests_.emplace(manifest.root, manifest);
}

void StorageNetwork::remove_shard(const Address& miner, const Cid& cid) {
    std::lock_guard lock(mutex_);
    auto& rec = find(miner);
    auto it = rec.shards.find(cid);
    if (it == rec.shards.end()) return;
    rec.bytes_stored -= it->second.size();
    rec.shards.erase(it);
}

void StorageNetwork::remove_key_share(const Address& miner, const std::string& content_id) {
    std::lock_guard lock(mutex_);
    auto& rec = find(miner);
    auto it = rec.key_shares.find(content_id);
    if (it == rec.key_shares.end()) return;
    rec.bytes_stored -= it->second.share.y.size();
    rec.key_shares.erase(it);
}

void StorageNetwork::remove_manifest(const Cid& root) {
    std::lock_guard lock(mutex_);
    manifests_.erase(root);
}

bool StorageNetwork::holds_shard(const Address& miner, const Cid& cid) const {
    std::lock_guard lock(mutex_);
    return find(miner).shards.contains(cid);
}

bool StorageNetwork::holds_key_share(const Address& miner, const std::string& content_id) const {
    std::lock_guard lock(mutex_);
    return find(miner).key_shares.contains(content_id);
}

bool StorageNetwork::has_manifest(const Cid& root) const {
    std::lock_guard lock(mutex_);
    return manifests_.contains(root);
}

std::optional<DagManifest> StorageNetwork::manifest(const Cid& root) const {
    std::lock_guard lock(mutex_);
    auto it = manifests_.find(root);
    if (it == manifests_.end()) return std::nullopt;
    return it->second;
}

std::vector<DagManifest> StorageNetwork::manifests() const {
    std::lock_guard lock(mutex_);
    std::vector<DagManifest> out;
    for (const auto& [_, m] : manifests_) out.push_back(m);
    return out;
}

ShardResponse StorageNetwork::retrieve_shard(const Address& miner, const Cid& root, std::size_t leaf_index) {
    std::lock_guard lock(mutex_);
    ++requests_;
    auto& rec = find(miner);
    if (rec.behavior == Behavior::Offline) throw Error(ErrorCode::Unavailable, "miner " + miner.hex + " is offline");
    auto m = manifests_.find(root);
    if (m == manifests_.end()) throw Error(ErrorCode::NotStored, "no manifest for root " + root.hex());
    if (leaf_index >= m->second.leaf_cids.size())
        throw Error(ErrorCode::IndexOutOfRange, "leaf " + std::to_string(leaf_index));
    const Cid& c = m->second.leaf_cids[leaf_index];
    auto shard = rec.shards.find(c);
    if (shard == rec.shards.end()) throw Error(ErrorCode::NotStored, "miner " + miner.hex + " lacks " + c.hex());

    ShardResponse resp{shard->second, prove(m->second, leaf_index)};
    if (rec.behavior == Behavior::Tamper) {
        if (resp.data.empty()) {
            resp.data.push_back(0x00);
        } else {
            CanonicalWriter w;
            w.bytes(c.digest).u64(rec.tamper_count);
            const Digest h = sha256(w.data());
            std::uint64_t pick = 0;
            for (int i = 0; i < 8; ++i) pick = (pick << 8) | h[static_cast<std::size_t>(i)];
            const std::uint64_t bit = pick % (resp.data.size() * 8);
            resp.data[bit / 8] ^= static_cast<std::uint8_t>(1U << (bit % 8));
        }
        ++rec.tamper_count;
    }
    return resp;
}

KeyShare StorageNetwork::retrieve_key_share(const Address& miner, const std::string& content_id) {
    std::lock_guard lock(mutex_);
    ++requests_;
    auto& rec = find(miner);
    if (rec.behavior == Behavior::Offline) throw Error(ErrorCode::Unavailable, "miner " + miner.hex + " is offline");
    auto it = rec.key_shares.find(content_id);
    if (it == rec.key_shares.end()) throw Error(ErrorCode::NotStored, "miner " + miner.hex + " holds no share");
    KeyShare share = it->second.share;
    if (rec.behavior == Behavior::Tamper && !share.y.empty()) {
        share.y[rec.tamper_count % share.y.size()] ^= 0xFF;
        ++rec.tamper_count;
    }
    return share;
}

void StorageNetwork::delete_key_share(const Address& miner, const std::string& content_id,
                                      const DeleteAuthorization& auth) {
    std::lock_guard lock(mutex_);
    auto& rec = find(miner);
    auto it = rec.key_shares.find(content_id);
    if (it == rec.key_shares.end()) throw Error(ErrorCode::NotStored, "miner " + miner.hex + " holds no share");
    if (auth.owner != it->second.owner ||
        !verify(auth.owner, DeleteAuthorization::message(content_id, miner), auth.signature))
        throw Error(ErrorCode::BadAuthorization, "delete of " + content_id + " on " + miner.hex);
    rec.bytes_stored -= it->second.share.y.size();
    rec.key_shares.erase(it);
}

StorageReport StorageNetwork::report() const {
    std::lock_guard lock(mutex_);
    StorageReport r;
    for (const auto& [addr, rec] : miners_) {
        for (const auto& [_, data] : rec.shards) r.shard_bytes += data.size();
        for (const auto& [_, s] : rec.key_shares) r.share_bytes += s.share.y.size();
        r.per_node[addr] = rec.bytes_stored;
    }
    for (const auto& [_, m] : manifests_) r.manifest_bytes += manifest_size(m);
    r.total_bytes = r.shard_bytes + r.share_bytes + r.manifest_bytes;
    return r;
}

std::uint64_t StorageNetwork::request_count() const {
    std::lock_guard lock(mutex_);
    return requests_;
}

void StorageNetwork::reset_request_count() {
    std::lock_guard lock(mutex_);
    requests_ = 0;
}

TrustedNodeBaseline::TrustedNodeBaseline(std::size_t k) : nodes_(k) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "baseline needs at least one trusted node");
}

void TrustedNodeBaseline::store(const std::string& content_id, ByteView content) {
    for (auto& node : nodes_) node[content_id] = Bytes(content.begin(), content.end());
}

StorageReport TrustedNodeBaseline::report() const {
    StorageReport r;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        std::uint64_t bytes = 0;
        for (const auto& [_, data] : nodes_[i]) bytes += data.size();
        r.per_node[Address{"trusted-" + std::to_string(i)}] = bytes;
        r.shard_bytes += bytes;
    }
    r.total_bytes = r.shard_bytes;
    return r;
}

}  // namespace dosn
