#include "dosn/protocol.hpp"

#include <algorithm>

#include "dosn/error.hpp"
#include "dosn/shamir.hpp"

namespace dosn {

std::string_view to_string(FetchFailure f) {
    switch (f) {
        case FetchFailure::AccessDenied: return "AccessDenied";
        case FetchFailure::IntegrityFailure: return "IntegrityFailure";
        case FetchFailure::InsufficientShares: return "InsufficientShares";
        case FetchFailure::DecryptionFailed: return "DecryptionFailed";
        case FetchFailure::Unavailable: return "Unavailable";
    }
    return "Unknown";
}

Bytes content_associated_data(const Address& owner) {
    CanonicalWriter w;
    w.str("dosn/content/v1").str(owner.hex);
    return std::move(w).take();
}

namespace {

FetchOutcome failed(FetchFailure reason, std::string detail, std::vector<Address> misbehaving = {}) {
    FetchOutcome out;
    out.failure = reason;
    out.detail = std::move(detail);
    out.misbehaving = std::move(misbehaving);
    return out;
}

void note(std::vector<Address>& list, const Address& a) {
    if (std::find(list.begin(), list.end(), a) == list.end()) list.push_back(a);
}

// Upper bound on t-subsets tried after the first reconstruction fails.
constexpr std::size_t kMaxCombinations = 4096;

// Advances `idx` to the next t-combination of [0, n); false when exhausted.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t t = idx.size();
    for (std::size_t i = t; i-- > 0;) {
        if (idx[i] < n - t + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

Protocol::Protocol(Ledger& ledger, StorageNetwork& network, DeterministicRng& rng)
    : ledger_(ledger), network_(network), rng_(rng) {}

ContentRecord Protocol::publish(const KeyPair& owner, ByteView content, const Acl& acl,
                                const std::set<Role>& allowed_roles, const PublishParams& params) {
    if (params.t == 0 || params.t > params.n || params.n > 255)
        throw Error(ErrorCode::InvalidThreshold,
                    "need 1 <= t <= n <= 255, got t=" + std::to_string(params.t) + " n=" + std::to_string(params.n));
    if (params.r == 0) throw Error(ErrorCode::InvalidArgument, "replication factor must be at least 1");
    if (params.chunk_size == 0) throw Error(ErrorCode::InvalidArgument, "chunk size must be positive");
    const std::vector<Address> miners = network_.miners();
    if (miners.size() < std::max(params.n, params.r))
        throw Error(ErrorCode::NotEnoughMiners, std::to_string(miners.size()) + " miners for n=" +
                                                    std::to_string(params.n) + ", r=" + std::to_string(params.r));

    const SymmetricKey key = generate_key(rng_);
    NonceSource nonces(rng_);
    const Bytes wire = encrypt(key, content, content_associated_data(owner.address()), nonces).serialize();
    const std::vector<Bytes> chunks = chunk(wire, params.chunk_size, true);
    const DagManifest manifest = build_dag(chunks, params.chunk_size);
    const std::string content_id = manifest.root.hex();
    if (ledger_.get_root(content_id)) throw Error(ErrorCode::DuplicateContent, content_id);

    ContentRecord rec;
    rec.content_id = content_id;
    rec.owner = owner.address();
    rec.manifest = manifest;
    rec.params = params;
    rec.plan = place(manifest.leaf_cids, params.n, params.r, miners, rng_.next_u64());

    // Only what this publish added is undone; deduplicated blobs stay.
    std::vector<std::pair<Address, Cid>> stored_shards;
    std::vector<Address> stored_shares;
    bool stored_manifest = false;
    auto rollback = [&]() noexcept(false) {
        try {
            for (const auto& [m, c] : stored_shards) network_.remove_shard(m, c);
            for (const auto& m : stored_shares) network_.remove_key_share(m, content_id);
            if (stored_manifest) network_.remove_manifest(manifest.root);
        } catch (const Error& e) {
            throw Error(ErrorCode::RollbackIncomplete, e.what());
        }
    };

    try {
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            const Cid& c = manifest.leaf_cids[i];
            for (const auto& m : rec.plan.shards.at(c)) {
                if (network_.holds_shard(m, c)) continue;
                network_.store_shard(m, c, chunks[i]);
                stored_shards.emplace_back(m, c);
            }
        }
        if (!network_.has_manifest(manifest.root)) {
            network_.publish_manifest(manifest);
            stored_manifest = true;
        }

        const std::vector<KeyShare> shares = split(key.bytes(), params.n, params.t, rng_, content_id);
        CreatePolicy call;
        call.content_id = content_id;
        call.acl = acl;
        call.allowed_roles = allowed_roles;
        call.leaf_cids = manifest.leaf_cids;
        call.shard_locations = rec.plan.shards;
        call.threshold = static_cast<std::uint8_t>(params.t);
        for (std::size_t i = 0; i < shares.size(); ++i) {
            const Address& m = rec.plan.shares[i];
            network_.store_key_share(m, content_id, shares[i], owner.address());
            stored_shares.push_back(m);
            call.key_holders.push_back({m, shares[i].x});
        }

        const Receipt anchored = submit_as(ledger_, owner, AnchorRoot{content_id, manifest.root});
        if (!anchored.accepted()) throw Error(*anchored.reason, anchored.message);
        const Receipt created = submit_as(ledger_, owner, std::move(call));
        if (!created.accepted()) throw Error(*created.reason, created.message);
        rec.policy_id = std::get<PolicyId>(created.result);
    } catch (const Error&) {
        rollback();
        throw;
    }
    return rec;
}

PolicyId Protocol::policy_id(const std::string& content_id) const {
    auto id = ledger_.registry().policy_for_content(content_id);
    if (!id) throw Error(ErrorCode::UnknownContent, content_id);
    return *id;
}

FetchOutcome Protocol::fetch(const KeyPair& requester, const std::string& content_id) {
    const PolicyId id = ledger_.registry().policy_for_content(content_id).value_or(0);
    const Receipt r = submit_as(ledger_, requester, CheckAccess{id});
    if (!r.accepted()) return failed(FetchFailure::AccessDenied, r.message);
    const auto& decision = std::get<AccessDecision>(r.result);
    if (const auto* denied = std::get_if<Denied>(&decision))
        return failed(FetchFailure::AccessDenied, std::string(to_string(denied->reason)));
    return fetch_with_grant(std::get<AccessGrant>(decision));
}

FetchOutcome Protocol::fetch_with_grant(const AccessGrant& grant) {
    const auto root = ledger_.get_root(grant.content_id);
    if (!root || *root != grant.root)
        return failed(FetchFailure::IntegrityFailure, "grant root does not match the anchored root");

    std::vector<Address> misbehaving;

    Bytes wire;
    for (std::size_t i = 0; i < grant.leaf_cids.size(); ++i) {
        const Cid& c = grant.leaf_cids[i];
        auto loc = grant.shard_locations.find(c);
        bool tampered = false;
        bool done = false;
        if (loc != grant.shard_locations.end()) {
            for (const auto& miner : loc->second) {
                try {
                    ShardResponse resp = network_.retrieve_shard(miner, *root, i);
                    if (verify(*root, resp.data, i, resp.proof)) {
                        wire.insert(wire.end(), resp.data.begin(), resp.data.end());
                        done = true;
                        break;
                    }
                    tampered = true;
                } catch (const Error&) {
                    // unavailable, missing or unknown; fall through to the next replica
                }
                note(misbehaving, miner);
            }
        }
        if (!done) {
            const std::string what = "no verified replica for leaf " + std::to_string(i);
            return failed(tampered ? FetchFailure::IntegrityFailure : FetchFailure::Unavailable, what,
                          std::move(misbehaving));
        }
    }

    Ciphertext ct;
    try {
        ct = Ciphertext::parse(wire);
    } catch (const Error& e) {
        return failed(FetchFailure::DecryptionFailed, e.what(), std::move(misbehaving));
    }
    const Bytes ad = content_associated_data(grant.owner);

    std::vector<KeyShare> shares;
    std::size_t next_holder = 0;
    auto collect = [&](std::size_t want) {
        while (shares.size() < want && next_holder < grant.key_holders.size()) {
            const KeyHolder& h = grant.key_holders[next_holder++];
            try {
                KeyShare s = network_.retrieve_key_share(h.miner, grant.content_id);
                if (s.x != h.x || s.content_id != grant.content_id || s.threshold != grant.threshold ||
                    s.y.size() != SymmetricKey::kSize) {
                    note(misbehaving, h.miner);
                    continue;
                }
                shares.push_back(std::move(s));
            } catch (const Error&) {
                note(misbehaving, h.miner);
            }
        }
    };

    auto attempt = [&](std::span<const KeyShare> subset) -> std::optional<Bytes> {
        try {
            const SymmetricKey key = SymmetricKey::from_bytes(reconstruct(subset));
            return decrypt(key, ct, ad);
        } catch (const Error&) {
            return std::nullopt;
        }
    };

    const std::size_t t = grant.threshold;
    collect(t);
    if (shares.size() < t)
        return failed(FetchFailure::InsufficientShares,
                      std::to_string(shares.size()) + " of " + std::to_string(t) + " shares available",
                      std::move(misbehaving));

    if (auto plain = attempt(shares)) {
        FetchOutcome out;
        out.plaintext = std::move(*plain);
        out.misbehaving = std::move(misbehaving);
        return out;
    }

    // Some share is corrupt: gather the rest and search other t-subsets,
    // letting the AEAD tag decide which reconstruction is genuine.
    collect(grant.key_holders.size());
    std::vector<std::size_t> idx(t);
    for (std::size_t i = 0; i < t; ++i) idx[i] = i;
    std::vector<KeyShare> subset(t);
    for (std::size_t tried = 0; tried < kMaxCombinations && next_combination(idx, shares.size()); ++tried) {
        for (std::size_t i = 0; i < t; ++i) subset[i] = shares[idx[i]];
        if (auto plain = attempt(subset)) {
            FetchOutcome out;
            out.plaintext = std::move(*plain);
            out.misbehaving = std::move(misbehaving);
            return out;
        }
    }
    return failed(FetchFailure::DecryptionFailed, "no share subset yields an authentic key", std::move(misbehaving));
}

void Protocol::forget(const KeyPair& owner, const std::string& content_id) {
    const AccessRegistry& reg = ledger_.registry();
    const auto anchor = reg.anchor_of(content_id);
    const auto id = reg.policy_for_content(content_id);
    if (!anchor || !id) throw Error(ErrorCode::UnknownContent, content_id);
    if (anchor->owner != owner.address()) throw Error(ErrorCode::NotOwner, content_id);
    const Policy* p = reg.policy(*id);
    if (p == nullptr) throw Error(ErrorCode::ContractDeactivated, "policy storage of " + content_id + " was released");
    if (p->status == PolicyStatus::Revoked) throw Error(ErrorCode::UnknownContent, content_id + " already forgotten");
    const std::vector<KeyHolder> holders = p->key_holders;

    const Receipt r = submit_as(ledger_, owner, RevokePolicy{*id});
    if (!r.accepted()) throw Error(*r.reason, r.message);

    for (const auto& h : holders) {
        if (!network_.has_miner(h.miner) || !network_.holds_key_share(h.miner, content_id)) continue;
        network_.delete_key_share(h.miner, content_id, DeleteAuthorization::make(owner, content_id, h.miner));
    }
}

Receipt Protocol::set_acl_entry(const KeyPair& owner, const std::string& content_id, const Address& user,
                                const std::optional<Role>& role) {
    const PolicyId id = policy_id(content_id);
    const Policy* p = ledger_.registry().policy(id);
    Acl acl = p ? p->acl : Acl{};
    if (role)
        acl[user] = *role;
    else
        acl.erase(user);
    return submit_as(ledger_, owner, UpdatePolicy{id, std::move(acl), std::nullopt});
}

TrustedNodeBaseline publish_baseline(std::size_t k, std::span<const Bytes> contents) {
    TrustedNodeBaseline baseline(k);
    for (std::size_t i = 0; i < contents.size(); ++i) baseline.store("content-" + std::to_string(i), contents[i]);
    return baseline;
}

}  // namespace dosn
