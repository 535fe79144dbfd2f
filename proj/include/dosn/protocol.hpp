#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dosn/contract.hpp"
#include "dosn/crypto.hpp"
#include "dosn/ledger.hpp"
#include "dosn/merkle.hpp"
#include "dosn/rng.hpp"
#include "dosn/storage.hpp"

namespace dosn {

struct PublishParams {
    unsigned t = 3;
    unsigned n = 5;
    unsigned r = 2;
    std::size_t chunk_size = kDefaultChunkSize;

    bool operator==(const PublishParams&) const = default;
};

struct ContentRecord {
    std::string content_id;  // hex of the anchored root
    Address owner;
    DagManifest manifest;
    PolicyId policy_id = 0;
    PublishParams params;
    PlacementPlan plan;
};

enum class FetchFailure : std::uint8_t { AccessDenied, IntegrityFailure, InsufficientShares, DecryptionFailed, Unavailable };
std::string_view to_string(FetchFailure f);

struct FetchOutcome {
    std::optional<Bytes> plaintext;
    std::optional<FetchFailure> failure;
    std::string detail;
    // Miners that served bad data or did not answer, in contact order.
    std::vector<Address> misbehaving;

    bool ok() const noexcept { return plaintext.has_value(); }
};

// Associated data binding a content ciphertext to its owner.
Bytes content_associated_data(const Address& owner);

// Owner publish pipeline and reader fetch pipeline over a ledger and a
// storage network. One flow at a time per instance.
class Protocol {
public:
    Protocol(Ledger& ledger, StorageNetwork& network, DeterministicRng& rng);

    // Encrypt, chunk, place and store shards, split and store the key, anchor
    // the root, create the policy. Miner stores are rolled back if any later
    // step fails; a failed policy creation leaves the anchor in place.
    ContentRecord publish(const KeyPair& owner, ByteView content, const Acl& acl,
                          const std::set<Role>& allowed_roles, const PublishParams& params);

    // Gated by check_access; denied requesters cause no storage requests.
    FetchOutcome fetch(const KeyPair& requester, const std::string& content_id);
    // Data path only: shards, proofs, shares, reconstruction, decryption.
    FetchOutcome fetch_with_grant(const AccessGrant& grant);

    // Revokes the policy and destroys every key share. Shards stay in place.
    void forget(const KeyPair& owner, const std::string& content_id);

    Receipt set_acl_entry(const KeyPair& owner, const std::string& content_id, const Address& user,
                          const std::optional<Role>& role);

    // Latest policy id for the content; throws UnknownContent.
    PolicyId policy_id(const std::string& content_id) const;

private:
    Ledger& ledger_;
    StorageNetwork& network_;
    DeterministicRng& rng_;
};

// Stores every content in plaintext on each of k trusted nodes.
TrustedNodeBaseline publish_baseline(std::size_t k, std::span<const Bytes> contents);

}  // namespace dosn
