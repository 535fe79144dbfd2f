#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dosn/bytes.hpp"
#include "dosn/crypto.hpp"
#include "dosn/merkle.hpp"

namespace dosn {

// RBAC label such as "friend", "family" or "colleague". Case-sensitive.
struct Role {
    std::string name;

    auto operator<=>(const Role&) const = default;
};

using PolicyId = std::uint64_t;
using Acl = std::map<Address, Role>;
using ShardLocations = std::map<Cid, std::vector<Address>>;

struct KeyHolder {
    Address miner;
    std::uint8_t x = 0;

    bool operator==(const KeyHolder&) const = default;
};

enum class PolicyStatus : std::uint8_t { Active, Revoked };

struct Policy {
    PolicyId id = 0;
    Address owner;
    std::string content_id;
    Acl acl;
    std::set<Role> allowed_roles;
    std::vector<KeyHolder> key_holders;
    std::vector<Cid> leaf_cids;
    ShardLocations shard_locations;
    std::uint8_t threshold = 1;
    PolicyStatus status = PolicyStatus::Active;

    bool operator==(const Policy&) const = default;
};

// Everything a reader needs to fetch and decrypt without another lookup.
struct AccessGrant {
    PolicyId policy_id = 0;
    std::string content_id;
    Address owner;
    Cid root;
    std::vector<Cid> leaf_cids;
    ShardLocations shard_locations;
    std::vector<KeyHolder> key_holders;
    std::uint8_t threshold = 1;

    bool operator==(const AccessGrant&) const = default;
};

enum class DenyReason : std::uint8_t { NoPolicy, NotInAcl, RoleNotAllowed, Revoked };
std::string_view to_string(DenyReason r);

struct Denied {
    DenyReason reason;
    bool operator==(const Denied&) const = default;
};

using AccessDecision = std::variant<AccessGrant, Denied>;

inline bool granted(const AccessDecision& d) { return std::holds_alternative<AccessGrant>(d); }

// Contract call payloads. The sender is the transaction signer.
struct AnchorRoot {
    std::string content_id;
    Cid root;
    bool operator==(const AnchorRoot&) const = default;
};

struct CreatePolicy {
    std::string content_id;
    Acl acl;
    std::set<Role> allowed_roles;
    std::vector<KeyHolder> key_holders;
    std::vector<Cid> leaf_cids;
    ShardLocations shard_locations;
    std::uint8_t threshold = 1;
    bool operator==(const CreatePolicy&) const = default;
};

struct UpdatePolicy {
    PolicyId policy_id = 0;
    std::optional<Acl> acl;
    std::optional<std::set<Role>> allowed_roles;
    bool operator==(const UpdatePolicy&) const = default;
};

struct RevokePolicy {
    PolicyId policy_id = 0;
    bool operator==(const RevokePolicy&) const = default;
};

struct CheckAccess {
    PolicyId policy_id = 0;
    bool operator==(const CheckAccess&) const = default;
};

struct DeleteAcc {
    Address contract_owner;
    bool operator==(const DeleteAcc&) const = default;
};

struct Anchor {
    Address owner;
    Cid root;
    bool operator==(const Anchor&) const = default;
};

// Canonical encodings shared by transaction signing and state digests.
void encode(CanonicalWriter& w, const Acl& acl);
void encode(CanonicalWriter& w, const std::set<Role>& roles);
void encode(CanonicalWriter& w, const std::vector<KeyHolder>& holders);
void encode(CanonicalWriter& w, const std::vector<Cid>& cids);
void encode(CanonicalWriter& w, const ShardLocations& locations);
void encode(CanonicalWriter& w, const Policy& p);

// Per-owner access control contract.
struct ContractState {
    std::map<PolicyId, Policy> policies;
    bool deactivated = false;
    bool operator==(const ContractState&) const = default;
};

// All access control contracts plus the anchored Merkle roots they refer to.
// Every mutating call validates fully before touching state, so a thrown
// Error leaves the registry unchanged.
class AccessRegistry {
public:
    void anchor(const Address& sender, const AnchorRoot& call);
    PolicyId create_policy(const Address& sender, const CreatePolicy& call);
    void update_policy(const Address& sender, const UpdatePolicy& call);
    void revoke_policy(const Address& sender, const RevokePolicy& call);
    void delete_acc(const Address& sender, const DeleteAcc& call);

    // Throws ContractDeactivated when the policy's contract is gone.
    AccessDecision check_access(const Address& requester, PolicyId id) const;

    std::optional<Anchor> anchor_of(const std::string& content_id) const;
    const Policy* policy(PolicyId id) const;
    // Most recently created policy for the content, if any.
    std::optional<PolicyId> policy_for_content(const std::string& content_id) const;
    std::optional<Address> policy_owner(PolicyId id) const;
    bool deactivated(const Address& owner) const;

    void encode(CanonicalWriter& w) const;

private:
    const ContractState* contract(const Address& owner) const;
    Policy& mutable_policy(const Address& sender, PolicyId id);

    std::map<std::string, Anchor> anchors_;
    std::map<Address, ContractState> contracts_;
    std::map<PolicyId, Address> policy_owner_;
    std::map<std::string, PolicyId> content_policy_;
    PolicyId next_policy_id_ = 1;
};

}  // namespace dosn
