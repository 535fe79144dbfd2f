#include "dosn/contract.hpp"

#include <algorithm>

#include "dosn/error.hpp"

namespace dosn {

std::string_view to_string(DenyReason r) {
    switch (r) {
        case DenyReason::NoPolicy: return "NoPolicy";
        case DenyReason::NotInAcl: return "NotInAcl";
        case DenyReason::RoleNotAllowed: return "RoleNotAllowed";
        case DenyReason::Revoked: return "Revoked";
    }
    return "Unknown";
}

namespace {

void check_roles(const Acl& acl) {
    for (const auto& [addr, role] : acl) {
        if (role.name.empty()) throw Error(ErrorCode::InvalidArgument, "empty role for " + addr.hex);
        if (addr.empty()) throw Error(ErrorCode::InvalidArgument, "empty address in acl");
    }
}

void check_roles(const std::set<Role>& roles) {
    for (const auto& r : roles)
        if (r.name.empty()) throw Error(ErrorCode::InvalidArgument, "empty role name");
}

}  // namespace

void encode(CanonicalWriter& w, const Acl& acl) {
    w.u64(acl.size());
    for (const auto& [addr, role] : acl) w.str(addr.hex).str(role.name);
}

void encode(CanonicalWriter& w, const std::set<Role>& roles) {
    w.u64(roles.size());
    for (const auto& r : roles) w.str(r.name);
}

void encode(CanonicalWriter& w, const std::vector<KeyHolder>& holders) {
    w.u64(holders.size());
    for (const auto& k : holders) w.str(k.miner.hex).u8(k.x);
}

void encode(CanonicalWriter& w, const std::vector<Cid>& cids) {
    w.u64(cids.size());
    for (const auto& c : cids) w.bytes(c.digest);
}

void encode(CanonicalWriter& w, const ShardLocations& locations) {
    w.u64(locations.size());
    for (const auto& [c, miners] : locations) {
        w.bytes(c.digest).u64(miners.size());
        for (const auto& m : miners) w.str(m.hex);
    }
}

void encode(CanonicalWriter& w, const Policy& p) {
    w.u64(p.id).str(p.owner.hex).str(p.content_id);
    encode(w, p.acl);
    encode(w, p.allowed_roles);
    encode(w, p.key_holders);
    encode(w, p.leaf_cids);
    encode(w, p.shard_locations);
    w.u8(p.threshold).u8(static_cast<std::uint8_t>(p.status));
}

const ContractState* AccessRegistry::contract(const Address& owner) const {
    auto it = contracts_.find(owner);
    return it == contracts_.end() ? nullptr : &it->second;
}

bool AccessRegistry::deactivated(const Address& owner) const {
    const auto* c = contract(owner);
    return c != nullptr && c->deactivated;
}

void AccessRegistry::anchor(const Address& sender, const AnchorRoot& call) {
    if (call.content_id.empty()) throw Error(ErrorCode::InvalidArgument, "empty content id");
    if (anchors_.contains(call.content_id))
        throw Error(ErrorCode::DuplicateContent, "content " + call.content_id + " already anchored");
    anchors_.emplace(call.content_id, Anchor{sender, call.root});
}

PolicyId AccessRegistry::create_policy(const Address& sender, const CreatePolicy& call) {
    if (deactivated(sender)) throw Error(ErrorCode::ContractDeactivated, "contract of " + sender.hex);
    auto anchor = anchors_.find(call.content_id);
    if (anchor == anchors_.end()) throw Error(ErrorCode::NotAnchored, "content " + call.content_id);
    if (anchor->second.owner != sender)
        throw Error(ErrorCode::NotOwner, "content " + call.content_id + " anchored by another owner");
    if (call.threshold == 0) throw Error(ErrorCode::InvalidArgument, "threshold must be positive");
    if (call.key_holders.size() < call.threshold)
        throw Error(ErrorCode::TooFewKeyHolders, std::to_string(call.key_holders.size()) + " holders for t=" +
                                                     std::to_string(call.threshold));
    std::set<Address> miners;
    std::set<std::uint8_t> xs;
    for (const auto& k : call.key_holders) {
        if (k.x == 0) throw Error(ErrorCode::InvalidArgument, "key share index 0 is forbidden");
        if (!miners.insert(k.miner).second || !xs.insert(k.x).second)
            throw Error(ErrorCode::DuplicateKeyHolder, k.miner.hex);
    }
    check_roles(call.acl);
    check_roles(call.allowed_roles);
    if (call.leaf_cids.empty() || merkle_root(call.leaf_cids) != anchor->second.root)
        throw Error(ErrorCode::LeafMismatch, "leaf cids do not reproduce the anchored root");
    const std::set<Cid> leaves(call.leaf_cids.begin(), call.leaf_cids.end());
    for (const auto& [c, _] : call.shard_locations)
        if (!leaves.contains(c)) throw Error(ErrorCode::InvalidArgument, "shard location for unknown cid " + c.hex());

    const PolicyId id = next_policy_id_++;
    Policy p;
    p.id = id;
    p.owner = sender;
    p.content_id = call.content_id;
    p.acl = call.acl;
    p.allowed_roles = call.allowed_roles;
    p.key_holders = call.key_holders;
    p.leaf_cids = call.leaf_cids;
    p.shard_locations = call.shard_locations;
    p.threshold = call.threshold;
    contracts_[sender].policies.emplace(id, std::move(p));
    policy_owner_.emplace(id, sender);
    content_policy_[call.content_id] = id;
    return id;
}

Policy& AccessRegistry::mutable_policy(const Address& sender, PolicyId id) {
    auto owner = policy_owner_.find(id);
    if (owner == policy_owner_.end()) throw Error(ErrorCode::UnknownPolicy, "policy " + std::to_string(id));
    auto& state = contracts_.at(owner->second);
    if (state.deactivated) throw Error(ErrorCode::ContractDeactivated, "contract of " + owner->second.hex);
    if (owner->second != sender) throw Error(ErrorCode::NotOwner, "policy " + std::to_string(id));
    auto& p = state.policies.at(id);
    if (p.status == PolicyStatus::Revoked) throw Error(ErrorCode::PolicyRevoked, "policy " + std::to_string(id));
    return p;
}

void AccessRegistry::update_policy(const Address& sender, const UpdatePolicy& call) {
    Policy& p = mutable_policy(sender, call.policy_id);
    if (call.acl) check_roles(*call.acl);
    if (call.allowed_roles) check_roles(*call.allowed_roles);
    if (call.acl) p.acl = *call.acl;
    if (call.allowed_roles) p.allowed_roles = *call.allowed_roles;
}

void AccessRegistry::revoke_policy(const Address& sender, const RevokePolicy& call) {
    mutable_policy(sender, call.policy_id).status = PolicyStatus::Revoked;
}

void AccessRegistry::delete_acc(const Address& sender, const DeleteAcc& call) {
    if (sender != call.contract_owner) throw Error(ErrorCode::NotOwner, "contract of " + call.contract_owner.hex);
    if (deactivated(sender)) throw Error(ErrorCode::ContractDeactivated, "contract of " + sender.hex);
    auto& state = contracts_[sender];
    // Policy bodies are released; ids stay reserved in policy_owner_.
    state.policies.clear();
    state.deactivated = true;
}

AccessDecision AccessRegistry::check_access(const Address& requester, PolicyId id) const {
    auto owner = policy_owner_.find(id);
    if (owner == policy_owner_.end()) return Denied{DenyReason::NoPolicy};
    const ContractState& state = contracts_.at(owner->second);
    if (state.deactivated) throw Error(ErrorCode::ContractDeactivated, "contract of " + owner->second.hex);
    const Policy& p = state.policies.at(id);
    if (p.status == PolicyStatus::Revoked) return Denied{DenyReason::Revoked};
    auto entry = p.acl.find(requester);
    if (entry == p.acl.end()) return Denied{DenyReason::NotInAcl};
    if (!p.allowed_roles.contains(entry->second)) return Denied{DenyReason::RoleNotAllowed};

    AccessGrant g;
    g.policy_id = id;
    g.content_id = p.content_id;
    g.owner = p.owner;
    g.root = anchors_.at(p.content_id).root;
    g.leaf_cids = p.leaf_cids;
    g.shard_locations = p.shard_locations;
    g.key_holders = p.key_holders;
    g.threshold = p.threshold;
    return g;
}

std::optional<Anchor> AccessRegistry::anchor_of(const std::string& content_id) const {
    auto it = anchors_.find(content_id);
    if (it == anchors_.end()) return std::nullopt;
    return it->second;
}

const Policy* AccessRegistry::policy(PolicyId id) const {
    auto owner = policy_owner_.find(id);
    if (owner == policy_owner_.end()) return nullptr;
    const auto& policies = contracts_.at(owner->second).policies;
    auto it = policies.find(id);
    return it == policies.end() ? nullptr : &it->second;
}

std::optional<PolicyId> AccessRegistry::policy_for_content(const std::string& content_id) const {
    auto it = content_policy_.find(content_id);
    if (it == content_policy_.end()) return std::nullopt;
    return it->second;
}

std::optional<Address> AccessRegistry::policy_owner(PolicyId id) const {
    auto it = policy_owner_.find(id);
    if (it == policy_owner_.end()) return std::nullopt;
    return it->second;
}

void AccessRegistry::encode(CanonicalWriter& w) const {
    w.u64(anchors_.size());
    for (const auto& [id, a] : anchors_) w.str(id).str(a.owner.hex).bytes(a.root.digest);
    w.u64(contracts_.size());
    for (const auto& [owner, state] : contracts_) {
        w.str(owner.hex).u8(state.deactivated ? 1 : 0).u64(state.policies.size());
        for (const auto& [_, p] : state.policies) dosn::encode(w, p);
    }
    w.u64(policy_owner_.size());
    for (const auto& [id, owner] : policy_owner_) w.u64(id).str(owner.hex);
    w.u64(content_policy_.size());
    for (const auto& [content, id] : content_policy_) w.str(content).u64(id);
    w.u64(next_policy_id_);
}

}  // namespace dosn
