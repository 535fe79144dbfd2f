#include "dosn/serialization.hpp"

#include <sstream>

#include "dosn/error.hpp"

namespace dosn {

namespace {

json acl_to_json(const Acl& acl) {
    json j = json::object();
    for (const auto& [addr, role] : acl) j[addr.hex] = role.name;
    return j;
}

Acl acl_from_json(const json& j) {
    Acl acl;
    for (const auto& [addr, role] : j.items()) acl[Address{addr}] = Role{role.get<std::string>()};
    return acl;
}

json roles_to_json(const std::set<Role>& roles) {
    json j = json::array();
    for (const auto& r : roles) j.push_back(r.name);
    return j;
}

std::set<Role> roles_from_json(const json& j) {
    std::set<Role> roles;
    for (const auto& r : j) roles.insert(Role{r.get<std::string>()});
    return roles;
}

json locations_to_json(const ShardLocations& locs) {
    json j = json::object();
    for (const auto& [c, miners] : locs) j[c.hex()] = miners;
    return j;
}

ShardLocations locations_from_json(const json& j) {
    ShardLocations locs;
    for (const auto& [c, miners] : j.items()) locs[Cid::from_hex(c)] = miners.get<std::vector<Address>>();
    return locs;
}

std::uint8_t small(const json& j, const char* key) {
    const auto v = j.at(key).get<unsigned>();
    if (v > 255) throw Error(ErrorCode::InvalidEncoding, std::string(key) + " exceeds 255");
    return static_cast<std::uint8_t>(v);
}

}  // namespace

void to_json(json& j, const Address& a) { j = a.hex; }
void from_json(const json& j, Address& a) { a.hex = j.get<std::string>(); }
void to_json(json& j, const Cid& c) { j = c.hex(); }
void from_json(const json& j, Cid& c) { c = Cid::from_hex(j.get<std::string>()); }
void to_json(json& j, const Signature& s) { j = s.hex(); }
void from_json(const json& j, Signature& s) { s = Signature::from_hex(j.get<std::string>()); }
void to_json(json& j, const Role& r) { j = r.name; }
void from_json(const json& j, Role& r) { r.name = j.get<std::string>(); }

void to_json(json& j, const KeyShare& s) {
    j = json{{"content_id", s.content_id}, {"x", s.x}, {"t", s.threshold}, {"n", s.share_count}, {"y", to_hex(s.y)}};
}

void from_json(const json& j, KeyShare& s) {
    s.content_id = j.at("content_id").get<std::string>();
    s.x = small(j, "x");
    s.threshold = small(j, "t");
    s.share_count = small(j, "n");
    s.y = from_hex(j.at("y").get<std::string>());
}

void to_json(json& j, const DagManifest& m) {
    j = json{{"root", m.root}, {"chunk_size", m.chunk_size}, {"total_len", m.total_len}, {"leaves", m.leaf_cids}};
}

void from_json(const json& j, DagManifest& m) {
    m = manifest_from_leaves(j.at("leaves").get<std::vector<Cid>>(), j.at("chunk_size").get<std::size_t>(),
                             j.at("total_len").get<std::size_t>());
    if (m.root != j.at("root").get<Cid>())
        throw Error(ErrorCode::InvalidEncoding, "manifest root does not match its leaves");
}

void to_json(json& j, const MerkleProof& p) {
    json path = json::array();
    for (const auto& s : p.path)
        path.push_back({{"digest", s.sibling}, {"side", s.side == Side::Left ? "left" : "right"}});
    j = json{{"leaf_index", p.leaf_index}, {"leaf_count", p.leaf_count}, {"path", path}};
}

void from_json(const json& j, MerkleProof& p) {
    p.leaf_index = j.at("leaf_index").get<std::size_t>();
    p.leaf_count = j.at("leaf_count").get<std::size_t>();
    p.path.clear();
    for (const auto& s : j.at("path")) {
        const auto side = s.at("side").get<std::string>();
        if (side != "left" && side != "right") throw Error(ErrorCode::InvalidEncoding, "bad proof side " + side);
        p.path.push_back({s.at("digest").get<Cid>(), side == "left" ? Side::Left : Side::Right});
    }
}

void to_json(json& j, const KeyHolder& k) { j = json{{"miner", k.miner}, {"x", k.x}}; }

void from_json(const json& j, KeyHolder& k) {
    k.miner = j.at("miner").get<Address>();
    k.x = small(j, "x");
}

void to_json(json& j, const Policy& p) {
    j = json{{"policy_id", p.id},
             {"owner", p.owner},
             {"content_id", p.content_id},
             {"acl", acl_to_json(p.acl)},
             {"allowed_roles", roles_to_json(p.allowed_roles)},
             {"key_holders", p.key_holders},
             {"leaf_cids", p.leaf_cids},
             {"shard_locations", locations_to_json(p.shard_locations)},
             {"threshold", p.threshold},
             {"status", p.status == PolicyStatus::Active ? "active" : "revoked"}};
}

void to_json(json& j, const AccessGrant& g) {
    j = json{{"policy_id", g.policy_id},
             {"content_id", g.content_id},
             {"owner", g.owner},
             {"root", g.root},
             {"leaf_cids", g.leaf_cids},
             {"shard_locations", locations_to_json(g.shard_locations)},
             {"key_holders", g.key_holders},
             {"threshold", g.threshold}};
}

void to_json(json& j, const AccessDecision& d) {
    if (const auto* g = std::get_if<AccessGrant>(&d))
        j = json{{"decision", "grant"}, {"grant", *g}};
    else
        j = json{{"decision", "denied"}, {"reason", to_string(std::get<Denied>(d).reason)}};
}

void to_json(json& j, const Payload& p) {
    j = std::visit(
        [](const auto& c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, AnchorRoot>) {
                return {{"content_id", c.content_id}, {"root", c.root}};
            } else if constexpr (std::is_same_v<T, CreatePolicy>) {
                return {{"content_id", c.content_id},
                        {"acl", acl_to_json(c.acl)},
                        {"allowed_roles", roles_to_json(c.allowed_roles)},
                        {"key_holders", c.key_holders},
                        {"leaf_cids", c.leaf_cids},
                        {"shard_locations", locations_to_json(c.shard_locations)},
                        {"threshold", c.threshold}};
            } else if constexpr (std::is_same_v<T, UpdatePolicy>) {
                return {{"policy_id", c.policy_id},
                        {"acl", c.acl ? acl_to_json(*c.acl) : json(nullptr)},
                        {"allowed_roles", c.allowed_roles ? roles_to_json(*c.allowed_roles) : json(nullptr)}};
            } else if constexpr (std::is_same_v<T, DeleteAcc>) {
                return {{"contract_owner", c.contract_owner}};
            } else {
                return {{"policy_id", c.policy_id}};
            }
        },
        p);
    j["type"] = payload_name(p);
}

void from_json(const json& j, Payload& p) {
    const auto type = j.at("type").get<std::string>();
    if (type == "anchor_root") {
        p = AnchorRoot{j.at("content_id").get<std::string>(), j.at("root").get<Cid>()};
    } else if (type == "create_policy") {
        CreatePolicy c;
        c.content_id = j.at("content_id").get<std::string>();
        c.acl = acl_from_json(j.at("acl"));
        c.allowed_roles = roles_from_json(j.at("allowed_roles"));
        c.key_holders = j.at("key_holders").get<std::vector<KeyHolder>>();
        c.leaf_cids = j.at("leaf_cids").get<std::vector<Cid>>();
        c.shard_locations = locations_from_json(j.at("shard_locations"));
        c.threshold = small(j, "threshold");
        p = std::move(c);
    } else if (type == "update_policy") {
        UpdatePolicy c;
        c.policy_id = j.at("policy_id").get<PolicyId>();
        if (!j.at("acl").is_null()) c.acl = acl_from_json(j.at("acl"));
        if (!j.at("allowed_roles").is_null()) c.allowed_roles = roles_from_json(j.at("allowed_roles"));
        p = std::move(c);
    } else if (type == "revoke_policy") {
        p = RevokePolicy{j.at("policy_id").get<PolicyId>()};
    } else if (type == "check_access") {
        p = CheckAccess{j.at("policy_id").get<PolicyId>()};
    } else if (type == "delete_acc") {
        p = DeleteAcc{j.at("contract_owner").get<Address>()};
    } else {
        throw Error(ErrorCode::InvalidEncoding, "unknown payload type " + type);
    }
}

void to_json(json& j, const Transaction& tx) {
    j = json{{"sender", tx.sender}, {"nonce", tx.nonce}, {"payload", tx.payload}, {"signature", tx.signature}};
}

void from_json(const json& j, Transaction& tx) {
    tx.sender = j.at("sender").get<Address>();
    tx.nonce = j.at("nonce").get<std::uint64_t>();
    tx.payload = j.at("payload").get<Payload>();
    tx.signature = j.at("signature").get<Signature>();
}

void to_json(json& j, const Block& b) {
    j = json{{"height", b.height}, {"parent", b.parent}, {"digest", b.digest}, {"txs", b.txs}};
}

void from_json(const json& j, Block& b) {
    b.height = j.at("height").get<std::uint64_t>();
    b.parent = j.at("parent").get<Cid>();
    b.digest = j.at("digest").get<Cid>();
    b.txs = j.at("txs").get<std::vector<Transaction>>();
}

void to_json(json& j, const Receipt& r) {
    j = json{{"tx_digest", r.tx_digest},
             {"height", r.height},
             {"status", r.accepted() ? "accepted" : "rejected"}};
    if (r.reason) j["reason"] = to_string(*r.reason);
    if (!r.message.empty()) j["message"] = r.message;
    if (const auto* id = std::get_if<PolicyId>(&r.result)) j["policy_id"] = *id;
    if (const auto* d = std::get_if<AccessDecision>(&r.result)) j["access"] = *d;
}

void to_json(json& j, const MinerRecord& m) {
    json shards = json::object();
    for (const auto& [c, data] : m.shards) shards[c.hex()] = to_hex(data);
    json shares = json::array();
    for (const auto& [_, s] : m.key_shares) {
        json e = s.share;
        e["owner"] = s.owner;
        shares.push_back(std::move(e));
    }
    j = json{{"address", m.address},
             {"behavior", to_string(m.behavior)},
             {"bytes_stored", m.bytes_stored},
             {"tamper_count", m.tamper_count},
             {"shards", shards},
             {"key_shares", shares}};
}

void from_json(const json& j, MinerRecord& m) {
    m.address = j.at("address").get<Address>();
    m.behavior = behavior_from_string(j.at("behavior").get<std::string>());
    m.bytes_stored = j.at("bytes_stored").get<std::uint64_t>();
    m.tamper_count = j.value("tamper_count", std::uint64_t{0});
    m.shards.clear();
    for (const auto& [c, data] : j.at("shards").items())
        m.shards[Cid::from_hex(c)] = from_hex(data.get<std::string>());
    m.key_shares.clear();
    for (const auto& e : j.at("key_shares")) {
        StoredShare s{e.get<KeyShare>(), e.at("owner").get<Address>()};
        m.key_shares[s.share.content_id] = std::move(s);
    }
}

void to_json(json& j, const StorageReport& r) {
    json nodes = json::object();
    for (const auto& [a, b] : r.per_node) nodes[a.hex] = b;
    j = json{{"shard_bytes", r.shard_bytes},
             {"share_bytes", r.share_bytes},
             {"manifest_bytes", r.manifest_bytes},
             {"total_bytes", r.total_bytes},
             {"per_node", nodes}};
}

void to_json(json& j, const FetchOutcome& f) {
    j = json{{"ok", f.ok()}};
    if (f.failure) j["failure"] = to_string(*f.failure);
    if (!f.detail.empty()) j["detail"] = f.detail;
    if (f.plaintext) j["size"] = f.plaintext->size();
    j["misbehaving"] = f.misbehaving;
}

std::string blocks_to_jsonl(std::span<const Block> blocks) {
    std::string out;
    for (const auto& b : blocks) {
        out += json(b).dump();
        out += '\n';
    }
    return out;
}

std::vector<Block> blocks_from_jsonl(std::string_view text) {
    std::vector<Block> blocks;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            blocks.push_back(json::parse(line).get<Block>());
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvalidEncoding, "ledger line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return blocks;
}

}  // namespace dosn
