#include "dosn/session.hpp"

#include <algorithm>
#include <cctype>

#include "dosn/error.hpp"

namespace dosn {

Session::Session(std::uint64_t seed, std::size_t chunk_size_, std::uint64_t rng_position)
    : chunk_size(chunk_size_), rng(seed, rng_position) {
    if (chunk_size == 0) throw Error(ErrorCode::InvalidArgument, "chunk size must be positive");
}

Address Session::add_miner(std::string alias) {
    if (alias.empty()) alias = "m" + std::to_string(miners_.size() + 1);
    for (const auto& [a, _] : miners_)
        if (a == alias) throw Error(ErrorCode::DuplicateMiner, "alias " + alias);
    const Address addr = KeyPair::generate(rng).address();
    network.add_miner(addr);
    miners_.emplace_back(alias, addr);
    return addr;
}

void Session::restore_miner(const std::string& alias, MinerRecord record) {
    const Address addr = record.address;
    network.load_miner(std::move(record));
    miners_.emplace_back(alias, addr);
}

const KeyPair& Session::add_user(const std::string& name) {
    if (name.empty() || !std::all_of(name.begin(), name.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
        }))
        throw Error(ErrorCode::InvalidArgument, "user names are nonempty [A-Za-z0-9_-]: '" + name + "'");
    if (users_.contains(name)) throw Error(ErrorCode::InvalidArgument, "user " + name + " already exists");
    return users_.emplace(name, KeyPair::generate(rng)).first->second;
}

void Session::restore_user(const std::string& name, KeyPair keys) { users_.insert_or_assign(name, std::move(keys)); }

const KeyPair& Session::user(const std::string& name) const {
    auto it = users_.find(name);
    if (it == users_.end()) throw Error(ErrorCode::InvalidArgument, "unknown user " + name);
    return it->second;
}

Address Session::resolve_miner(const std::string& alias_or_address) const {
    for (const auto& [alias, addr] : miners_)
        if (alias == alias_or_address || addr.hex == alias_or_address) return addr;
    throw Error(ErrorCode::UnknownMiner, alias_or_address);
}

std::string Session::miner_alias(const Address& address) const {
    for (const auto& [alias, addr] : miners_)
        if (addr == address) return alias;
    return address.hex;
}

std::string Session::display_name(const Address& a) const {
    for (const auto& [name, keys] : users_)
        if (keys.address() == a) return name;
    return miner_alias(a);
}

Digest Session::digest() const {
    CanonicalWriter w;
    w.str("dosn/session/v1").bytes(ledger.state_digest()).u64(chunk_size).u64(rng.seed()).u64(rng.position());
    for (const auto& [alias, addr] : miners_) {
        const MinerRecord m = network.miner(addr);
        w.str(alias).str(addr.hex).u8(static_cast<std::uint8_t>(m.behavior)).u64(m.bytes_stored).u64(m.tamper_count);
        w.u64(m.shards.size());
        for (const auto& [c, data] : m.shards) w.bytes(c.digest).bytes(sha256(data));
        w.u64(m.key_shares.size());
        for (const auto& [id, s] : m.key_shares) w.str(id).u8(s.share.x).bytes(s.share.y).str(s.owner.hex);
    }
    for (const auto& m : network.manifests()) w.bytes(m.root.digest).u64(m.total_len);
    for (const auto& [name, keys] : users_) w.str(name).str(keys.address().hex);
    return sha256(w.data());
}

namespace {

Bytes content_of(const json& op, DeterministicRng& content_rng) {
    if (op.contains("text")) return to_bytes(op.at("text").get<std::string>());
    if (op.contains("hex")) return from_hex(op.at("hex").get<std::string>());
    if (op.contains("random_bytes")) return content_rng.bytes(op.at("random_bytes").get<std::size_t>());
    throw Error(ErrorCode::InvalidArgument, "post needs one of text, hex, random_bytes");
}

std::set<Role> roles_of(const json& j) {
    std::set<Role> roles;
    for (const auto& r : j) roles.insert(Role{r.get<std::string>()});
    return roles;
}

}  // namespace

json run_scenario(const json& scenario) {
    if (!scenario.is_object()) throw Error(ErrorCode::InvalidArgument, "scenario must be a JSON object");
    const auto seed = scenario.value("seed", std::uint64_t{0});
    Session s(seed, scenario.value("chunk_size", kDefaultChunkSize));
    DeterministicRng content_rng(seed ^ 0x636f6e74656e74ULL);

    const json miners = scenario.value("miners", json(0));
    if (miners.is_number_integer()) {
        if (miners.get<std::int64_t>() < 0) throw Error(ErrorCode::InvalidArgument, "negative miner count");
        for (std::int64_t i = 0; i < miners.get<std::int64_t>(); ++i) s.add_miner();
    } else {
        for (const auto& alias : miners) s.add_miner(alias.get<std::string>());
    }
    for (const auto& name : scenario.value("users", json::array())) s.add_user(name.get<std::string>());
    const json behaviors = scenario.value("behaviors", json::object());
    for (const auto& [miner, behavior] : behaviors.items())
        s.network.set_behavior(s.resolve_miner(miner), behavior_from_string(behavior.get<std::string>()));

    std::map<std::string, std::string> labels;
    std::map<std::string, Bytes> originals;
    std::map<std::string, AccessGrant> grants;
    auto content_ref = [&](const json& op) {
        const auto ref = op.at("content").get<std::string>();
        auto it = labels.find(ref);
        return it == labels.end() ? ref : it->second;
    };

    Protocol proto = s.protocol();
    json results = json::array();
    std::size_t wrong_plaintext = 0;
    std::size_t unmet = 0;
    std::size_t index = 0;
    for (const auto& op : scenario.value("operations", json::array())) {
        const auto kind = op.at("op").get<std::string>();
        static const std::set<std::string> known{"post",  "get",    "get_with_grant", "capture_grant",
                                                 "grant", "ungrant", "allow",         "revoke",
                                                 "forget", "acc_delete", "set_behavior"};
        if (!known.contains(kind)) throw Error(ErrorCode::InvalidArgument, "unknown operation " + kind);
        json r{{"index", index++}, {"op", kind}};
        std::string outcome = "ok";
        try {
            if (kind == "post") {
                const Bytes content = content_of(op, content_rng);
                Acl acl;
                const json acl_doc = op.value("acl", json::object());
                for (const auto& [name, role] : acl_doc.items())
                    acl[s.user(name).address()] = Role{role.get<std::string>()};
                PublishParams params;
                params.t = op.value("t", 3U);
                params.n = op.value("n", 5U);
                params.r = op.value("r", 2U);
                params.chunk_size = op.value("chunk_size", s.chunk_size);
                const ContentRecord rec = proto.publish(s.user(op.at("owner").get<std::string>()), content, acl,
                                                        roles_of(op.value("allow", json::array())), params);
                r["content_id"] = rec.content_id;
                r["policy_id"] = rec.policy_id;
                r["leaves"] = rec.manifest.leaf_cids.size();
                originals[rec.content_id] = content;
                if (op.contains("label")) labels[op.at("label").get<std::string>()] = rec.content_id;
            } else if (kind == "get" || kind == "get_with_grant") {
                FetchOutcome f;
                std::string id;
                if (kind == "get") {
                    id = content_ref(op);
                    f = proto.fetch(s.user(op.at("as").get<std::string>()), id);
                } else {
                    const AccessGrant& g = grants.at(op.at("grant").get<std::string>());
                    id = g.content_id;
                    f = proto.fetch_with_grant(g);
                }
                r["fetch"] = f;
                if (f.ok()) {
                    auto orig = originals.find(id);
                    const bool matches = orig != originals.end() && orig->second == *f.plaintext;
                    r["matches_original"] = matches;
                    if (!matches) ++wrong_plaintext;
                } else {
                    outcome = std::string(to_string(*f.failure));
                }
            } else if (kind == "capture_grant") {
                const std::string id = content_ref(op);
                const Receipt rc = submit_as(s.ledger, s.user(op.at("as").get<std::string>()),
                                             CheckAccess{proto.policy_id(id)});
                if (!rc.accepted()) throw Error(*rc.reason, rc.message);
                const auto& d = std::get<AccessDecision>(rc.result);
                if (!granted(d)) {
                    outcome = "AccessDenied";
                } else {
                    grants[op.at("grant").get<std::string>()] = std::get<AccessGrant>(d);
                }
            } else if (kind == "grant" || kind == "ungrant") {
                std::optional<Role> role;
                if (kind == "grant") role = Role{op.at("role").get<std::string>()};
                const Receipt rc = proto.set_acl_entry(s.user(op.at("owner").get<std::string>()), content_ref(op),
                                                       s.user(op.at("user").get<std::string>()).address(), role);
                if (!rc.accepted()) throw Error(*rc.reason, rc.message);
            } else if (kind == "allow") {
                const Receipt rc = submit_as(s.ledger, s.user(op.at("owner").get<std::string>()),
                                             UpdatePolicy{proto.policy_id(content_ref(op)), std::nullopt,
                                                          roles_of(op.at("roles"))});
                if (!rc.accepted()) throw Error(*rc.reason, rc.message);
            } else if (kind == "revoke") {
                const Receipt rc = submit_as(s.ledger, s.user(op.at("owner").get<std::string>()),
                                             RevokePolicy{proto.policy_id(content_ref(op))});
                if (!rc.accepted()) throw Error(*rc.reason, rc.message);
            } else if (kind == "forget") {
                proto.forget(s.user(op.at("owner").get<std::string>()), content_ref(op));
            } else if (kind == "acc_delete") {
                const KeyPair& owner = s.user(op.at("owner").get<std::string>());
                const Receipt rc = submit_as(s.ledger, owner, DeleteAcc{owner.address()});
                if (!rc.accepted()) throw Error(*rc.reason, rc.message);
            } else if (kind == "set_behavior") {
                s.network.set_behavior(s.resolve_miner(op.at("miner").get<std::string>()),
                                       behavior_from_string(op.at("behavior").get<std::string>()));
            }
        } catch (const Error& e) {
            outcome = std::string(to_string(e.code()));
            r["error"] = e.what();
        }
        r["outcome"] = outcome;
        if (op.contains("expect")) {
            const bool met = op.at("expect").get<std::string>() == outcome;
            r["expectation_met"] = met;
            if (!met) ++unmet;
        }
        results.push_back(std::move(r));
    }

    json report{{"results", results},
                {"state_digest", to_hex(s.digest())},
                {"ledger_digest", to_hex(s.ledger.state_digest())},
                {"ledger_height", s.ledger.height()},
                {"stats", s.network.report()},
                {"wrong_plaintext", wrong_plaintext},
                {"unmet_expectations", unmet}};
    if (scenario.value("include_ledger", false)) report["ledger"] = s.ledger.blocks();
    return report;
}

}  // namespace dosn
