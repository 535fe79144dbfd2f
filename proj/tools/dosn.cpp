// dosn: command-line front end for the simulated decentralized social network.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "dosn/error.hpp"
#include "dosn/serialization.hpp"
#include "dosn/session.hpp"
#include "dosn/workspace.hpp"

namespace {

using namespace dosn;

struct Globals {
    std::string workspace;
    bool json_out = false;
};

Bytes read_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return to_bytes(ss.str());
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

// Opens the workspace under its lock, runs `fn`, saves when `mutate` is set.
template <typename Fn>
void with_workspace(const Globals& g, bool mutate, Fn&& fn) {
    const auto dir = workspace_path(g.workspace);
    if (!std::filesystem::exists(dir))
        throw Error(ErrorCode::WorkspaceError, "no workspace at " + dir.string() + " (run `dosn init`)");
    WorkspaceLock lock(dir);
    Workspace ws = Workspace::open(dir);
    fn(ws.session());
    if (mutate) ws.save();
}

std::string short_hex(const std::string& hex) { return hex.size() > 12 ? hex.substr(0, 10) + ".." : hex; }

void print_stats(const Session& s, bool as_json) {
    const StorageReport rep = s.network.report();
    json miners = json::array();
    for (const auto& [alias, addr] : s.miner_aliases()) {
        const MinerRecord m = s.network.miner(addr);
        miners.push_back({{"alias", alias},
                          {"address", addr},
                          {"behavior", to_string(m.behavior)},
                          {"shards", m.shards.size()},
                          {"key_shares", m.key_shares.size()},
                          {"bytes_stored", m.bytes_stored}});
    }
    if (as_json) {
        print_json({{"report", rep}, {"miners", miners}, {"ledger_height", s.ledger.height()}});
        return;
    }
    std::cout << std::left << std::setw(8) << "miner" << std::setw(16) << "address" << std::setw(10) << "behavior"
              << std::right << std::setw(8) << "shards" << std::setw(8) << "shares" << std::setw(14) << "bytes"
              << '\n';
    for (const auto& m : miners)
        std::cout << std::left << std::setw(8) << m["alias"].get<std::string>() << std::setw(16)
                  << short_hex(m["address"].get<std::string>()) << std::setw(10)
                  << m["behavior"].get<std::string>() << std::right << std::setw(8) << m["shards"].get<std::size_t>()
                  << std::setw(8) << m["key_shares"].get<std::size_t>() << std::setw(14)
                  << m["bytes_stored"].get<std::uint64_t>() << '\n';
    std::cout << "shard bytes:    " << rep.shard_bytes << '\n'
              << "share bytes:    " << rep.share_bytes << '\n'
              << "manifest bytes: " << rep.manifest_bytes << '\n'
              << "total bytes:    " << rep.total_bytes << '\n';
}

json baseline_compare(std::size_t k, std::size_t contents, std::size_t size, unsigned r, std::size_t miners,
                      std::uint64_t seed, std::size_t chunk_size) {
    Session s(seed, chunk_size);
    for (std::size_t i = 0; i < miners; ++i) s.add_miner();
    const KeyPair& owner = s.add_user("owner");
    DeterministicRng content_rng(seed + 1);
    std::vector<Bytes> corpus;
    for (std::size_t i = 0; i < contents; ++i) corpus.push_back(content_rng.bytes(size));

    PublishParams params;
    params.r = r;
    params.n = static_cast<unsigned>(std::min<std::size_t>(5, miners));
    params.t = std::min(3U, params.n);
    params.chunk_size = chunk_size;
    Protocol proto = s.protocol();
    for (const auto& c : corpus) proto.publish(owner, c, {}, {}, params);

    const TrustedNodeBaseline baseline = publish_baseline(k, corpus);
    const std::uint64_t raw = static_cast<std::uint64_t>(contents) * size;
    const std::uint64_t dosn_total = s.network.total_bytes();
    return {{"k", k},
            {"contents", contents},
            {"content_size", size},
            {"r", r},
            {"miners", miners},
            {"raw_bytes", raw},
            {"baseline_bytes", baseline.total_bytes()},
            {"dosn_bytes", dosn_total},
            {"dosn_report", s.network.report()},
            {"dosn_over_baseline", baseline.total_bytes() == 0 ? 0.0
                                                               : static_cast<double>(dosn_total) /
                                                                     static_cast<double>(baseline.total_bytes())}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decentralized social network simulator: encrypted, content-addressed, threshold-keyed posts "
                 "gated by an on-ledger access control contract"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("-w,--workspace", g.workspace, "Workspace directory (default $DOSN_WORKSPACE or ./.dosn)");
    app.add_flag("--json", g.json_out, "Machine-readable output");

    std::function<void()> action;

    // init
    auto* init = app.add_subcommand("init", "Create a workspace with seeded miners");
    std::size_t init_miners = 6;
    std::uint64_t init_seed = 0;
    std::size_t init_chunk = kDefaultChunkSize;
    init->add_option("--miners", init_miners, "Number of miners")->capture_default_str();
    init->add_option("--seed", init_seed, "Seed for every generated secret")->capture_default_str();
    init->add_option("--chunk-size", init_chunk, "Default chunk size in octets")->capture_default_str()
        ->check(CLI::PositiveNumber);
    init->callback([&] {
        action = [&] {
            const auto dir = workspace_path(g.workspace);
            std::filesystem::create_directories(dir);
            WorkspaceLock lock(dir);
            Workspace ws = Workspace::create(dir, init_miners, init_seed, init_chunk);
            json miners = json::array();
            for (const auto& [alias, addr] : ws.session().miner_aliases())
                miners.push_back({{"alias", alias}, {"address", addr}});
            if (g.json_out) {
                print_json({{"workspace", dir.string()}, {"miners", miners}});
            } else {
                std::cout << "initialised " << dir.string() << " with " << init_miners << " miners\n";
                for (const auto& m : miners)
                    std::cout << "  " << m["alias"].get<std::string>() << "  " << m["address"].get<std::string>()
                              << '\n';
            }
        };
    });

    // user add
    auto* user = app.add_subcommand("user", "Manage users");
    user->require_subcommand(1);
    auto* user_add = user->add_subcommand("add", "Register a user with a fresh key pair");
    std::string user_name;
    user_add->add_option("name", user_name)->required();
    user_add->callback([&] {
        action = [&] {
            with_workspace(g, true, [&](Session& s) {
                const KeyPair& kp = s.add_user(user_name);
                if (g.json_out)
                    print_json({{"name", user_name}, {"address", kp.address()}});
                else
                    std::cout << user_name << "  " << kp.address().hex << '\n';
            });
        };
    });

    // miner add / set-behavior
    auto* miner = app.add_subcommand("miner", "Manage miners");
    miner->require_subcommand(1);
    auto* miner_add = miner->add_subcommand("add", "Register a new honest miner");
    std::string miner_alias;
    miner_add->add_option("alias", miner_alias, "Alias (default m<k>)");
    miner_add->callback([&] {
        action = [&] {
            with_workspace(g, true, [&](Session& s) {
                const Address a = s.add_miner(miner_alias);
                if (g.json_out)
                    print_json({{"alias", s.miner_alias(a)}, {"address", a}});
                else
                    std::cout << s.miner_alias(a) << "  " << a.hex << '\n';
            });
        };
    });
    auto* miner_behavior = miner->add_subcommand("set-behavior", "Set a miner to honest, tamper or offline");
    std::string mb_miner;
    std::string mb_behavior;
    miner_behavior->add_option("miner", mb_miner, "Alias or address")->required();
    miner_behavior->add_option("behavior", mb_behavior)->required()->check(
        CLI::IsMember({"honest", "tamper", "offline"}));
    miner_behavior->callback([&] {
        action = [&] {
            with_workspace(g, true, [&](Session& s) {
                s.network.set_behavior(s.resolve_miner(mb_miner), behavior_from_string(mb_behavior));
                if (g.json_out) print_json({{"miner", mb_miner}, {"behavior", mb_behavior}});
            });
        };
    });

    // post
    auto* post = app.add_subcommand("post", "Encrypt, shard and publish a file under a new policy");
    std::string post_owner;
    std::string post_file;
    PublishParams post_params;
    std::optional<std::size_t> post_chunk;
    std::vector<std::string> post_allow;
    std::vector<std::string> post_acl;
    post->add_option("--owner", post_owner)->required();
    post->add_option("--file", post_file)->required();
    post->add_option("--t", post_params.t, "Key share threshold")->capture_default_str();
    post->add_option("--n", post_params.n, "Key share count")->capture_default_str();
    post->add_option("--r", post_params.r, "Shard replication factor")->capture_default_str();
    post->add_option("--chunk-size", post_chunk, "Chunk size in octets")->check(CLI::PositiveNumber);
    post->add_option("--allow", post_allow, "Role granted read access (repeatable)");
    post->add_option("--acl", post_acl, "user=role entry (repeatable)");
    post->callback([&] {
        action = [&] {
            with_workspace(g, true, [&](Session& s) {
                Acl acl;
                for (const auto& entry : post_acl) {
                    const auto eq = entry.find('=');
                    if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size())
                        throw Error(ErrorCode::InvalidArgument, "--acl expects user=role, got " + entry);
                    acl[s.user(entry.substr(0, eq)).address()] = Role{entry.substr(eq + 1)};
                }
                std::set<Role> allowed;
                for (const auto& r : post_allow) allowed.insert(Role{r});
                PublishParams params = post_params;
                params.chunk_size = post_chunk.value_or(s.chunk_size);
                const ContentRecord rec =
                    s.protocol().publish(s.user(post_owner), read_input(post_file), acl, allowed, params);
                if (g.json_out) {
                    print_json({{"content_id", rec.content_id},
                                {"policy_id", rec.policy_id},
                                {"manifest", rec.manifest}});
                } else {
                    std::cout << "content " << rec.content_id << '\n'
                              << "policy  " << rec.policy_id << '\n'
                              << "leaves  " << rec.manifest.leaf_cids.size() << '\n';
                }
            });
        };
    });

    // grant
    auto* grant = app.add_subcommand("grant", "Assign a role to a user in a content's policy");
    std::string grant_owner;
    std::string grant_content;
    std::string grant_user;
    std::string grant_role;
    grant->add_option("--owner", grant_owner)->required();
    grant->add_option("--content", grant_content)->required();
    grant->add_option("--user", grant_user)->required();
    grant->add_option("--role", grant_role)->required();
    grant->callback([&] {
        action = [&] {
            with_workspace(g, true, [&](Session& s) {
                const Receipt r = s.protocol().set_acl_entry(s.user(grant_owner), grant_content,
                                                             s.user(grant_user).address(), Role{grant_role});
                if (!r.accepted()) throw Error(*r.reason, r.message);
                if (g.json_out) print_json(r);
            });
        };
    });

    // revoke
    auto* revoke = app.add_subcommand("revoke", "Revoke a content's policy, or drop one user with --user");
    std::string revoke_owner;
    std::string revoke_content;
    std::string revoke_user;
    revoke->add_option("--owner", revoke_owner)->required();
    revoke->add_option("--content", revoke_content)->required();
    revoke->add_option("--user", revoke_user, "Remove only this user's ACL entry");
    revoke->callback([&] {
        action = [&] {
            with_workspace(g, true, [&](Session& s) {
                Protocol proto = s.protocol();
                const Receipt r =
                    revoke_user.empty()
                        ? submit_as(s.ledger, s.user(revoke_owner), RevokePolicy{proto.policy_id(revoke_content)})
                        : proto.set_acl_entry(s.user(revoke_owner), revoke_content, s.user(revoke_user).address(),
                                              std::nullopt);
                if (!r.accepted()) throw Error(*r.reason, r.message);
                if (g.json_out) print_json(r);
            });
        };
    });

    // policy show
    auto* policy = app.add_subcommand("policy", "Inspect policies");
    policy->require_subcommand(1);
    auto* policy_show = policy->add_subcommand("show", "Dump a committed policy");
    PolicyId show_id = 0;
    policy_show->add_option("id", show_id)->required();
    policy_show->callback([&] {
        action = [&] {
            with_workspace(g, false, [&](Session& s) {
                const Policy* p = s.ledger.registry().policy(show_id);
                if (p == nullptr) {
                    const auto owner = s.ledger.registry().policy_owner(show_id);
                    if (owner && s.ledger.registry().deactivated(*owner))
                        throw Error(ErrorCode::ContractDeactivated, "policy " + std::to_string(show_id));
                    throw Error(ErrorCode::UnknownPolicy, "policy " + std::to_string(show_id));
                }
                print_json(*p);
            });
        };
    });

    // get
    auto* get = app.add_subcommand("get", "Fetch, verify and decrypt a content");
    std::string get_as;
    std::string get_content;
    std::string get_out;
    get->add_option("--as", get_as)->required();
    get->add_option("--content", get_content)->required();
    get->add_option("--out", get_out, "Write plaintext here instead of stdout");
    get->callback([&] {
        action = [&] {
            // The access check is itself a ledger transaction, so get mutates.
            with_workspace(g, true, [&](Session& s) {
                const FetchOutcome f = s.protocol().fetch(s.user(get_as), get_content);
                for (const auto& m : f.misbehaving)
                    std::cerr << "warning: miner " << s.miner_alias(m) << " returned bad or no data\n";
                if (!f.ok()) {
                    std::cerr << json{{"error", to_string(*f.failure)}, {"message", f.detail}}.dump() << '\n';
                    throw std::runtime_error("__reported__");
                }
                if (!get_out.empty()) {
                    std::ofstream out(get_out, std::ios::binary | std::ios::trunc);
                    out.write(reinterpret_cast<const char*>(f.plaintext->data()),
                              static_cast<std::streamsize>(f.plaintext->size()));
                    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + get_out);
                } else {
                    std::cout.write(reinterpret_cast<const char*>(f.plaintext->data()),
                                    static_cast<std::streamsize>(f.plaintext->size()));
                    std::cout.flush();
                }
            });
        };
    });

    // forget
    auto* forget = app.add_subcommand("forget", "Revoke a content's policy and destroy its key shares");
    std::string forget_owner;
    std::string forget_content;
    forget->add_option("--owner", forget_owner)->required();
    forget->add_option("--content", forget_content)->required();
    forget->callback([&] {
        action = [&] {
            with_workspace(g, true, [&](Session& s) {
                s.protocol().forget(s.user(forget_owner), forget_content);
                if (g.json_out) print_json({{"forgotten", forget_content}});
            });
        };
    });

    // acc delete
    auto* acc = app.add_subcommand("acc", "Access control contract management");
    acc->require_subcommand(1);
    auto* acc_delete = acc->add_subcommand("delete", "Deactivate an owner's access control contract");
    std::string acc_owner;
    acc_delete->add_option("--owner", acc_owner)->required();
    acc_delete->callback([&] {
        action = [&] {
            with_workspace(g, true, [&](Session& s) {
                const KeyPair& owner = s.user(acc_owner);
                const Receipt r = submit_as(s.ledger, owner, DeleteAcc{owner.address()});
                if (!r.accepted()) throw Error(*r.reason, r.message);
                if (g.json_out) print_json(r);
            });
        };
    });

    // net stats
    auto* net = app.add_subcommand("net", "Storage network");
    net->require_subcommand(1);
    auto* net_stats = net->add_subcommand("stats", "Storage accounting per miner and in total");
    net_stats->callback([&] {
        action = [&] { with_workspace(g, false, [&](Session& s) { print_stats(s, g.json_out); }); };
    });

    // ledger verify
    auto* ledger = app.add_subcommand("ledger", "Ledger tools");
    ledger->require_subcommand(1);
    auto* ledger_verify = ledger->add_subcommand("verify", "Re-validate a ledger file and print its state digest");
    std::string ledger_file;
    ledger_verify->add_option("file", ledger_file)->required();
    ledger_verify->callback([&] {
        action = [&] {
            const Bytes raw = read_input(ledger_file);
            const std::vector<Block> blocks = blocks_from_jsonl(to_string(raw));
            const Digest d = Ledger::verify_chain(blocks);
            if (g.json_out)
                print_json({{"valid", true}, {"height", blocks.back().height}, {"state_digest", to_hex(d)}});
            else
                std::cout << "chain valid, height " << blocks.back().height << "\nstate digest " << to_hex(d)
                          << '\n';
        };
    });

    // run
    auto* run = app.add_subcommand("run", "Execute a scenario file and print the JSON report");
    std::string scenario_file;
    run->add_option("scenario", scenario_file)->required();
    run->callback([&] {
        action = [&] {
            json scenario;
            try {
                scenario = json::parse(to_string(read_input(scenario_file)));
            } catch (const json::exception& e) {
                throw Error(ErrorCode::InvalidArgument, scenario_file + ": " + e.what());
            }
            print_json(run_scenario(scenario));
        };
    });

    // baseline compare
    auto* baseline = app.add_subcommand("baseline", "Trusted-node baseline experiments");
    baseline->require_subcommand(1);
    auto* compare = baseline->add_subcommand("compare", "Storage cost of k trusted nodes versus the network");
    std::size_t bc_k = 5;
    std::size_t bc_contents = 10;
    std::size_t bc_size = 1024 * 1024;
    unsigned bc_r = 2;
    std::size_t bc_miners = 6;
    std::uint64_t bc_seed = 0;
    std::size_t bc_chunk = kDefaultChunkSize;
    compare->add_option("--k", bc_k, "Trusted node count")->capture_default_str()->check(CLI::PositiveNumber);
    compare->add_option("--contents", bc_contents)->capture_default_str();
    compare->add_option("--size", bc_size, "Octets per content")->capture_default_str();
    compare->add_option("--r", bc_r, "Replication factor")->capture_default_str()->check(CLI::PositiveNumber);
    compare->add_option("--miners", bc_miners)->capture_default_str()->check(CLI::PositiveNumber);
    compare->add_option("--seed", bc_seed)->capture_default_str();
    compare->add_option("--chunk-size", bc_chunk)->capture_default_str()->check(CLI::PositiveNumber);
    compare->callback([&] {
        action = [&] {
            const json r = baseline_compare(bc_k, bc_contents, bc_size, bc_r, bc_miners, bc_seed, bc_chunk);
            if (g.json_out) {
                print_json(r);
            } else {
                std::cout << "contents:        " << bc_contents << " x " << bc_size << " octets\n"
                          << "baseline (k=" << bc_k << "): " << r["baseline_bytes"].get<std::uint64_t>() << '\n'
                          << "network (r=" << bc_r << "):  " << r["dosn_bytes"].get<std::uint64_t>() << '\n'
                          << "ratio:           " << std::fixed << std::setprecision(4)
                          << r["dosn_over_baseline"].get<double>() << '\n';
            }
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", "UsageError"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    }

    try {
        if (action) action();
    } catch (const Error& e) {
        std::cerr << json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        if (std::string_view(e.what()) != "__reported__")
            std::cerr << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
