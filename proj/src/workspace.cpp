#include "dosn/workspace.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dosn/error.hpp"

namespace dosn {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::WorkspaceError, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Write-then-rename so a crash never leaves a half-written file.
void write_file(const fs::path& p, const std::string& data) {
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::WorkspaceError, "cannot write " + tmp.string());
        out << data;
        if (!out) throw Error(ErrorCode::WorkspaceError, "short write to " + tmp.string());
    }
    fs::rename(tmp, p);
}

json read_json(const fs::path& p) {
    try {
        return json::parse(read_file(p));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::WorkspaceError, p.string() + ": " + e.what());
    }
}

}  // namespace

fs::path workspace_path(const std::string& explicit_path) {
    if (!explicit_path.empty()) return explicit_path;
    if (const char* env = std::getenv("DOSN_WORKSPACE"); env != nullptr && *env != '\0') return env;
    return ".dosn";
}

WorkspaceLock::WorkspaceLock(const fs::path& dir) {
    const fs::path lock = dir / ".lock";
    fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ < 0) throw Error(ErrorCode::WorkspaceError, "cannot open " + lock.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(fd_);
        throw Error(ErrorCode::WorkspaceError, "workspace " + dir.string() + " is locked by another process");
    }
}

WorkspaceLock::~WorkspaceLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

Workspace::Workspace(fs::path dir, std::unique_ptr<Session> session)
    : dir_(std::move(dir)), session_(std::move(session)) {}

Workspace Workspace::create(const fs::path& dir, std::size_t miners, std::uint64_t seed, std::size_t chunk_size) {
    if (fs::exists(dir / "workspace.json"))
        throw Error(ErrorCode::WorkspaceError, "workspace already initialised at " + dir.string());
    fs::create_directories(dir / "miners");
    fs::create_directories(dir / "users");
    Workspace ws(dir, std::make_unique<Session>(seed, chunk_size));
    for (std::size_t i = 0; i < miners; ++i) ws.session().add_miner();
    ws.save();
    return ws;
}

Workspace Workspace::open(const fs::path& dir) {
    if (!fs::exists(dir / "workspace.json"))
        throw Error(ErrorCode::WorkspaceError, "no workspace at " + dir.string() + " (run `dosn init`)");
    const json meta = read_json(dir / "workspace.json");
    if (meta.value("format_version", 0) != kWorkspaceFormatVersion)
        throw Error(ErrorCode::WorkspaceError, "unsupported workspace format version");

    auto session = std::make_unique<Session>(meta.at("seed").get<std::uint64_t>(),
                                             meta.at("chunk_size").get<std::size_t>(),
                                             meta.at("rng_position").get<std::uint64_t>());

    const std::vector<Block> blocks = blocks_from_jsonl(read_file(dir / "ledger.jsonl"));
    session->ledger = Ledger::from_chain(blocks);

    for (const auto& m : meta.at("miners")) {
        const auto addr = m.at("address").get<std::string>();
        session->restore_miner(m.at("alias").get<std::string>(),
                               read_json(dir / "miners" / (addr + ".json")).get<MinerRecord>());
    }
    for (const auto& name : meta.at("users")) {
        const json u = read_json(dir / "users" / (name.get<std::string>() + ".json"));
        KeyPair keys = KeyPair::from_seed(from_hex(u.at("seed").get<std::string>()));
        if (keys.address().hex != u.at("address").get<std::string>())
            throw Error(ErrorCode::WorkspaceError, "user " + name.get<std::string>() + " address does not match seed");
        session->restore_user(name.get<std::string>(), std::move(keys));
    }
    if (fs::exists(dir / "dag.json"))
        for (const auto& m : read_json(dir / "dag.json")) session->network.publish_manifest(m.get<DagManifest>());

    return Workspace(dir, std::move(session));
}

void Workspace::save() const {
    const Session& s = *session_;
    json miners = json::array();
    for (const auto& [alias, addr] : s.miner_aliases()) {
        miners.push_back({{"alias", alias}, {"address", addr}});
        write_file(dir_ / "miners" / (addr.hex + ".json"), json(s.network.miner(addr)).dump(2));
    }
    json users = json::array();
    for (const auto& [name, keys] : s.users()) {
        users.push_back(name);
        write_file(dir_ / "users" / (name + ".json"),
                   json{{"name", name}, {"address", keys.address()}, {"seed", to_hex(keys.seed())}}.dump(2));
    }
    write_file(dir_ / "dag.json", json(s.network.manifests()).dump());
    write_file(dir_ / "ledger.jsonl", blocks_to_jsonl(s.ledger.blocks()));
    const json meta{{"format_version", kWorkspaceFormatVersion},
                    {"seed", s.rng.seed()},
                    {"rng_position", s.rng.position()},
                    {"chunk_size", s.chunk_size},
                    {"miners", miners},
                    {"users", users}};
    write_file(dir_ / "workspace.json", meta.dump(2));
}

}  // namespace dosn
