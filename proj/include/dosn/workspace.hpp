#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "dosn/session.hpp"

namespace dosn {

inline constexpr int kWorkspaceFormatVersion = 1;

// Resolves the workspace directory: explicit path, then $DOSN_WORKSPACE,
// then ./.dosn.
std::filesystem::path workspace_path(const std::string& explicit_path = {});

// Exclusive advisory lock on <dir>/.lock, held for the object's lifetime.
class WorkspaceLock {
public:
    explicit WorkspaceLock(const std::filesystem::path& dir);
    ~WorkspaceLock();
    WorkspaceLock(const WorkspaceLock&) = delete;
    WorkspaceLock& operator=(const WorkspaceLock&) = delete;

private:
    int fd_ = -1;
};

// On-disk form of a Session:
//   workspace.json       format version, seed, generator position, chunk size, miner aliases
//   ledger.jsonl         committed blocks, replayed and verified on load
//   miners/<addr>.json   one file per miner
//   users/<name>.json    signing seed and address
//   dag.json             DAG directory (manifests by root)
class Workspace {
public:
    static Workspace create(const std::filesystem::path& dir, std::size_t miners, std::uint64_t seed,
                            std::size_t chunk_size = kDefaultChunkSize);
    static Workspace open(const std::filesystem::path& dir);

    void save() const;

    Session& session() noexcept { return *session_; }
    const Session& session() const noexcept { return *session_; }
    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    Workspace(std::filesystem::path dir, std::unique_ptr<Session> session);

    std::filesystem::path dir_;
    std::unique_ptr<Session> session_;
};

}  // namespace dosn
