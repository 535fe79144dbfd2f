#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dosn/ledger.hpp"
#include "dosn/protocol.hpp"
#include "dosn/rng.hpp"
#include "dosn/serialization.hpp"
#include "dosn/storage.hpp"

namespace dosn {

// A complete simulated deployment: ledger, storage network, named users and
// aliased miners, all driven by one seeded generator.
class Session {
public:
    explicit Session(std::uint64_t seed, std::size_t chunk_size = kDefaultChunkSize,
                     std::uint64_t rng_position = 0);

    // Alias defaults to "m<k>" with k the 1-based registration index.
    Address add_miner(std::string alias = {});
    const KeyPair& add_user(const std::string& name);
    // Used by workspace loading; keys come from disk rather than the generator.
    void restore_user(const std::string& name, KeyPair keys);
    void restore_miner(const std::string& alias, MinerRecord record);

    const KeyPair& user(const std::string& name) const;
    // Accepts an alias or a full address.
    Address resolve_miner(const std::string& alias_or_address) const;
    std::string miner_alias(const Address& address) const;
    const std::vector<std::pair<std::string, Address>>& miner_aliases() const noexcept { return miners_; }
    const std::map<std::string, KeyPair>& users() const noexcept { return users_; }
    // Name for a known address, or the address hex.
    std::string display_name(const Address& a) const;

    Protocol protocol() { return Protocol(ledger, network, rng); }

    // Covers ledger state, every miner's holdings and behaviour, the DAG
    // directory and the generator position.
    Digest digest() const;

    std::size_t chunk_size;
    DeterministicRng rng;
    Ledger ledger;
    StorageNetwork network;

private:
    std::map<std::string, KeyPair> users_;
    std::vector<std::pair<std::string, Address>> miners_;
};

// Executes a scenario document (see README) and returns the JSON report.
// Unknown operations or malformed documents throw InvalidArgument.
json run_scenario(const json& scenario);

}  // namespace dosn
