#pragma once

// JSON forms of the on-disk and report types. Octet strings are lowercase
// hex without prefix.

#include <json.hpp>

#include "dosn/contract.hpp"
#include "dosn/crypto.hpp"
#include "dosn/ledger.hpp"
#include "dosn/merkle.hpp"
#include "dosn/protocol.hpp"
#include "dosn/shamir.hpp"
#include "dosn/storage.hpp"

namespace dosn {

using json = nlohmann::json;

void to_json(json& j, const Address& a);
void from_json(const json& j, Address& a);
void to_json(json& j, const Cid& c);
void from_json(const json& j, Cid& c);
void to_json(json& j, const Signature& s);
void from_json(const json& j, Signature& s);
void to_json(json& j, const Role& r);
void from_json(const json& j, Role& r);

void to_json(json& j, const KeyShare& s);
void from_json(const json& j, KeyShare& s);

void to_json(json& j, const DagManifest& m);
void from_json(const json& j, DagManifest& m);
void to_json(json& j, const MerkleProof& p);
void from_json(const json& j, MerkleProof& p);

void to_json(json& j, const KeyHolder& k);
void from_json(const json& j, KeyHolder& k);
void to_json(json& j, const Policy& p);
void to_json(json& j, const AccessGrant& g);
void to_json(json& j, const AccessDecision& d);

void to_json(json& j, const Payload& p);
void from_json(const json& j, Payload& p);
void to_json(json& j, const Transaction& tx);
void from_json(const json& j, Transaction& tx);
void to_json(json& j, const Block& b);
void from_json(const json& j, Block& b);
void to_json(json& j, const Receipt& r);

void to_json(json& j, const MinerRecord& m);
void from_json(const json& j, MinerRecord& m);
void to_json(json& j, const StorageReport& r);
void to_json(json& j, const FetchOutcome& f);

// Ledger as JSON lines, one block per line, genesis first.
std::string blocks_to_jsonl(std::span<const Block> blocks);
std::vector<Block> blocks_from_jsonl(std::string_view text);

}  // namespace dosn
