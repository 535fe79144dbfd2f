#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dosn/contract.hpp"
#include "dosn/crypto.hpp"
#include "dosn/error.hpp"
#include "dosn/merkle.hpp"

namespace dosn {

using Payload = std::variant<AnchorRoot, CreatePolicy, UpdatePolicy, RevokePolicy, CheckAccess, DeleteAcc>;

std::string_view payload_name(const Payload& p);
void encode(CanonicalWriter& w, const Payload& p);

struct Transaction {
    Address sender;
    std::uint64_t nonce = 0;
    Payload payload;
    Signature signature;

    // sender || nonce || payload, the signed message.
    Bytes signing_bytes() const;
    Cid digest() const;

    static Transaction make(const KeyPair& signer, std::uint64_t nonce, Payload payload);

    bool operator==(const Transaction&) const = default;
};

struct Block {
    std::uint64_t height = 0;
    Cid parent;
    std::vector<Transaction> txs;
    Cid digest;

    Cid compute_digest() const;
    bool operator==(const Block&) const = default;
};

enum class TxStatus : std::uint8_t { Accepted, Rejected };

using TxResult = std::variant<std::monostate, PolicyId, AccessDecision>;

struct Receipt {
    Cid tx_digest;
    std::uint64_t height = 0;
    TxStatus status = TxStatus::Rejected;
    std::optional<ErrorCode> reason;
    std::string message;
    TxResult result;

    bool accepted() const noexcept { return status == TxStatus::Accepted; }
};

struct LedgerConfig {
    // When set, accepted transactions accumulate until seal(); otherwise every
    // accepted transaction is committed in its own block.
    bool batch_blocks = false;
};

// Single-writer, instantly final chain. State is a pure fold over the
// committed transactions; rejected transactions never reach a block.
class Ledger {
public:
    explicit Ledger(LedgerConfig config = {});

    Ledger(const Ledger& other);
    Ledger& operator=(const Ledger& other);

    Receipt submit(const Transaction& tx);
    // Commits the pending block, if any. No-op outside batch mode.
    void seal();

    std::optional<Cid> get_root(const std::string& content_id) const;
    Digest state_digest() const;
    // Smallest nonce that `sender` may use next.
    std::uint64_t next_nonce(const Address& sender) const;
    std::uint64_t height() const;

    // Committed blocks, genesis first. Not synchronised with submit().
    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    const AccessRegistry& registry() const noexcept { return registry_; }
    std::vector<Transaction> log() const;

    // Rebuilds a ledger by re-applying every block after genesis. Throws
    // ChainInvalid if any transaction is rejected or a block digest differs.
    static Ledger replay(std::span<const Block> blocks, LedgerConfig config = {});
    // Checks genesis, heights, parent links and digests, then replays.
    // Returns the resulting state digest or throws ChainInvalid.
    static Digest verify_chain(std::span<const Block> blocks);
    // verify_chain, keeping the rebuilt ledger.
    static Ledger from_chain(std::span<const Block> blocks, LedgerConfig config = {});

    static Block genesis();

private:
    static void check_links(std::span<const Block> blocks);
    TxResult apply(const Transaction& tx);
    void commit(std::vector<Transaction> txs);

    LedgerConfig config_;
    mutable std::shared_mutex mutex_;
    std::vector<Block> blocks_;
    std::vector<Transaction> pending_;
    std::map<Address, std::uint64_t> last_nonce_;
    AccessRegistry registry_;
};

// Signs `payload` with the next free nonce for `signer` and submits it.
Receipt submit_as(Ledger& ledger, const KeyPair& signer, Payload payload);

}  // namespace dosn
