#include "dosn/ledger.hpp"

#include <type_traits>

namespace dosn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

std::string_view payload_name(const Payload& p) {
    return std::visit(overloaded{
                          [](const AnchorRoot&) { return std::string_view("anchor_root"); },
                          [](const CreatePolicy&) { return std::string_view("create_policy"); },
                          [](const UpdatePolicy&) { return std::string_view("update_policy"); },
                          [](const RevokePolicy&) { return std::string_view("revoke_policy"); },
                          [](const CheckAccess&) { return std::string_view("check_access"); },
                          [](const DeleteAcc&) { return std::string_view("delete_acc"); },
                      },
                      p);
}

void encode(CanonicalWriter& w, const Payload& p) {
    w.u8(static_cast<std::uint8_t>(p.index()));
    std::visit(overloaded{
                   [&](const AnchorRoot& c) { w.str(c.content_id).bytes(c.root.digest); },
                   [&](const CreatePolicy& c) {
                       w.str(c.content_id);
                       encode(w, c.acl);
                       encode(w, c.allowed_roles);
                       encode(w, c.key_holders);
                       encode(w, c.leaf_cids);
                       encode(w, c.shard_locations);
                       w.u8(c.threshold);
                   },
                   [&](const UpdatePolicy& c) {
                       w.u64(c.policy_id).u8(c.acl ? 1 : 0);
                       if (c.acl) encode(w, *c.acl);
                       w.u8(c.allowed_roles ? 1 : 0);
                       if (c.allowed_roles) encode(w, *c.allowed_roles);
                   },
                   [&](const RevokePolicy& c) { w.u64(c.policy_id); },
                   [&](const CheckAccess& c) { w.u64(c.policy_id); },
                   [&](const DeleteAcc& c) { w.str(c.contract_owner.hex); },
               },
               p);
}

Bytes Transaction::signing_bytes() const {
    CanonicalWriter w;
    w.str("dosn/tx/v1").str(sender.hex).u64(nonce);
    encode(w, payload);
    return std::move(w).take();
}

Cid Transaction::digest() const {
    CanonicalWriter w;
    w.bytes(signing_bytes()).bytes(signature.bytes);
    return cid(w.data());
}

Transaction Transaction::make(const KeyPair& signer, std::uint64_t nonce, Payload payload) {
    Transaction tx{signer.address(), nonce, std::move(payload), {}};
    tx.signature = signer.sign(tx.signing_bytes());
    return tx;
}

Cid Block::compute_digest() const {
    CanonicalWriter w;
    w.str("dosn/block/v1").u64(height).bytes(parent.digest).u64(txs.size());
    for (const auto& tx : txs) w.bytes(tx.signing_bytes()).bytes(tx.signature.bytes);
    return cid(w.data());
}

Block Ledger::genesis() {
    Block g;
    g.digest = g.compute_digest();
    return g;
}

Ledger::Ledger(LedgerConfig config) : config_(config) { blocks_.push_back(genesis()); }

Ledger::Ledger(const Ledger& other) {
    std::shared_lock lock(other.mutex_);
    config_ = other.config_;
    blocks_ = other.blocks_;
    pending_ = other.pending_;
    last_nonce_ = other.last_nonce_;
    registry_ = other.registry_;
}

Ledger& Ledger::operator=(const Ledger& other) {
    if (this == &other) return *this;
    std::scoped_lock lock(mutex_, other.mutex_);
    config_ = other.config_;
    blocks_ = other.blocks_;
    pending_ = other.pending_;
    last_nonce_ = other.last_nonce_;
    registry_ = other.registry_;
    return *this;
}

TxResult Ledger::apply(const Transaction& tx) {
    const Address& s = tx.sender;
    return std::visit(overloaded{
                          [&](const AnchorRoot& c) -> TxResult {
                              registry_.anchor(s, c);
                              return std::monostate{};
                          },
                          [&](const CreatePolicy& c) -> TxResult { return registry_.create_policy(s, c); },
                          [&](const UpdatePolicy& c) -> TxResult {
                              registry_.update_policy(s, c);
                              return std::monostate{};
                          },
                          [&](const RevokePolicy& c) -> TxResult {
                              registry_.revoke_policy(s, c);
                              return std::monostate{};
                          },
                          [&](const CheckAccess& c) -> TxResult { return registry_.check_access(s, c.policy_id); },
                          [&](const DeleteAcc& c) -> TxResult {
                              registry_.delete_acc(s, c);
                              return std::monostate{};
                          },
                      },
                      tx.payload);
}

void Ledger::commit(std::vector<Transaction> txs) {
    Block b;
    b.height = blocks_.back().height + 1;
    b.parent = blocks_.back().digest;
    b.txs = std::move(txs);
    b.digest = b.compute_digest();
    blocks_.push_back(std::move(b));
}

Receipt Ledger::submit(const Transaction& tx) {
    std::unique_lock lock(mutex_);
    Receipt r;
    r.tx_digest = tx.digest();
    r.height = blocks_.back().height;

    auto reject = [&](ErrorCode code, std::string message) {
        r.status = TxStatus::Rejected;
        r.reason = code;
        r.message = std::move(message);
        return r;
    };

    if (!verify(tx.sender, tx.signing_bytes(), tx.signature))
        return reject(ErrorCode::BadSignature, "signature does not verify under " + tx.sender.hex);
    auto last = last_nonce_.find(tx.sender);
    if (last != last_nonce_.end() && tx.nonce <= last->second)
        return reject(ErrorCode::BadNonce, "nonce " + std::to_string(tx.nonce) + " not above " +
                                               std::to_string(last->second));

    try {
        r.result = apply(tx);
    } catch (const Error& e) {
        return reject(e.code(), e.what());
    }

    last_nonce_[tx.sender] = tx.nonce;
    r.status = TxStatus::Accepted;
    pending_.push_back(tx);
    if (!config_.batch_blocks) {
        commit(std::move(pending_));
        pending_.clear();
        r.height = blocks_.back().height;
    } else {
        r.height = blocks_.back().height + 1;
    }
    return r;
}

void Ledger::seal() {
    std::unique_lock lock(mutex_);
    if (pending_.empty()) return;
    commit(std::move(pending_));
    pending_.clear();
}

std::optional<Cid> Ledger::get_root(const std::string& content_id) const {
    std::shared_lock lock(mutex_);
    auto a = registry_.anchor_of(content_id);
    if (!a) return std::nullopt;
    return a->root;
}

Digest Ledger::state_digest() const {
    std::shared_lock lock(mutex_);
    CanonicalWriter w;
    w.str("dosn/state/v1").u64(last_nonce_.size());
    for (const auto& [addr, n] : last_nonce_) w.str(addr.hex).u64(n);
    registry_.encode(w);
    return sha256(w.data());
}

std::uint64_t Ledger::next_nonce(const Address& sender) const {
    std::shared_lock lock(mutex_);
    auto it = last_nonce_.find(sender);
    return it == last_nonce_.end() ? 1 : it->second + 1;
}

std::uint64_t Ledger::height() const {
    std::shared_lock lock(mutex_);
    return blocks_.back().height;
}

std::vector<Transaction> Ledger::log() const {
    std::shared_lock lock(mutex_);
    std::vector<Transaction> out;
    for (const auto& b : blocks_) out.insert(out.end(), b.txs.begin(), b.txs.end());
    out.insert(out.end(), pending_.begin(), pending_.end());
    return out;
}

Ledger Ledger::replay(std::span<const Block> blocks, LedgerConfig config) {
    Ledger ledger(LedgerConfig{true});
    for (std::size_t i = 1; i < blocks.size(); ++i) {
        for (const auto& tx : blocks[i].txs) {
            const Receipt r = ledger.submit(tx);
            if (!r.accepted())
                throw Error(ErrorCode::ChainInvalid, "block " + std::to_string(blocks[i].height) +
                                                         " carries a rejected transaction: " + r.message);
        }
        ledger.seal();
        if (ledger.blocks_.back().digest != blocks[i].digest)
            throw Error(ErrorCode::ChainInvalid, "block " + std::to_string(blocks[i].height) + " digest mismatch");
    }
    ledger.config_ = config;
    return ledger;
}

void Ledger::check_links(std::span<const Block> blocks) {
    if (blocks.empty()) throw Error(ErrorCode::ChainInvalid, "chain has no genesis block");
    if (blocks.front() != genesis()) throw Error(ErrorCode::ChainInvalid, "genesis block mismatch");
    for (std::size_t i = 1; i < blocks.size(); ++i) {
        const Block& b = blocks[i];
        if (b.height != blocks[i - 1].height + 1)
            throw Error(ErrorCode::ChainInvalid, "height gap at index " + std::to_string(i));
        if (b.parent != blocks[i - 1].digest)
            throw Error(ErrorCode::ChainInvalid, "broken parent link at height " + std::to_string(b.height));
        if (b.digest != b.compute_digest())
            throw Error(ErrorCode::ChainInvalid, "digest mismatch at height " + std::to_string(b.height));
        if (b.txs.empty()) throw Error(ErrorCode::ChainInvalid, "empty block at height " + std::to_string(b.height));
    }
}

Digest Ledger::verify_chain(std::span<const Block> blocks) { return from_chain(blocks).state_digest(); }

Ledger Ledger::from_chain(std::span<const Block> blocks, LedgerConfig config) {
    check_links(blocks);
    return replay(blocks, config);
}

Receipt submit_as(Ledger& ledger, const KeyPair& signer, Payload payload) {
    return ledger.submit(Transaction::make(signer, ledger.next_nonce(signer.address()), std::move(payload)));
}

}  // namespace dosn
