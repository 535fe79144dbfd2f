#include <gtest/gtest.h>

#include "dosn/protocol.hpp"
#include "dosn/session.hpp"

using namespace dosn;

namespace {

std::vector<Address> addresses(std::size_t n) {
    DeterministicRng rng(1);
    std::vector<Address> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(KeyPair::generate(rng).address());
    return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

struct Deployment {
    Session s{5, 64};
    const KeyPair& alice = s.add_user("alice");
    const KeyPair& bob = s.add_user("bob");
    const KeyPair& eve = s.add_user("eve");
    Deployment(std::size_t miners = 8) {
        for (std::size_t i = 0; i < miners; ++i) s.add_miner();
    }
    ContentRecord post(ByteView content, PublishParams p = {3, 5, 2, 64}) {
        return s.protocol().publish(alice, content, {{bob.address(), Role{"friend"}}}, {Role{"friend"}}, p);
    }
};

}  // namespace

TEST(Placement, DeterministicDisjointAndReplicated) {
    const auto miners = addresses(10);
    std::vector<Cid> leaves;
    for (int i = 0; i < 2; ++i) leaves.push_back(leaf_cid(Bytes{static_cast<std::uint8_t>(i)}));
    const auto plan = place(leaves, 4, 3, miners, 7);
    EXPECT_EQ(plan, place(leaves, 4, 3, miners, 7));
    EXPECT_NE(plan, place(leaves, 4, 3, miners, 8));
    ASSERT_EQ(plan.shares.size(), 4U);
    std::set<Address> used(plan.shares.begin(), plan.shares.end());
    for (const auto& [c, replicas] : plan.shards) {
        ASSERT_EQ(replicas.size(), 3U);
        ASSERT_EQ(std::set<Address>(replicas.begin(), replicas.end()).size(), 3U);
        for (const auto& a : replicas) EXPECT_TRUE(used.insert(a).second);
    }
}

TEST(Placement, Errors) {
    const auto miners = addresses(3);
    const std::vector<Cid> leaves{leaf_cid(Bytes{1})};
    EXPECT_EQ(code_of([&] { place(leaves, 4, 1, miners, 0); }), ErrorCode::NotEnoughMiners);
    EXPECT_EQ(code_of([&] { place(leaves, 2, 4, miners, 0); }), ErrorCode::NotEnoughMiners);
    EXPECT_EQ(code_of([&] { place(leaves, 2, 0, miners, 0); }), ErrorCode::InvalidArgument);
    const std::vector<Address> dup{miners[0], miners[0], miners[1]};
    EXPECT_EQ(code_of([&] { place(leaves, 2, 1, dup, 0); }), ErrorCode::DuplicateMiner);
}

TEST(Network, StoreRetrieveAndBehaviors) {
    StorageNetwork net;
    const auto miners = addresses(2);
    for (const auto& m : miners) net.add_miner(m);
    EXPECT_EQ(code_of([&] { net.add_miner(miners[0]); }), ErrorCode::DuplicateMiner);
    const std::vector<Bytes> chunks{to_bytes("hello"), to_bytes("world")};
    const DagManifest m = build_dag(chunks, 5);
    net.publish_manifest(m);
    net.store_shard(miners[0], m.leaf_cids[1], chunks[1]);
    net.store_shard(miners[0], m.leaf_cids[1], chunks[1]);
    EXPECT_EQ(net.miner(miners[0]).bytes_stored, 5U);

    auto r = net.retrieve_shard(miners[0], m.root, 1);
    EXPECT_EQ(r.data, chunks[1]);
    EXPECT_TRUE(verify(m.root, r.data, 1, r.proof));
    EXPECT_EQ(code_of([&] { net.retrieve_shard(miners[0], m.root, 0); }), ErrorCode::NotStored);
    EXPECT_EQ(code_of([&] { net.retrieve_shard(miners[0], m.root, 5); }), ErrorCode::IndexOutOfRange);

    net.set_behavior(miners[0], Behavior::Tamper);
    for (int i = 0; i < 10; ++i) {
        r = net.retrieve_shard(miners[0], m.root, 1);
        EXPECT_FALSE(verify(m.root, r.data, 1, r.proof));
    }
    net.set_behavior(miners[0], Behavior::Offline);
    EXPECT_EQ(code_of([&] { net.retrieve_shard(miners[0], m.root, 1); }), ErrorCode::Unavailable);
    EXPECT_EQ(net.request_count(), 14U);
    EXPECT_EQ(code_of([&] { net.retrieve_shard(addresses(3)[2], m.root, 1); }), ErrorCode::UnknownMiner);
}

TEST(Network, DeleteNeedsOwnerSignature) {
    StorageNetwork net;
    DeterministicRng rng(2);
    const KeyPair owner = KeyPair::generate(rng);
    const KeyPair other = KeyPair::generate(rng);
    const Address miner = KeyPair::generate(rng).address();
    net.add_miner(miner);
    const auto shares = split(Bytes(32, 1), 2, 2, rng, "c");
    net.store_key_share(miner, "c", shares[0], owner.address());
    EXPECT_EQ(code_of([&] { net.delete_key_share(miner, "c", DeleteAuthorization::make(other, "c", miner)); }),
              ErrorCode::BadAuthorization);
    auto forged = DeleteAuthorization::make(other, "c", miner);
    forged.owner = owner.address();
    EXPECT_EQ(code_of([&] { net.delete_key_share(miner, "c", forged); }), ErrorCode::BadAuthorization);
    net.delete_key_share(miner, "c", DeleteAuthorization::make(owner, "c", miner));
    EXPECT_FALSE(net.holds_key_share(miner, "c"));
    EXPECT_EQ(net.miner(miner).bytes_stored, 0U);
    EXPECT_EQ(code_of([&] { net.delete_key_share(miner, "c", DeleteAuthorization::make(owner, "c", miner)); }),
              ErrorCode::NotStored);
}

TEST(Baseline, ExactCost) {
    std::vector<Bytes> contents(3, Bytes(1000, 1));
    EXPECT_EQ(publish_baseline(4, contents).total_bytes(), 12000U);
    EXPECT_THROW(TrustedNodeBaseline(0), Error);
}

TEST(Protocol, PublishFetchRoundTrip) {
    Deployment d;
    for (std::size_t len : {1U, 63U, 64U, 500U}) {
        DeterministicRng rng(len);
        const Bytes content = rng.bytes(len);
        const ContentRecord rec = d.post(content);
        EXPECT_EQ(rec.content_id, rec.manifest.root.hex());
        EXPECT_EQ(d.s.ledger.get_root(rec.content_id), rec.manifest.root);
        const auto out = d.s.protocol().fetch(d.bob, rec.content_id);
        ASSERT_TRUE(out.ok()) << out.detail;
        EXPECT_EQ(*out.plaintext, content);
        EXPECT_TRUE(out.misbehaving.empty());
    }
}

TEST(Protocol, MinersNeverSeePlaintextOrKey) {
    Deployment d;
    const Bytes content = to_bytes(std::string(200, 'Q'));
    d.post(content);
    for (const auto& a : d.s.network.miners())
        for (const auto& [_, shard] : d.s.network.miner(a).shards)
            EXPECT_EQ(std::search(shard.begin(), shard.end(), content.begin(), content.begin() + 16), shard.end());
}

TEST(Protocol, DeniedFetchMakesNoStorageRequests) {
    Deployment d;
    const auto rec = d.post(to_bytes("secret"));
    d.s.network.reset_request_count();
    const auto out = d.s.protocol().fetch(d.eve, rec.content_id);
    EXPECT_EQ(out.failure, FetchFailure::AccessDenied);
    EXPECT_EQ(d.s.network.request_count(), 0U);
}

TEST(Protocol, DuplicateAndInvalidPublish) {
    Deployment d;
    const Bytes content = to_bytes("same");
    d.post(content);
    // A second encryption uses a fresh key and nonce, so it is a new content.
    EXPECT_NO_THROW(d.post(content));
    EXPECT_EQ(code_of([&] { d.post(content, {6, 5, 2, 64}); }), ErrorCode::InvalidThreshold);
    EXPECT_EQ(code_of([&] { d.post(content, {2, 9, 2, 64}); }), ErrorCode::NotEnoughMiners);
    EXPECT_EQ(code_of([&] { d.post(content, {2, 3, 0, 64}); }), ErrorCode::InvalidArgument);
}

TEST(Protocol, FailedPublishLeavesNoTrace) {
    Deployment d(3);
    EXPECT_THROW(d.post(to_bytes("x"), {2, 3, 4, 64}), Error);
    EXPECT_EQ(d.s.network.total_bytes(), 0U);
    EXPECT_EQ(d.s.ledger.height(), 0U);
}

TEST(Protocol, ToleratesOneBadReplicaAndBadShares) {
    // Enough miners that no miner holds more than one placement slot.
    Deployment d(30);
    DeterministicRng rng(3);
    const Bytes content = rng.bytes(300);
    const auto rec = d.post(content);
    std::set<Address> slots(rec.plan.shares.begin(), rec.plan.shares.end());
    for (const auto& [_, replicas] : rec.plan.shards)
        for (const auto& a : replicas) ASSERT_TRUE(slots.insert(a).second);
    // One tamperer per shard and one tampering key holder.
    for (const auto& [_, replicas] : rec.plan.shards) d.s.network.set_behavior(replicas[0], Behavior::Tamper);
    d.s.network.set_behavior(rec.plan.shares[0], Behavior::Tamper);
    const auto out = d.s.protocol().fetch(d.bob, rec.content_id);
    ASSERT_TRUE(out.ok()) << out.detail;
    EXPECT_EQ(*out.plaintext, content);
    EXPECT_FALSE(out.misbehaving.empty());
}

TEST(Protocol, AllReplicasTamperingIsIntegrityFailure) {
    Deployment d;
    const auto rec = d.post(to_bytes("payload"));
    for (const auto& a : rec.plan.shards.begin()->second) d.s.network.set_behavior(a, Behavior::Tamper);
    const auto out = d.s.protocol().fetch(d.bob, rec.content_id);
    EXPECT_EQ(out.failure, FetchFailure::IntegrityFailure);
    EXPECT_FALSE(out.plaintext);
}

TEST(Protocol, AllReplicasOfflineIsUnavailable) {
    Deployment d;
    const auto rec = d.post(to_bytes("payload"));
    for (const auto& a : rec.plan.shards.begin()->second) d.s.network.set_behavior(a, Behavior::Offline);
    EXPECT_EQ(d.s.protocol().fetch(d.bob, rec.content_id).failure, FetchFailure::Unavailable);
}

TEST(Protocol, TooFewShareHolders) {
    Deployment d;
    const auto rec = d.post(to_bytes("payload"));
    for (int i = 0; i < 3; ++i) d.s.network.set_behavior(rec.plan.shares[i], Behavior::Offline);
    EXPECT_EQ(d.s.protocol().fetch(d.bob, rec.content_id).failure, FetchFailure::InsufficientShares);
}

TEST(Protocol, RevokeUpdateForget) {
    Deployment d;
    const auto rec = d.post(to_bytes("payload"));
    Protocol proto = d.s.protocol();
    ASSERT_TRUE(proto.set_acl_entry(d.alice, rec.content_id, d.eve.address(), Role{"friend"}).accepted());
    EXPECT_TRUE(proto.fetch(d.eve, rec.content_id).ok());
    ASSERT_TRUE(proto.set_acl_entry(d.alice, rec.content_id, d.eve.address(), std::nullopt).accepted());
    EXPECT_EQ(proto.fetch(d.eve, rec.content_id).failure, FetchFailure::AccessDenied);
    EXPECT_FALSE(proto.set_acl_entry(d.bob, rec.content_id, d.bob.address(), Role{"x"}).accepted());

    // Capture a grant while access is live, then forget.
    const auto grant = d.s.ledger.registry().check_access(d.bob.address(), rec.policy_id);
    ASSERT_TRUE(granted(grant));
    EXPECT_EQ(code_of([&] { proto.forget(d.bob, rec.content_id); }), ErrorCode::NotOwner);
    proto.forget(d.alice, rec.content_id);
    EXPECT_EQ(proto.fetch(d.bob, rec.content_id).failure, FetchFailure::AccessDenied);
    EXPECT_EQ(proto.fetch_with_grant(std::get<AccessGrant>(grant)).failure, FetchFailure::InsufficientShares);
    for (const auto& a : rec.plan.shares) EXPECT_FALSE(d.s.network.holds_key_share(a, rec.content_id));
    EXPECT_EQ(code_of([&] { proto.forget(d.alice, rec.content_id); }), ErrorCode::UnknownContent);
}

TEST(Protocol, ForgedGrantRootIsRejected) {
    Deployment d;
    const auto rec = d.post(to_bytes("payload"));
    auto grant = std::get<AccessGrant>(d.s.ledger.registry().check_access(d.bob.address(), rec.policy_id));
    grant.root.digest[0] ^= 1;
    EXPECT_EQ(d.s.protocol().fetch_with_grant(grant).failure, FetchFailure::IntegrityFailure);
}

TEST(Protocol, StorageIndependentOfMinerCount) {
    auto total = [](std::size_t miners) {
        Deployment d(miners);
        DeterministicRng rng(4);
        for (int i = 0; i < 3; ++i) d.post(rng.bytes(1000));
        return d.s.network.total_bytes();
    };
    EXPECT_EQ(total(7), total(40));
}

TEST(Protocol, SeedDeterminesEverything) {
    auto run = [] {
        Deployment d;
        d.post(to_bytes("hello"));
        return d.s.digest();
    };
    EXPECT_EQ(run(), run());
}
