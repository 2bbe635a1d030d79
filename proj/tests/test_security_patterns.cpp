// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "helpers.hpp"

using namespace chainsim;
using test_helpers::make_actor;
using test_helpers::random_bytes;

TEST_CASE("multisig proposals execute exactly at the threshold")
{
    Chain chain = make_chain("ethereum-like");
    auto a = make_actor(chain, "a", 100'000'000);
    auto b = make_actor(chain, "b", 100'000'000);
    auto c = make_actor(chain, "c", 100'000'000);
    auto payee = make_actor(chain, "payee");

    Address wallet = multisig_deploy(chain, a.key, {a.addr, b.addr, c.addr}, 2, 10'000);

    auto proposed = multisig_propose(chain, a.key, wallet, encode_transfer_action(payee.addr, 400));
    REQUIRE(proposed.receipt.success);
    CHECK_FALSE(proposed.status.executed);
    CHECK(proposed.status.approvals == 1);
    CHECK(chain.get_balance(payee.addr) == 0);

    SECTION("duplicate approvals by the proposer stay pending")
    {
        auto again = multisig_approve(chain, a.key, wallet, proposed.proposal_id);
        REQUIRE(again.receipt.success);
        CHECK_FALSE(again.status.executed);
        CHECK(again.status.approvals == 1);
    }

    SECTION("a second distinct owner triggers execution")
    {
        auto second = multisig_approve(chain, b.key, wallet, proposed.proposal_id);
        REQUIRE(second.receipt.success);
        CHECK(second.status.executed);
        CHECK(chain.get_balance(payee.addr) == 400);

        auto late = multisig_approve(chain, c.key, wallet, proposed.proposal_id);
        CHECK(late.receipt.failed_with(Err::AlreadyExecuted));
        CHECK(chain.get_balance(payee.addr) == 400); // executed exactly once
    }

    SECTION("strangers cannot propose or approve")
    {
        auto mallory = make_actor(chain, "mallory", 10'000'000);
        auto p = multisig_propose(chain, mallory.key, wallet, encode_transfer_action(payee.addr, 1));
        CHECK(p.receipt.failed_with(Err::NotAnOwner));
        auto ap = multisig_approve(chain, mallory.key, wallet, proposed.proposal_id);
        CHECK(ap.receipt.failed_with(Err::NotAnOwner));
    }

    SECTION("approving a missing proposal fails")
    {
        auto r = multisig_approve(chain, a.key, wallet, 999);
        CHECK(r.receipt.failed_with(Err::NoSuchProposal));
    }
}

TEST_CASE("multisig threshold law over exhaustive approval subsets")
{
    // For every N <= 4, M <= N and nonempty approver subset S, the action
    // runs iff |S| >= M. The proposer is always the first member of S.
    for (unsigned n = 1; n <= 4; ++n) {
        for (unsigned m = 1; m <= n; ++m) {
            for (unsigned mask = 1; mask < (1u << n); ++mask) {
                Chain chain = make_chain("ethereum-like");
                std::vector<test_helpers::Actor> owners;
                std::vector<Address> owner_addrs;
                for (unsigned i = 0; i < n; ++i) {
                    owners.push_back(
                        make_actor(chain, "owner" + std::to_string(i), 100'000'000));
                    owner_addrs.push_back(owners.back().addr);
                }
                auto payee = make_actor(chain, "payee");
                Address wallet = multisig_deploy(chain, owners[0].key, owner_addrs, m, 1'000);

                std::vector<unsigned> subset;
                for (unsigned i = 0; i < n; ++i)
                    if (mask & (1u << i))
                        subset.push_back(i);

                auto proposed = multisig_propose(chain, owners[subset[0]].key, wallet,
                                                 encode_transfer_action(payee.addr, 100));
                REQUIRE(proposed.receipt.success);
                for (std::size_t i = 1; i < subset.size(); ++i) {
                    auto r = multisig_approve(chain, owners[subset[i]].key, wallet,
                                              proposed.proposal_id);
                    if (!r.receipt.success)
                        CHECK(r.receipt.failed_with(Err::AlreadyExecuted));
                }

                bool expected = subset.size() >= m;
                bool executed = chain.get_balance(payee.addr) == 100;
                INFO("n=" << n << " m=" << m << " |S|=" << subset.size());
                CHECK(executed == expected);
            }
        }
    }
}

TEST_CASE("owner rotation changes who can authorize")
{
    Chain chain = make_chain("ethereum-like");
    auto a = make_actor(chain, "a", 100'000'000);
    auto b = make_actor(chain, "b", 100'000'000);
    auto c = make_actor(chain, "c", 100'000'000); // replaces a lost key
    auto d = make_actor(chain, "d", 100'000'000);
    auto payee = make_actor(chain, "payee");

    Address wallet = multisig_deploy(chain, a.key, {a.addr, b.addr}, 2, 10'000);

    // Rotate to {b, c, d} with threshold 3 (b approves, a proposed).
    auto rotate = multisig_propose(chain, a.key, wallet,
                                   encode_update_owners_action({b.addr, c.addr, d.addr}, 3));
    REQUIRE(rotate.receipt.success);
    auto done = multisig_approve(chain, b.key, wallet, rotate.proposal_id);
    REQUIRE(done.status.executed);

    // The old owner is out.
    auto p = multisig_propose(chain, a.key, wallet, encode_transfer_action(payee.addr, 10));
    CHECK(p.receipt.failed_with(Err::NotAnOwner));

    // Exactly the new threshold of new owners executes.
    auto p2 = multisig_propose(chain, b.key, wallet, encode_transfer_action(payee.addr, 10));
    REQUIRE(p2.receipt.success);
    auto ap1 = multisig_approve(chain, c.key, wallet, p2.proposal_id);
    CHECK_FALSE(ap1.status.executed); // 2 of 3
    auto ap2 = multisig_approve(chain, d.key, wallet, p2.proposal_id);
    CHECK(ap2.status.executed);
    CHECK(chain.get_balance(payee.addr) == 10);
}

TEST_CASE("multisig threshold law under randomized approval orders")
{
    std::mt19937_64 rng(41);
    for (int round = 0; round < 25; ++round) {
        unsigned n = 2 + rng() % 3;
        unsigned m = 1 + rng() % n;
        Chain chain = make_chain("ethereum-like");
        std::vector<test_helpers::Actor> owners;
        std::vector<Address> addrs;
        for (unsigned i = 0; i < n; ++i) {
            owners.push_back(make_actor(chain, "o" + std::to_string(i), 100'000'000));
            addrs.push_back(owners.back().addr);
        }
        auto payee = make_actor(chain, "p");
        Address wallet = multisig_deploy(chain, owners[0].key, addrs, m, 1'000);

        // Random approval sequence with repeats.
        std::vector<unsigned> order;
        for (unsigned i = 0; i < n * 2; ++i)
            order.push_back(rng() % n);
        auto proposed = multisig_propose(chain, owners[order[0]].key, wallet,
                                         encode_transfer_action(payee.addr, 5));
        REQUIRE(proposed.receipt.success);
        std::set<unsigned> distinct{order[0]};
        bool executed_at_threshold = distinct.size() >= m;
        for (std::size_t i = 1; i < order.size(); ++i) {
            auto r = multisig_approve(chain, owners[order[i]].key, wallet, proposed.proposal_id);
            if (r.receipt.success)
                distinct.insert(order[i]);
            bool paid = chain.get_balance(payee.addr) == 5;
            CHECK(paid == (distinct.size() >= m));
            executed_at_threshold = paid;
        }
        CHECK(executed_at_threshold == (distinct.size() >= m));
    }
}

TEST_CASE("hashlock claims require the exact preimage")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 100'000'000);
    auto dave = make_actor(chain, "dave", 10'000'000);

    Bytes secret = bytes_of("open sesame");
    Hash256 digest = hash_data(secret);
    Address lock = hashlock_lock(chain, alice.key, digest, 5'000);
    CHECK(chain.get_balance(lock) == 5'000);

    SECTION("wrong preimage leaves the escrow untouched")
    {
        auto r = hashlock_claim(chain, dave.key, lock, bytes_of("open says me"));
        CHECK(r.failed_with(Err::WrongPreimage));
        CHECK(chain.get_balance(lock) == 5'000);
        CHECK_FALSE(hashlock_revealed_preimage(chain, lock).has_value());
    }

    SECTION("correct preimage pays and publishes the secret")
    {
        std::uint64_t before = chain.get_balance(dave.addr);
        auto r = hashlock_claim(chain, dave.key, lock, secret);
        REQUIRE(r.success);
        CHECK(chain.get_balance(dave.addr) == before + 5'000 - r.gas_used);
        CHECK(chain.get_balance(lock) == 0);
        CHECK(hashlock_revealed_preimage(chain, lock) == secret);

        auto second = hashlock_claim(chain, dave.key, lock, secret);
        CHECK(second.failed_with(Err::AlreadyClaimed));
    }

    SECTION("exhaustive one-byte preimages match the brute-force digest rule")
    {
        Bytes target{0x5a};
        Hash256 d = hash_data(target);
        for (int v = 0; v < 256; ++v) {
            Bytes preimage{static_cast<std::uint8_t>(v)};
            Address one = hashlock_lock(chain, alice.key, d, 10);
            auto r = hashlock_claim(chain, dave.key, one, preimage);
            bool expected = hash_data(preimage) == d; // independent check
            CHECK(r.success == expected);
        }
    }
}

TEST_CASE("hashlock claimant pinning and timeout refund")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 100'000'000);
    auto bob = make_actor(chain, "bob", 10'000'000);
    auto carol = make_actor(chain, "carol", 10'000'000);

    Bytes secret = bytes_of("s3cr3t");
    Hash256 digest = hash_data(secret);

    SECTION("required claimant needs both secret and signature")
    {
        Address lock = hashlock_lock(chain, alice.key, digest, 100, bob.addr);
        auto wrong_person = hashlock_claim(chain, carol.key, lock, secret);
        CHECK(wrong_person.failed_with(Err::WrongClaimant));
        auto right = hashlock_claim(chain, bob.key, lock, secret);
        CHECK(right.success);
    }

    SECTION("timeout opens the refund path and closes claims")
    {
        Address lock = hashlock_lock(chain, alice.key, digest, 100, std::nullopt,
                                     chain.height() + 3);
        auto early_refund = hashlock_refund(chain, alice.key, lock);
        CHECK(early_refund.failed_with(Err::TooEarly));

        for (int i = 0; i < 4; ++i)
            chain.advance_block();

        auto late_claim = hashlock_claim(chain, bob.key, lock, secret);
        CHECK(late_claim.failed_with(Err::TimedOut));

        auto stranger_refund = hashlock_refund(chain, bob.key, lock);
        CHECK(stranger_refund.failed_with(Err::NotAuthorized));

        std::uint64_t before = chain.get_balance(alice.addr);
        auto refund = hashlock_refund(chain, alice.key, lock);
        REQUIRE(refund.success);
        CHECK(chain.get_balance(alice.addr) == before + 100 - refund.gas_used);
    }

    SECTION("without a timeout the refund path never opens")
    {
        Address lock = hashlock_lock(chain, alice.key, digest, 100);
        for (int i = 0; i < 5; ++i)
            chain.advance_block();
        auto refund = hashlock_refund(chain, alice.key, lock);
        CHECK(refund.failed_with(Err::RefundUnavailable)); // locked forever without the secret
    }
}

TEST_CASE("one revealed secret opens every lock sharing the digest")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 100'000'000);
    auto bob = make_actor(chain, "bob", 10'000'000);
    auto carol = make_actor(chain, "carol", 10'000'000);
    auto dave = make_actor(chain, "dave", 10'000'000);

    Bytes secret = bytes_of("multi-hop secret");
    Hash256 digest = hash_data(secret);
    Address l1 = hashlock_lock(chain, alice.key, digest, 100);
    Address l2 = hashlock_lock(chain, alice.key, digest, 200);
    Address l3 = hashlock_lock(chain, alice.key, digest, 300);

    REQUIRE(hashlock_claim(chain, bob.key, l1, secret).success);

    // The secret is now public chain data; different actors redeem the
    // remaining locks with it.
    Bytes revealed = *hashlock_revealed_preimage(chain, l1);
    CHECK(revealed == secret);
    CHECK(hashlock_claim(chain, carol.key, l2, revealed).success);
    CHECK(hashlock_claim(chain, dave.key, l3, revealed).success);
    CHECK(test_helpers::conserved(chain));
}

TEST_CASE("sealed payloads on-chain never expose the plaintext")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 100'000'000);
    std::mt19937_64 rng(17);

    Address kv = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{0}});
    for (int i = 0; i < 20; ++i) {
        Bytes key = random_bytes(rng, kSecretKeySize);
        Bytes plaintext = random_bytes(rng, 16 + rng() % 64);
        Bytes nonce = random_bytes(rng, kSealNonceSize);
        SealedPayload sealed = encrypt_payload(plaintext, key, nonce);
        Hash256 slot = hash_data(enc_u64(i));
        REQUIRE(kv_put(chain, alice.key, kv, slot, encode_sealed(sealed)).success);

        Bytes on_chain = kv_get(chain, kv, slot);
        CHECK_FALSE(contains_subsequence(on_chain, plaintext));
        CHECK(decrypt_payload(decode_sealed(on_chain), key) == plaintext);
    }
}
