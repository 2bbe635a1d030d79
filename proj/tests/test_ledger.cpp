// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"

using namespace chainsim;
using test_helpers::make_actor;

namespace {

Transaction transfer_tx(Chain& chain, const test_helpers::Actor& from, const Address& to,
                        std::uint64_t amount, std::uint64_t gas_limit = 50'000)
{
    Transaction tx;
    tx.sender = from.addr;
    tx.nonce = chain.next_nonce(from.addr);
    tx.gas_limit = gas_limit;
    tx.payload = TransferPayload{to, amount};
    return sign_tx(tx, from.key);
}

} // namespace

TEST_CASE("accounts are deterministic and start empty")
{
    Chain chain = make_chain("ethereum-like");
    auto [k1, a1] = chain.create_account(bytes_of("seed-1"));
    auto [k2, a2] = chain.create_account(bytes_of("seed-1"));
    CHECK(a1 == a2);
    CHECK(chain.get_balance(a1) == 0);
    CHECK(chain.account_nonce(a1) == 0);
    CHECK_THROWS_AS(chain.create_account(Bytes{}), ChainError);
}

TEST_CASE("submit validates signature, nonce, size and balance")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 10'000'000);
    auto bob = make_actor(chain, "bob");

    SECTION("valid transfer lands in the mempool")
    {
        auto tx = transfer_tx(chain, alice, bob.addr, 100);
        CHECK(chain.mempool_size() == 0);
        Hash256 id = chain.submit_tx(tx);
        CHECK(chain.mempool_size() == 1);
        CHECK(id == tx_id(tx));
    }

    SECTION("unsigned or forged transactions are rejected")
    {
        Transaction tx;
        tx.sender = alice.addr;
        tx.nonce = 0;
        tx.gas_limit = 50'000;
        tx.payload = TransferPayload{bob.addr, 100};
        CHECK_THROWS_MATCHES(chain.submit_tx(tx), ChainError,
                             Catch::Matchers::Predicate<ChainError>([](const ChainError& e) {
                                 return e.code() == Err::BadSignature;
                             }));

        Transaction forged = sign_tx(tx, alice.key);
        std::get<TransferPayload>(forged.payload).amount = 999;
        CHECK_THROWS_AS(chain.submit_tx(forged), ChainError);
    }

    SECTION("nonce gap is rejected")
    {
        Transaction tx;
        tx.sender = alice.addr;
        tx.nonce = 1; // current is 0
        tx.gas_limit = 50'000;
        tx.payload = TransferPayload{bob.addr, 100};
        CHECK_THROWS_MATCHES(chain.submit_tx(sign_tx(tx, alice.key)), ChainError,
                             Catch::Matchers::Predicate<ChainError>(
                                 [](const ChainError& e) { return e.code() == Err::BadNonce; }));
    }

    SECTION("consecutive nonces may queue in the mempool")
    {
        chain.submit_tx(transfer_tx(chain, alice, bob.addr, 1));
        chain.submit_tx(transfer_tx(chain, alice, bob.addr, 2)); // nonce 1 via pending count
        chain.advance_block();
        CHECK(chain.get_balance(bob.addr) == 3);
        CHECK(chain.account_nonce(alice.addr) == 2);
    }

    SECTION("oversize payload is rejected")
    {
        Transaction tx;
        tx.sender = alice.addr;
        tx.nonce = 0;
        tx.gas_limit = chain.profile().block_gas_limit;
        tx.payload = EmbedPayload{Bytes(chain.profile().max_tx_bytes + 1, 0xaa)};
        CHECK_THROWS_MATCHES(chain.submit_tx(sign_tx(tx, alice.key)), ChainError,
                             Catch::Matchers::Predicate<ChainError>([](const ChainError& e) {
                                 return e.code() == Err::OversizeTransaction;
                             }));
    }

    SECTION("attached value above balance is rejected")
    {
        auto tx = transfer_tx(chain, alice, bob.addr, 999'000'000);
        CHECK_THROWS_MATCHES(chain.submit_tx(tx), ChainError,
                             Catch::Matchers::Predicate<ChainError>([](const ChainError& e) {
                                 return e.code() == Err::InsufficientBalance;
                             }));
    }
}

TEST_CASE("blocks fill FIFO up to the gas limit")
{
    ChainProfile profile = ethereum_like_profile();
    profile.block_gas_limit = 100'000;
    Chain chain(profile, nullptr);
    auto alice = make_actor(chain, "alice", 10'000'000);
    auto bob = make_actor(chain, "bob");

    // Three transactions, each reserving half the block gas limit.
    for (int i = 0; i < 3; ++i)
        chain.submit_tx(transfer_tx(chain, alice, bob.addr, 10, 50'000));

    Block b1 = chain.advance_block();
    CHECK(b1.transactions.size() == 2);
    CHECK(chain.mempool_size() == 1);

    Block b2 = chain.advance_block();
    CHECK(b2.transactions.size() == 1);
    CHECK(chain.mempool_size() == 0);
}

TEST_CASE("empty blocks advance height and clock")
{
    Chain chain = make_chain("ethereum-like");
    std::uint64_t h0 = chain.height();
    std::uint64_t t0 = chain.now();
    Block b = chain.advance_block();
    CHECK(b.transactions.empty());
    CHECK(chain.height() == h0 + 1);
    CHECK(chain.now() == t0 + 14);
}

TEST_CASE("each block advances the clock by the profile interval")
{
    Chain eth = make_chain("ethereum-like");
    for (int i = 1; i <= 5; ++i) {
        eth.advance_block();
        CHECK(eth.now() == static_cast<std::uint64_t>(14 * i));
    }
    Chain btc = make_chain("bitcoin-like");
    btc.advance_block();
    CHECK(btc.now() == 600);
}

TEST_CASE("confirmation counting against both built-in profiles")
{
    SECTION("bitcoin-like commits at depth 5")
    {
        Chain chain = make_chain("bitcoin-like");
        auto alice = make_actor(chain, "alice", 10'000'000);
        auto bob = make_actor(chain, "bob");
        Hash256 id = chain.submit_tx(transfer_tx(chain, alice, bob.addr, 7));
        chain.advance_block(); // inclusion
        for (int i = 0; i < 3; ++i)
            chain.advance_block();
        auto c = chain.confirmations_of(id);
        REQUIRE(c);
        CHECK(c->count == 4);
        CHECK_FALSE(c->committed);
        chain.advance_block();
        c = chain.confirmations_of(id);
        CHECK(c->count == 5);
        CHECK(c->committed);
    }

    SECTION("ethereum-like needs 11 confirmations, 10 are not enough")
    {
        Chain chain = make_chain("ethereum-like");
        auto alice = make_actor(chain, "alice", 10'000'000);
        auto bob = make_actor(chain, "bob");
        Hash256 id = chain.submit_tx(transfer_tx(chain, alice, bob.addr, 7));
        chain.advance_block();
        for (int i = 0; i < 9; ++i)
            chain.advance_block();
        auto c = chain.confirmations_of(id);
        REQUIRE(c);
        CHECK(c->count == 10);
        CHECK_FALSE(c->committed);
        chain.advance_block();
        CHECK(chain.confirmations_of(id)->committed);
    }

    SECTION("unknown transaction id reports not-found")
    {
        Chain chain = make_chain("ethereum-like");
        CHECK_FALSE(chain.confirmations_of(hash_data(bytes_of("nothing"))).has_value());
    }
}

TEST_CASE("balances after mint and transfer")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice");
    auto bob = make_actor(chain, "bob");
    chain.mint(alice.addr, 100);
    CHECK(chain.get_balance(alice.addr) == 100);

    chain.mint(alice.addr, 1'000'000); // gas money
    chain.submit_tx(transfer_tx(chain, alice, bob.addr, 30));
    chain.advance_block();
    CHECK(chain.get_balance(bob.addr) == 30);
    CHECK(chain.get_balance(alice.addr) < 1'000'070); // 30 plus the fee left

    Address nobody = address_of(keypair_from_seed(bytes_of("nobody")));
    CHECK(chain.get_balance(nobody) == 0);
}

TEST_CASE("failed transactions are included, charge gas, and change nothing else")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 100'000);
    auto bob = make_actor(chain, "bob");

    // Passes submit (balance covers the amount) but fails at execution:
    // after reserving gas the amount cannot be covered.
    auto tx = transfer_tx(chain, alice, bob.addr, 90'000, 30'000);
    Hash256 id = chain.submit_tx(tx);
    Block b = chain.advance_block();
    CHECK(b.transactions.size() == 1);

    const ExecutionReceipt* r = chain.receipt_of(id);
    REQUIRE(r);
    CHECK_FALSE(r->success);
    CHECK(r->error == Err::InsufficientBalance);
    CHECK(r->gas_used > 0);
    CHECK(chain.get_balance(bob.addr) == 0);
    CHECK(chain.get_balance(alice.addr) == 100'000 - r->gas_used);
    CHECK(chain.account_nonce(alice.addr) == 1); // nonce consumed
    CHECK(test_helpers::conserved(chain));
}

TEST_CASE("ledger invariants hold over randomized traffic")
{
    Chain chain = make_chain("ethereum-like");
    std::vector<test_helpers::Actor> actors;
    for (int i = 0; i < 8; ++i)
        actors.push_back(make_actor(chain, "actor" + std::to_string(i), 5'000'000));

    std::mt19937_64 rng(99);
    std::vector<Bytes> snapshots; // serialized prefixes for append-only checks
    for (int round = 0; round < 400; ++round) {
        auto& from = actors[rng() % actors.size()];
        auto& to = actors[rng() % actors.size()];
        std::uint64_t amount = rng() % 2000;
        try {
            chain.submit_tx(transfer_tx(chain, from, to.addr, amount));
        } catch (const ChainError&) {
            // invalid submissions never reach the chain
        }
        if (rng() % 3 == 0)
            chain.advance_block();
    }
    chain.advance_block();

    CHECK(test_helpers::conserved(chain));
    CHECK(test_helpers::hash_chain_intact(chain));
    CHECK(test_helpers::gas_bound_holds(chain));

    // Nonce monotonicity: per sender, included nonces form 0,1,2,...
    std::map<Address, std::uint64_t> expected;
    for (const auto& block : chain.blocks())
        for (const auto& tx : block.transactions)
            CHECK(tx.nonce == expected[tx.sender]++);
}

TEST_CASE("append-only: earlier blocks never change")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 1'000'000);
    auto bob = make_actor(chain, "bob");

    chain.submit_tx(transfer_tx(chain, alice, bob.addr, 5));
    chain.advance_block();
    std::vector<Bytes> snapshot;
    for (const auto& b : chain.blocks())
        snapshot.push_back(serialize_block(b));

    chain.submit_tx(transfer_tx(chain, alice, bob.addr, 6));
    chain.advance_block();
    chain.advance_block();

    for (std::size_t i = 0; i < snapshot.size(); ++i)
        CHECK(serialize_block(chain.blocks()[i]) == snapshot[i]);
}

TEST_CASE("embed payloads respect the profile embed cap")
{
    Chain chain = make_chain("bitcoin-like");
    auto alice = make_actor(chain, "alice", 10'000'000);

    Transaction ok;
    ok.sender = alice.addr;
    ok.nonce = 0;
    ok.gas_limit = 50'000;
    ok.payload = EmbedPayload{Bytes(40, 0x01)};
    CHECK_NOTHROW(chain.submit_tx(sign_tx(ok, alice.key)));

    Transaction too_big;
    too_big.sender = alice.addr;
    too_big.nonce = 1;
    too_big.gas_limit = 50'000;
    too_big.payload = EmbedPayload{Bytes(41, 0x01)};
    CHECK_THROWS_MATCHES(chain.submit_tx(sign_tx(too_big, alice.key)), ChainError,
                         Catch::Matchers::Predicate<ChainError>([](const ChainError& e) {
                             return e.code() == Err::EmbedTooLarge;
                         }));
}

TEST_CASE("total supply only grows through the faucet")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice");
    CHECK(chain.total_minted() == 0);
    chain.mint(alice.addr, 500);
    CHECK(chain.total_minted() == 500);
    CHECK(chain.mint_count() == 1);
    CHECK(test_helpers::conserved(chain));
}
