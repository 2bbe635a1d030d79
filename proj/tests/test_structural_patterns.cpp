// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"

using namespace chainsim;
using test_helpers::make_actor;

TEST_CASE("registry keeps every version and resolves the latest")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 100'000'000);
    auto mallory = make_actor(chain, "mallory", 100'000'000);

    Address registry = registry_deploy(chain, alice.key);
    Address v1 = deploy_contract(chain, alice.key, ContractCode{"kv-store", "1"}, {Bytes{1}});
    Address v2 = deploy_contract(chain, alice.key, ContractCode{"kv-store", "2"}, {Bytes{1}});

    auto reg = registry_register(chain, alice.key, registry, "escrow", v1);
    REQUIRE(reg.receipt.success);
    CHECK(reg.version == 1);
    CHECK(registry_lookup(chain, registry, "escrow") == v1);

    SECTION("taken names cannot be re-registered")
    {
        auto again = registry_register(chain, mallory.key, registry, "escrow", v2);
        CHECK(again.receipt.failed_with(Err::NameTaken));
    }

    SECTION("only the name owner or an admin may update")
    {
        auto denied = registry_update(chain, mallory.key, registry, "escrow", v2);
        CHECK(denied.receipt.failed_with(Err::NotAuthorized));

        auto updated = registry_update(chain, alice.key, registry, "escrow", v2);
        REQUIRE(updated.receipt.success);
        CHECK(updated.version == 2);

        // Latest moves; the pinned version still answers.
        CHECK(registry_lookup(chain, registry, "escrow") == v2);
        CHECK(registry_lookup(chain, registry, "escrow", 1) == v1);
        CHECK(registry_lookup(chain, registry, "escrow", 2) == v2);
        CHECK_THROWS_MATCHES(registry_lookup(chain, registry, "escrow", 3), ChainError,
                             Catch::Matchers::Predicate<ChainError>([](const ChainError& e) {
                                 return e.code() == Err::NoSuchVersion;
                             }));
    }

    SECTION("missing names raise NoSuchName")
    {
        CHECK_THROWS_MATCHES(registry_lookup(chain, registry, "ghost"), ChainError,
                             Catch::Matchers::Predicate<ChainError>([](const ChainError& e) {
                                 return e.code() == Err::NoSuchName;
                             }));
        auto up = registry_update(chain, alice.key, registry, "ghost", v2);
        CHECK(up.receipt.failed_with(Err::NoSuchName));
    }
}

TEST_CASE("registry history equals the full update log")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 200'000'000);
    Address registry = registry_deploy(chain, alice.key);

    std::mt19937_64 rng(5);
    std::map<std::string, std::vector<Address>> log;
    std::vector<std::string> names = {"alpha", "beta", "gamma"};

    for (const auto& name : names) {
        Address target = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{1}});
        registry_register(chain, alice.key, registry, name, target);
        log[name].push_back(target);
    }
    for (int i = 0; i < 30; ++i) {
        const std::string& name = names[rng() % names.size()];
        Address target = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{1}});
        auto out = registry_update(chain, alice.key, registry, name, target);
        REQUIRE(out.receipt.success);
        log[name].push_back(target);
    }

    for (const auto& [name, targets] : log) {
        CHECK(registry_version_count(chain, registry, name) == targets.size());
        for (std::size_t v = 0; v < targets.size(); ++v)
            CHECK(registry_lookup(chain, registry, name, v + 1) == targets[v]);
        CHECK(registry_lookup(chain, registry, name) == targets.back());
    }
}

TEST_CASE("registry admin list can sit behind a multisig wallet")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 200'000'000);
    auto bob = make_actor(chain, "bob", 200'000'000);
    auto carol = make_actor(chain, "carol", 200'000'000);

    Address wallet = multisig_deploy(chain, alice.key, {alice.addr, bob.addr}, 2, 10'000);
    Address registry = registry_deploy(chain, alice.key);

    // Hand registry administration to the wallet (current admin does it).
    auto handoff = call_contract(chain, alice.key, registry, "set_admins",
                                 {Encoder{}.address_vec({wallet}).take()});
    REQUIRE(handoff.success);

    // Alice alone is no longer an admin.
    auto denied = call_contract(chain, alice.key, registry, "set_admins",
                                {Encoder{}.address_vec({alice.addr}).take()});
    CHECK(denied.failed_with(Err::NotAuthorized));

    // Two-of-two through the wallet rotates the admin list to carol.
    Bytes action = encode_call_action(registry, "set_admins",
                                      {Encoder{}.address_vec({carol.addr}).take()}, 0);
    auto proposed = multisig_propose(chain, alice.key, wallet, action);
    REQUIRE(proposed.receipt.success);
    auto approved = multisig_approve(chain, bob.key, wallet, proposed.proposal_id);
    REQUIRE(approved.status.executed);

    auto carol_now = call_contract(chain, carol.key, registry, "set_admins",
                                   {Encoder{}.address_vec({carol.addr}).take()});
    CHECK(carol_now.success);
}

TEST_CASE("kv-store guards writers and survives logic upgrades")
{
    Chain chain = make_chain("ethereum-like");
    auto admin = make_actor(chain, "admin", 200'000'000);
    auto mallory = make_actor(chain, "mallory", 10'000'000);

    Address kv = kv_deploy(chain, admin.key, 2, {});
    Address registry = registry_deploy(chain, admin.key);

    Address logic_v1 = deploy_contract(chain, admin.key, ContractCode{"kv-client", "1"},
                                       {enc_address(kv)});
    REQUIRE(kv_grant(chain, admin.key, kv, logic_v1).success);
    registry_register(chain, admin.key, registry, "logic", logic_v1);

    Hash256 key = hash_data(bytes_of("user-record"));
    auto put = call_contract(chain, admin.key, logic_v1, "put_via",
                             {enc_hash(key), bytes_of("precious data")});
    REQUIRE(put.success);

    // Upgrade: new logic, same store, re-point the name. No data moves.
    Address logic_v2 = deploy_contract(chain, admin.key, ContractCode{"kv-client", "2"},
                                       {enc_address(kv)});
    REQUIRE(kv_grant(chain, admin.key, kv, logic_v2).success);
    registry_update(chain, admin.key, registry, "logic", logic_v2);

    Address resolved = registry_lookup(chain, registry, "logic");
    CHECK(resolved == logic_v2);
    CHECK(query_state(chain, resolved, "get_via", {enc_hash(key)}) == bytes_of("precious data"));
    CHECK(kv_get(chain, kv, key) == bytes_of("precious data"));

    SECTION("unauthorized writers are rejected")
    {
        auto denied = kv_put(chain, mallory.key, kv, key, bytes_of("overwrite"));
        CHECK(denied.failed_with(Err::NotAuthorized));
        CHECK(kv_get(chain, kv, key) == bytes_of("precious data"));
    }

    SECTION("absent keys raise NoSuchKey")
    {
        CHECK_THROWS_MATCHES(kv_get(chain, kv, hash_data(bytes_of("absent"))), ChainError,
                             Catch::Matchers::Predicate<ChainError>([](const ChainError& e) {
                                 return e.code() == Err::NoSuchKey;
                             }));
    }
}

TEST_CASE("factory instances are independent and report one code version")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 200'000'000);
    auto bob = make_actor(chain, "bob", 200'000'000);

    Address factory = factory_deploy(chain, alice.key, {"kv-store"}, "7");

    auto i1 = factory_instantiate(chain, alice.key, factory, "kv-store", {Bytes{1}});
    auto i2 = factory_instantiate(chain, bob.key, factory, "kv-store", {Bytes{1}});
    REQUIRE(i1.receipt.success);
    REQUIRE(i2.receipt.success);
    CHECK(i1.instance != i2.instance);
    CHECK(factory_instances(chain, factory) == std::vector<Address>{i1.instance, i2.instance});

    CHECK(chain.contract(i1.instance)->code.version == "7");
    CHECK(chain.contract(i2.instance)->code.version == "7");
    CHECK(chain.contract(i1.instance)->code == chain.contract(i2.instance)->code);

    SECTION("unknown templates are refused")
    {
        auto bad = factory_instantiate(chain, alice.key, factory, "token");
        CHECK(bad.receipt.failed_with(Err::UnknownTemplate));
    }

    SECTION("fuzzed interleavings leave instances equal to their own call replay")
    {
        std::mt19937_64 rng(23);
        constexpr int kInstances = 3;
        std::vector<Address> instances;
        for (int i = 0; i < kInstances; ++i)
            instances.push_back(
                factory_instantiate(chain, alice.key, factory, "kv-store", {Bytes{1}}).instance);

        // Replay oracle: per-instance expected storage contents.
        std::vector<std::map<Bytes, Bytes>> expected(kInstances);
        for (int round = 0; round < 60; ++round) {
            int pick = static_cast<int>(rng() % kInstances);
            Hash256 key = hash_data(enc_u64(rng() % 6));
            Bytes value = enc_u64(rng());
            REQUIRE(kv_put(chain, alice.key, instances[pick], key, value).success);
            expected[pick][builtin::kv_detail::entry_key(key)] = value;
        }
        for (int i = 0; i < kInstances; ++i) {
            const ContractInstance* inst = chain.contract(instances[i]);
            for (const auto& [k, v] : expected[i]) {
                auto it = inst->storage.find(k);
                REQUIRE(it != inst->storage.end());
                CHECK(it->second == v);
            }
        }
    }
}

TEST_CASE("incentive jobs pay once, on time, when funded")
{
    Chain chain = make_chain("ethereum-like");
    auto owner = make_actor(chain, "owner", 200'000'000);
    auto keeper = make_actor(chain, "keeper", 10'000'000);

    std::uint64_t due = chain.height() + 4;
    Address job = incentive_deploy(chain, owner.key, due, 100, "cleanup-expired",
                                   {bytes_of("r1"), bytes_of("r2")}, 1'000);
    CHECK(dec_u64(query_state(chain, job, "pending_cleanup")) == 2);

    auto early = incentive_invoke(chain, keeper.key, job);
    CHECK(early.failed_with(Err::TooEarly));

    while (chain.height() < due)
        chain.advance_block();

    std::uint64_t before = chain.get_balance(keeper.addr);
    std::uint64_t job_before = chain.get_balance(job);
    auto r = incentive_invoke(chain, keeper.key, job);
    REQUIRE(r.success);
    // Net effect on the keeper is exactly reward minus gas.
    CHECK(chain.get_balance(keeper.addr) == before + 100 - r.gas_used);
    CHECK(chain.get_balance(job) == job_before - 100);
    CHECK(dec_u64(query_state(chain, job, "pending_cleanup")) == 0);
    CHECK(dec_bool(query_state(chain, job, "done")));

    auto again = incentive_invoke(chain, keeper.key, job);
    CHECK(again.failed_with(Err::AlreadyDone));
    CHECK(chain.get_balance(job) == job_before - 100); // paid exactly once

    SECTION("an unfunded job cannot buy its execution")
    {
        Address broke = incentive_deploy(chain, owner.key, chain.height(), 500, "noop", {}, 10);
        auto refused = incentive_invoke(chain, keeper.key, broke);
        CHECK(refused.failed_with(Err::InsufficientReward));
        CHECK_FALSE(dec_bool(query_state(chain, broke, "done")));
    }
}

TEST_CASE("security deposits resolve exactly once, full amount")
{
    Chain chain = make_chain("ethereum-like");
    auto depositor = make_actor(chain, "depositor", 200'000'000);
    auto beneficiary = make_actor(chain, "beneficiary", 1'000'000);
    auto arbiter = make_actor(chain, "arbiter", 10'000'000);
    auto mallory = make_actor(chain, "mallory", 10'000'000);

    SECTION("honesty refunds the depositor")
    {
        Address escrow = stake_deposit(chain, depositor.key, beneficiary.addr, {arbiter.addr}, 100);
        CHECK(chain.get_balance(escrow) == 100);
        std::uint64_t before = chain.get_balance(depositor.addr);
        auto r = resolve_deposit(chain, arbiter.key, escrow, true);
        REQUIRE(r.success);
        CHECK(chain.get_balance(depositor.addr) == before + 100);
        CHECK(chain.get_balance(escrow) == 0);

        auto again = resolve_deposit(chain, arbiter.key, escrow, false);
        CHECK(again.failed_with(Err::AlreadyResolved));
    }

    SECTION("misbehavior compensates the beneficiary")
    {
        Address escrow = stake_deposit(chain, depositor.key, beneficiary.addr, {arbiter.addr}, 100);
        std::uint64_t dep_before = chain.get_balance(depositor.addr);
        auto r = resolve_deposit(chain, arbiter.key, escrow, false);
        REQUIRE(r.success);
        CHECK(chain.get_balance(beneficiary.addr) == 1'000'100);
        CHECK(chain.get_balance(depositor.addr) == dep_before); // nothing back
    }

    SECTION("only the arbiter may rule")
    {
        Address escrow = stake_deposit(chain, depositor.key, beneficiary.addr, {arbiter.addr}, 100);
        auto denied = resolve_deposit(chain, mallory.key, escrow, false);
        CHECK(denied.failed_with(Err::NotAuthorized));
    }

    SECTION("a deposit above the balance never deploys")
    {
        auto pauper = make_actor(chain, "pauper", 50);
        CHECK_THROWS_MATCHES(
            stake_deposit(chain, pauper.key, beneficiary.addr, {arbiter.addr}, 500), ChainError,
            Catch::Matchers::Predicate<ChainError>(
                [](const ChainError& e) { return e.code() == Err::InsufficientBalance; }));
    }

    SECTION("terminality over random interleavings of resolve attempts")
    {
        std::mt19937_64 rng(31);
        for (int round = 0; round < 10; ++round) {
            Address escrow =
                stake_deposit(chain, depositor.key, beneficiary.addr, {arbiter.addr}, 100);
            std::uint64_t dep_before = chain.get_balance(depositor.addr);
            std::uint64_t ben_before = chain.get_balance(beneficiary.addr);
            int succeeded = 0;
            bool honest_won = false;
            for (int attempt = 0; attempt < 4; ++attempt) {
                bool honest = rng() % 2 == 0;
                auto r = resolve_deposit(chain, arbiter.key, escrow, honest);
                if (r.success) {
                    ++succeeded;
                    honest_won = honest;
                }
            }
            CHECK(succeeded == 1);
            std::uint64_t dep_gain = chain.get_balance(depositor.addr) - dep_before;
            std::uint64_t ben_gain = chain.get_balance(beneficiary.addr) - ben_before;
            CHECK(dep_gain + ben_gain == 100); // full amount, one recipient
            CHECK((honest_won ? dep_gain : ben_gain) == 100);
        }
    }
}
