// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace chainsim;
using test_helpers::make_actor;

TEST_CASE("deploy creates fresh isolated instances")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 50'000'000);

    Address kv1 = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{1}});
    Address kv2 = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{1}});
    CHECK(kv1 != kv2); // nonce differs

    const ContractInstance* inst = chain.contract(kv1);
    REQUIRE(inst);
    CHECK(inst->code.code_id == "kv-store");
    CHECK(inst->owner == alice.addr);
    CHECK_FALSE(inst->terminated);

    SECTION("address derives from deployer and nonce")
    {
        Encoder enc;
        enc.address(alice.addr).u64(0); // first deploy used nonce 0
        Hash256 digest = hash_data(enc.take());
        Address expected;
        std::copy(digest.bytes.end() - 20, digest.bytes.end(), expected.bytes.begin());
        CHECK(kv1 == expected);
    }

    SECTION("unknown code id fails before submission")
    {
        CHECK_THROWS_MATCHES(deploy_contract(chain, alice.key, ContractCode{"no-such-thing"}),
                             ChainError,
                             Catch::Matchers::Predicate<ChainError>([](const ChainError& e) {
                                 return e.code() == Err::UnknownCodeId;
                             }));
    }
}

TEST_CASE("calls execute atomically with receipts")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 50'000'000);
    auto bob = make_actor(chain, "bob", 50'000'000);

    Address kv = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{0}});
    Hash256 key = hash_data(bytes_of("kname"));

    ExecutionReceipt ok = call_contract(chain, alice.key, kv, "put", {enc_hash(key), bytes_of("v1")});
    CHECK(ok.success);
    CHECK(query_state(chain, kv, "get", {enc_hash(key)}) == bytes_of("v1"));

    SECTION("rejected call leaves state untouched and still charges gas")
    {
        std::uint64_t before = chain.get_balance(bob.addr);
        ExecutionReceipt denied =
            call_contract(chain, bob.key, kv, "put", {enc_hash(key), bytes_of("evil")});
        CHECK(denied.failed_with(Err::NotAuthorized));
        CHECK(query_state(chain, kv, "get", {enc_hash(key)}) == bytes_of("v1"));
        CHECK(chain.get_balance(bob.addr) == before - denied.gas_used);
        CHECK(test_helpers::conserved(chain));
    }

    SECTION("call to a missing contract fails in-band")
    {
        Address ghost = address_of(keypair_from_seed(bytes_of("ghost")));
        ExecutionReceipt r = call_contract(chain, alice.key, ghost, "put", {});
        CHECK(r.failed_with(Err::NoSuchContract));
    }

    SECTION("nested call failure rolls back the whole transaction")
    {
        // Wallet calls the kv-store it is not allowed to write; the failed
        // inner call must abort the outer approve/execute as a unit.
        Address wallet = multisig_deploy(chain, alice.key, {alice.addr}, 1, 1000);
        auto before_balance = chain.get_balance(wallet);
        auto out = multisig_propose(chain, alice.key, wallet,
                                    encode_call_action(kv, "put",
                                                       {enc_hash(key), bytes_of("w")}, 0));
        CHECK_FALSE(out.receipt.success);
        CHECK(query_state(chain, kv, "get", {enc_hash(key)}) == bytes_of("v1"));
        CHECK(chain.get_balance(wallet) == before_balance);
        // The proposal record itself was rolled back with everything else.
        CHECK_THROWS(query_state(chain, wallet, "proposal_status", {enc_u64(0)}));
    }

    SECTION("failed calls refund attached value")
    {
        std::uint64_t before = chain.get_balance(bob.addr);
        ExecutionReceipt denied =
            call_contract(chain, bob.key, kv, "put", {enc_hash(key), bytes_of("x")}, 777);
        CHECK_FALSE(denied.success);
        CHECK(chain.get_balance(bob.addr) == before - denied.gas_used);
        CHECK(chain.get_balance(kv) == 0);
    }
}

TEST_CASE("query_state is read-only and free")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 50'000'000);
    Address kv = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{0}});
    Hash256 key = hash_data(bytes_of("k"));
    call_contract(chain, alice.key, kv, "put", {enc_hash(key), bytes_of("value")});

    std::uint64_t balance = chain.get_balance(alice.addr);
    std::uint64_t height = chain.height();
    Hash256 digest = chain.state_digest();

    CHECK(query_state(chain, kv, "get", {enc_hash(key)}) == bytes_of("value"));
    CHECK_THROWS_MATCHES(query_state(chain, kv, "get", {enc_hash(hash_data(bytes_of("absent")))}),
                         ChainError, Catch::Matchers::Predicate<ChainError>([](const ChainError& e) {
                             return e.code() == Err::NoSuchKey;
                         }));
    CHECK_THROWS_MATCHES(
        query_state(chain, address_of(keypair_from_seed(bytes_of("ghost"))), "get", {}),
        ChainError, Catch::Matchers::Predicate<ChainError>(
                        [](const ChainError& e) { return e.code() == Err::NoSuchContract; }));

    CHECK(chain.get_balance(alice.addr) == balance);
    CHECK(chain.height() == height);
    CHECK(chain.state_digest() == digest);
}

TEST_CASE("termination honors the embedded permission guard")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 50'000'000);
    auto mallory = make_actor(chain, "mallory", 50'000'000);

    SECTION("owner terminates and sweeps the balance")
    {
        DeployOptions opts;
        opts.value = 4000;
        Address kv = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{0}}, opts);
        std::uint64_t before = chain.get_balance(alice.addr);
        ExecutionReceipt r = terminate_contract(chain, alice.key, kv);
        CHECK(r.success);
        CHECK(chain.contract(kv)->terminated);
        CHECK(chain.get_balance(alice.addr) == before + 4000 - r.gas_used);

        // Calls are rejected from now on; storage stays readable.
        ExecutionReceipt after =
            call_contract(chain, alice.key, kv, "put", {enc_hash(hash_data(bytes_of("k"))), bytes_of("v")});
        CHECK(after.failed_with(Err::ContractTerminated));
        CHECK_NOTHROW(query_state(chain, kv, "code"));
    }

    SECTION("a stranger cannot terminate a guarded contract")
    {
        Address kv = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{0}});
        ExecutionReceipt r = terminate_contract(chain, mallory.key, kv);
        CHECK(r.failed_with(Err::NotAuthorized));
        CHECK_FALSE(chain.contract(kv)->terminated);
    }

    SECTION("an unguarded contract is killable by anyone")
    {
        DeployOptions opts;
        opts.terminate_guard = PermissionGuard::anyone();
        opts.value = 2500;
        Address kv = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{0}}, opts);
        std::uint64_t owner_before = chain.get_balance(alice.addr);
        ExecutionReceipt r = terminate_contract(chain, mallory.key, kv);
        CHECK(r.success);
        CHECK(chain.contract(kv)->terminated);
        // Balance sweeps to the owner; the damage is the dead contract.
        CHECK(chain.get_balance(alice.addr) == owner_before + 2500);
    }

    SECTION("double termination reports ContractTerminated")
    {
        Address kv = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{0}});
        CHECK(terminate_contract(chain, alice.key, kv).success);
        CHECK(terminate_contract(chain, alice.key, kv).failed_with(Err::ContractTerminated));
    }
}

TEST_CASE("guard completeness is enforced at behavior registration")
{
    BehaviorRegistry registry;
    Behavior naked;
    naked.code_id = "naked";
    naked.constructor = [](CallEnv&, const std::vector<Bytes>&) {};
    naked.functions.push_back({"poke", PermissionGuard{}, // undeclared guard
                               [](CallEnv&, const std::vector<Bytes>&) -> Bytes { return {}; }});
    CHECK_THROWS_AS(registry.add(std::move(naked)), std::logic_error);

    Behavior reserved;
    reserved.code_id = "reserved";
    reserved.constructor = [](CallEnv&, const std::vector<Bytes>&) {};
    reserved.functions.push_back({"terminate", PermissionGuard::anyone(),
                                  [](CallEnv&, const std::vector<Bytes>&) -> Bytes { return {}; }});
    CHECK_THROWS_AS(registry.add(std::move(reserved)), std::logic_error);

    // Every shipped behavior passes the same assertion.
    CHECK_NOTHROW(builtin::make_builtin_registry());
}

TEST_CASE("runaway recursion hits the depth limit")
{
    auto registry = builtin::make_builtin_registry();
    Behavior recursor;
    recursor.code_id = "recursor";
    recursor.constructor = [](CallEnv&, const std::vector<Bytes>&) {};
    recursor.functions.push_back({"spin", PermissionGuard::anyone(),
                                  [](CallEnv& env, const std::vector<Bytes>&) -> Bytes {
                                      return env.call(env.self(), "spin", {});
                                  }});
    registry->add(std::move(recursor));

    Chain chain(ethereum_like_profile(), std::make_shared<Runtime>(registry));
    auto alice = make_actor(chain, "alice", 200'000'000);
    Address r = deploy_contract(chain, alice.key, ContractCode{"recursor"});
    ExecutionReceipt receipt = call_contract(chain, alice.key, r, "spin");
    CHECK(receipt.failed_with(Err::DepthLimit));
}

TEST_CASE("out of gas charges the full limit and rolls back")
{
    Chain chain = make_chain("ethereum-like");
    auto alice = make_actor(chain, "alice", 50'000'000);
    Address kv = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{0}});

    std::uint64_t before = chain.get_balance(alice.addr);
    Hash256 key = hash_data(bytes_of("k"));
    // Enough for intrinsic cost but not for the storage write.
    ExecutionReceipt r =
        call_contract(chain, alice.key, kv, "put", {enc_hash(key), bytes_of("v")}, 0, 28'000);
    CHECK_FALSE(r.success);
    CHECK(r.error == Err::InsufficientGas);
    CHECK(r.gas_used == 28'000);
    CHECK(chain.get_balance(alice.addr) == before - 28'000);
    CHECK_THROWS(query_state(chain, kv, "get", {enc_hash(key)}));
}

TEST_CASE("execution replays identically on identical chains")
{
    auto run = [](std::uint64_t seed) {
        Chain chain = make_chain("ethereum-like");
        auto alice = make_actor(chain, "alice", 50'000'000);
        Address kv = deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{0}});
        Hash256 key = hash_data(enc_u64(seed));
        ExecutionReceipt r = call_contract(chain, alice.key, kv, "put",
                                           {enc_hash(key), enc_u64(seed)});
        Encoder enc;
        enc.hash(r.tx).boolean(r.success).u64(r.gas_used).var_bytes(r.return_value);
        for (const auto& ev : r.events)
            enc.address(ev.contract).str(ev.name).var_bytes(ev.payload);
        enc.hash(chain.state_digest());
        return enc.take();
    };
    CHECK(run(7) == run(7));
    CHECK(run(7) != run(8));
}

TEST_CASE("bitcoin-like profile restricts deployable behaviors")
{
    Chain chain = make_chain("bitcoin-like");
    auto alice = make_actor(chain, "alice", 50'000'000);

    CHECK_THROWS_MATCHES(deploy_contract(chain, alice.key, ContractCode{"kv-store"}, {Bytes{0}}),
                         ChainError, Catch::Matchers::Predicate<ChainError>([](const ChainError& e) {
                             return e.code() == Err::BehaviorNotAllowed;
                         }));

    Hash256 digest = hash_data(bytes_of("s"));
    CHECK_NOTHROW(hashlock_lock(chain, alice.key, digest, 10));
    CHECK_NOTHROW(multisig_deploy(chain, alice.key, {alice.addr}, 1));
}
