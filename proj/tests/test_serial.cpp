// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"

using namespace chainsim;
using test_helpers::random_bytes;

TEST_CASE("integers encode big-endian fixed width")
{
    CHECK(to_hex(enc_u64(0x0102030405060708ull)) == "0102030405060708");
    CHECK(to_hex(Encoder{}.u32(0xdeadbeef).take()) == "deadbeef");
    CHECK(to_hex(enc_u64(0)) == "0000000000000000");
    CHECK(to_hex(enc_u64(1)) == "0000000000000001");
}

TEST_CASE("encoder/decoder round-trips")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t a = rng();
        std::uint32_t b = static_cast<std::uint32_t>(rng());
        Bytes blob = random_bytes(rng, rng() % 64);
        std::string s = to_hex(random_bytes(rng, rng() % 16));
        bool flag = rng() % 2 == 0;

        Encoder enc;
        enc.u64(a).u32(b).var_bytes(blob).str(s).boolean(flag);
        Bytes wire = enc.take();

        Decoder dec(wire);
        CHECK(dec.u64() == a);
        CHECK(dec.u32() == b);
        CHECK(dec.var_bytes() == blob);
        CHECK(dec.str() == s);
        CHECK(dec.boolean() == flag);
        CHECK(dec.done());
    }
}

TEST_CASE("vector encodings round-trip")
{
    std::vector<Address> addrs;
    for (int i = 0; i < 5; ++i)
        addrs.push_back(address_of(keypair_from_seed(bytes_of("a" + std::to_string(i)))));
    Bytes wire = Encoder{}.address_vec(addrs).take();
    Decoder dec(wire);
    CHECK(dec.address_vec() == addrs);

    std::vector<Bytes> items = {bytes_of("x"), {}, bytes_of("longer value")};
    Bytes wire2 = Encoder{}.bytes_vec(items).take();
    Decoder dec2(wire2);
    CHECK(dec2.bytes_vec() == items);
}

TEST_CASE("truncated input is rejected")
{
    Bytes wire = Encoder{}.u64(42).take();
    wire.pop_back();
    Decoder dec(wire);
    CHECK_THROWS_AS(dec.u64(), ChainError);

    Bytes prefix_lies = Encoder{}.u32(100).take(); // claims 100 bytes follow
    Decoder dec2(prefix_lies);
    CHECK_THROWS_AS(dec2.var_bytes(), ChainError);
}

TEST_CASE("transaction canonical form is stable and signature-covered")
{
    KeyPair alice = keypair_from_seed(bytes_of("alice"));
    Transaction tx;
    tx.sender = address_of(alice);
    tx.nonce = 3;
    tx.gas_limit = 30000;
    tx.payload = TransferPayload{address_of(keypair_from_seed(bytes_of("bob"))), 250};

    Bytes u1 = serialize_unsigned(tx);
    Bytes u2 = serialize_unsigned(tx);
    CHECK(u1 == u2);

    Transaction signed_tx = sign_tx(tx, alice);
    CHECK(verify_tx(signed_tx));
    CHECK(tx_id(signed_tx) == tx_id(signed_tx));

    SECTION("any payload mutation after signing breaks verification")
    {
        Transaction mutated = signed_tx;
        std::get<TransferPayload>(mutated.payload).amount = 251;
        CHECK_FALSE(verify_tx(mutated));
    }

    SECTION("signing with the wrong key is refused")
    {
        KeyPair bob = keypair_from_seed(bytes_of("bob"));
        CHECK_THROWS_MATCHES(sign_tx(tx, bob), ChainError,
                             Catch::Matchers::Predicate<ChainError>([](const ChainError& e) {
                                 return e.code() == Err::SenderKeyMismatch;
                             }));
    }
}

TEST_CASE("guard encoding round-trips")
{
    std::set<Address> addrs{address_of(keypair_from_seed(bytes_of("g1"))),
                            address_of(keypair_from_seed(bytes_of("g2")))};
    for (const PermissionGuard& g :
         {PermissionGuard::anyone(), PermissionGuard::owner_only(),
          PermissionGuard::address_set(addrs), PermissionGuard::storage_set(bytes_of("owners")),
          PermissionGuard::custom("writer permission")}) {
        Encoder enc;
        encode_guard(enc, g);
        Bytes wire = enc.take();
        Decoder dec(wire);
        PermissionGuard back = decode_guard(dec);
        CHECK(back.kind == g.kind);
        CHECK(back.allowed == g.allowed);
        CHECK(back.storage_key == g.storage_key);
        CHECK(back.custom_rule == g.custom_rule);
    }
}

TEST_CASE("profile JSON schema is exact")
{
    nlohmann::json good = {{"name", "custom"},
                           {"block_interval_ticks", 5},
                           {"confirmation_depth", 3},
                           {"block_gas_limit", 1000000},
                           {"max_tx_bytes", 2048},
                           {"max_embed_bytes", 64}};
    ChainProfile p = profile_from_json(good);
    CHECK(p.name == "custom");
    CHECK(p.block_interval_ticks == 5);
    CHECK(p.max_embed_bytes == 64);

    SECTION("missing key rejected")
    {
        nlohmann::json bad = good;
        bad.erase("max_tx_bytes");
        CHECK_THROWS_AS(profile_from_json(bad), ChainError);
    }
    SECTION("extra key rejected")
    {
        nlohmann::json bad = good;
        bad["difficulty"] = 9;
        CHECK_THROWS_AS(profile_from_json(bad), ChainError);
    }
    SECTION("zero field rejected")
    {
        nlohmann::json bad = good;
        bad["confirmation_depth"] = 0;
        CHECK_THROWS_AS(profile_from_json(bad), ChainError);
    }
}
