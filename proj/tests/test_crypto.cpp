// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "helpers.hpp"

using namespace chainsim;
using test_helpers::random_bytes;

// Digest values frozen from the published FIPS 180-2 SHA-256 test vectors;
// they are the independent oracle for the hash implementation.
TEST_CASE("sha256 matches published test vectors")
{
    CHECK(to_hex(hash_data(bytes_of("abc"))) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(to_hex(hash_data(Bytes{})) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(to_hex(hash_data(bytes_of("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    Bytes million_a(1'000'000, 'a');
    CHECK(to_hex(hash_data(million_a)) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("sha256 is deterministic and bit-flip sensitive")
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        Bytes data = random_bytes(rng, 1 + static_cast<std::size_t>(rng() % 256));
        Hash256 d1 = hash_data(data);
        CHECK(hash_data(data) == d1);

        Bytes flipped = data;
        std::size_t byte = rng() % flipped.size();
        flipped[byte] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
        CHECK(hash_data(flipped) != d1);
    }
}

TEST_CASE("keypairs are deterministic per seed and distinct across seeds")
{
    KeyPair a1 = keypair_from_seed(bytes_of("alice"));
    KeyPair a2 = keypair_from_seed(bytes_of("alice"));
    CHECK(a1.public_key == a2.public_key);
    CHECK(address_of(a1) == address_of(a2));

    CHECK_THROWS_MATCHES(keypair_from_seed(Bytes{}), ChainError,
                         Catch::Matchers::Predicate<ChainError>(
                             [](const ChainError& e) { return e.code() == Err::EmptySeed; }));

    std::mt19937_64 rng(2);
    std::set<Address> seen;
    for (int i = 0; i < 1000; ++i)
        seen.insert(address_of(keypair_from_seed(random_bytes(rng, 16))));
    CHECK(seen.size() == 1000); // no collisions at test scale
}

TEST_CASE("signature bundles verify only for the signing key")
{
    KeyPair alice = keypair_from_seed(bytes_of("alice"));
    KeyPair bob = keypair_from_seed(bytes_of("bob"));
    Bytes message = bytes_of("pay 100 to bob");

    Bytes bundle = sign_bundle(message, alice);
    CHECK(verify_bundle(message, bundle));
    CHECK(verify_bundle(message, bundle, address_of(alice)));
    CHECK_FALSE(verify_bundle(message, bundle, address_of(bob)));

    Bytes tampered = message;
    tampered[0] ^= 1;
    CHECK_FALSE(verify_bundle(tampered, bundle));

    Bytes bob_bundle = sign_bundle(message, bob);
    CHECK_FALSE(verify_bundle(message, bob_bundle, address_of(alice)));
}

TEST_CASE("sealed payloads round-trip and authenticate")
{
    std::mt19937_64 rng(3);
    Bytes key = random_bytes(rng, kSecretKeySize);

    for (int i = 0; i < 100; ++i) {
        Bytes plain = random_bytes(rng, rng() % 512);
        Bytes nonce = random_bytes(rng, kSealNonceSize);
        SealedPayload sealed = encrypt_payload(plain, key, nonce);
        CHECK(decrypt_payload(sealed, key) == plain);
    }

    Bytes nonce = random_bytes(rng, kSealNonceSize);
    SealedPayload sealed = encrypt_payload(bytes_of("confidential discount: 40%"), key, nonce);

    SECTION("wrong key fails authentication")
    {
        Bytes wrong = key;
        wrong[7] ^= 0x20;
        CHECK_THROWS_MATCHES(decrypt_payload(sealed, wrong), ChainError,
                             Catch::Matchers::Predicate<ChainError>(
                                 [](const ChainError& e) { return e.code() == Err::AuthFailure; }));
    }

    SECTION("tampered ciphertext fails authentication")
    {
        sealed.ciphertext[0] ^= 1;
        CHECK_THROWS(decrypt_payload(sealed, key));
    }

    SECTION("bad key length is rejected up front")
    {
        CHECK_THROWS_MATCHES(encrypt_payload(bytes_of("m"), bytes_of("short"), nonce), ChainError,
                             Catch::Matchers::Predicate<ChainError>([](const ChainError& e) {
                                 return e.code() == Err::BadKeyLength;
                             }));
    }

    SECTION("sealed encoding round-trips")
    {
        Bytes encoded = encode_sealed(sealed);
        SealedPayload back = decode_sealed(encoded);
        CHECK(back.ciphertext == sealed.ciphertext);
        CHECK(back.nonce == sealed.nonce);
        CHECK(back.auth_tag == sealed.auth_tag);
    }
}

TEST_CASE("address derives from the trailing 20 bytes of the pubkey digest")
{
    KeyPair kp = keypair_from_seed(bytes_of("derivation"));
    Hash256 digest = hash_data(kp.public_key);
    Address addr = address_of(kp);
    CHECK(std::equal(addr.bytes.begin(), addr.bytes.end(), digest.bytes.end() - 20));
}
