// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <optional>
#include <string>

#include <sodium.h>

#include <chainsim/bytes.hpp>
#include <chainsim/errors.hpp>
#include <chainsim/serial.hpp>

namespace chainsim {

namespace detail {
    inline void ensure_sodium()
    {
        static const int rc = sodium_init();
        if (rc < 0)
            throw std::runtime_error("libsodium initialization failed");
    }
} // namespace detail

/// SHA-256 of an arbitrary byte sequence. Pure and deterministic.
inline Hash256 hash_data(const Bytes& data)
{
    detail::ensure_sodium();
    Hash256 out;
    crypto_hash_sha256(out.bytes.data(), data.data(), data.size());
    return out;
}

inline Hash256 hash_data(std::string_view s) { return hash_data(bytes_of(s)); }

/// Ed25519 signing keypair. Signatures are opaque byte strings to every
/// module above this one.
struct KeyPair {
    Bytes public_key;  // 32 bytes
    Bytes private_key; // 64 bytes (libsodium expanded form)
};

inline Address address_of_pubkey(const Bytes& public_key)
{
    Hash256 digest = hash_data(public_key);
    Address a;
    std::copy(digest.bytes.end() - 20, digest.bytes.end(), a.bytes.begin());
    return a;
}

inline Address address_of(const KeyPair& kp) { return address_of_pubkey(kp.public_key); }

/// Deterministic keypair from an arbitrary nonempty seed. The seed is
/// compressed through SHA-256 to the 32 bytes Ed25519 expects.
inline KeyPair keypair_from_seed(const Bytes& seed)
{
    if (seed.empty())
        throw ChainError(Err::EmptySeed);
    detail::ensure_sodium();
    Hash256 s = hash_data(seed);
    KeyPair kp;
    kp.public_key.resize(crypto_sign_PUBLICKEYBYTES);
    kp.private_key.resize(crypto_sign_SECRETKEYBYTES);
    crypto_sign_seed_keypair(kp.public_key.data(), kp.private_key.data(), s.bytes.data());
    return kp;
}

inline KeyPair keypair_from_seed(std::string_view seed)
{
    return keypair_from_seed(bytes_of(seed));
}

/// Detached signature bundle: pubkey (32) followed by signature (64).
/// Carrying the pubkey lets any holder of the bundle verify against an
/// address without a key registry.
inline constexpr std::size_t kSigBundleSize = 32 + 64;

inline Bytes sign_bundle(const Bytes& message, const KeyPair& kp)
{
    detail::ensure_sodium();
    Bytes out = kp.public_key;
    out.resize(kSigBundleSize);
    unsigned long long sig_len = 0;
    crypto_sign_detached(out.data() + 32, &sig_len, message.data(), message.size(),
                         kp.private_key.data());
    return out;
}

/// Verifies a signature bundle over `message` and, when `expected_signer`
/// is given, that the embedded pubkey maps to that address.
inline bool verify_bundle(const Bytes& message, const Bytes& bundle,
                          const std::optional<Address>& expected_signer = std::nullopt)
{
    detail::ensure_sodium();
    if (bundle.size() != kSigBundleSize)
        return false;
    Bytes pub(bundle.begin(), bundle.begin() + 32);
    if (expected_signer && address_of_pubkey(pub) != *expected_signer)
        return false;
    return crypto_sign_verify_detached(bundle.data() + 32, message.data(), message.size(),
                                       pub.data()) == 0;
}

/// Authenticated symmetric encryption container. This is the shape that
/// goes on-chain; the plaintext never does.
struct SealedPayload {
    Bytes ciphertext;
    Bytes nonce;    // 24 bytes
    Bytes auth_tag; // 16 bytes
};

inline constexpr std::size_t kSecretKeySize = crypto_secretbox_KEYBYTES; // 32
inline constexpr std::size_t kSealNonceSize = crypto_secretbox_NONCEBYTES;

inline SealedPayload encrypt_payload(const Bytes& plaintext, const Bytes& key, const Bytes& nonce)
{
    detail::ensure_sodium();
    if (key.size() != kSecretKeySize)
        throw ChainError(Err::BadKeyLength);
    if (nonce.size() != kSealNonceSize)
        throw ChainError(Err::BadArguments, "nonce must be 24 bytes");
    SealedPayload sealed;
    sealed.nonce = nonce;
    sealed.ciphertext.resize(plaintext.size());
    sealed.auth_tag.resize(crypto_secretbox_MACBYTES);
    crypto_secretbox_detached(sealed.ciphertext.data(), sealed.auth_tag.data(), plaintext.data(),
                              plaintext.size(), nonce.data(), key.data());
    return sealed;
}

inline Bytes decrypt_payload(const SealedPayload& sealed, const Bytes& key)
{
    detail::ensure_sodium();
    if (key.size() != kSecretKeySize)
        throw ChainError(Err::BadKeyLength);
    if (sealed.nonce.size() != kSealNonceSize || sealed.auth_tag.size() != crypto_secretbox_MACBYTES)
        throw ChainError(Err::AuthFailure, "malformed sealed payload");
    Bytes plain(sealed.ciphertext.size());
    if (crypto_secretbox_open_detached(plain.data(), sealed.ciphertext.data(),
                                       sealed.auth_tag.data(), sealed.ciphertext.size(),
                                       sealed.nonce.data(), key.data()) != 0)
        throw ChainError(Err::AuthFailure);
    return plain;
}

/// Canonical on-chain encoding of a sealed payload.
inline Bytes encode_sealed(const SealedPayload& s)
{
    Encoder enc;
    enc.var_bytes(s.nonce).var_bytes(s.auth_tag).var_bytes(s.ciphertext);
    return enc.take();
}

inline SealedPayload decode_sealed(const Bytes& b)
{
    Decoder dec(b);
    SealedPayload s;
    s.nonce = dec.var_bytes();
    s.auth_tag = dec.var_bytes();
    s.ciphertext = dec.var_bytes();
    return s;
}

} // namespace chainsim
