// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <chainsim/bytes.hpp>
#include <chainsim/crypto.hpp>
#include <chainsim/errors.hpp>
#include <chainsim/guard.hpp>
#include <chainsim/serial.hpp>

namespace chainsim {

struct ContractCode {
    std::string code_id;
    std::string version = "1";

    auto operator<=>(const ContractCode&) const = default;
};

struct TransferPayload {
    Address to;
    std::uint64_t amount = 0;
};

struct DeployPayload {
    ContractCode code;
    std::vector<Bytes> constructor_args;
    std::uint64_t value = 0;
    std::optional<Address> owner; // defaults to the deployer at execution
    PermissionGuard terminate_guard = PermissionGuard::owner_only();
};

struct CallPayload {
    Address contract;
    std::string function;
    std::vector<Bytes> args;
    std::uint64_t value = 0;
};

/// Raw data carried inside a transaction, OP_RETURN style. Bounded by the
/// profile's max_embed_bytes.
struct EmbedPayload {
    Bytes data;
};

using Payload = std::variant<TransferPayload, DeployPayload, CallPayload, EmbedPayload>;

/// Signed, gas-metered message. The signature is a pubkey+signature bundle
/// over the canonical serialization of every other field.
struct Transaction {
    Address sender;
    std::uint64_t nonce = 0;
    std::uint64_t gas_limit = 0;
    Payload payload;
    Bytes signature; // empty until signed

    bool signed_() const { return !signature.empty(); }
};

inline Bytes serialize_payload(const Payload& payload)
{
    Encoder enc;
    std::visit(
        [&enc](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, TransferPayload>) {
                enc.u8(0).address(p.to).u64(p.amount);
            } else if constexpr (std::is_same_v<T, DeployPayload>) {
                enc.u8(1).str(p.code.code_id).str(p.code.version);
                enc.bytes_vec(p.constructor_args);
                enc.u64(p.value);
                enc.boolean(p.owner.has_value());
                if (p.owner)
                    enc.address(*p.owner);
                encode_guard(enc, p.terminate_guard);
            } else if constexpr (std::is_same_v<T, CallPayload>) {
                enc.u8(2).address(p.contract).str(p.function);
                enc.bytes_vec(p.args);
                enc.u64(p.value);
            } else if constexpr (std::is_same_v<T, EmbedPayload>) {
                // Raw data only: the embed size on-chain is exactly the
                // data size, nothing else.
                enc.u8(3).raw(p.data);
            }
        },
        payload);
    return enc.take();
}

/// Canonical bytes covered by the signature.
inline Bytes serialize_unsigned(const Transaction& tx)
{
    Encoder enc;
    enc.address(tx.sender).u64(tx.nonce).u64(tx.gas_limit);
    enc.var_bytes(serialize_payload(tx.payload));
    return enc.take();
}

inline Bytes serialize_tx(const Transaction& tx)
{
    Encoder enc;
    enc.raw(serialize_unsigned(tx));
    enc.var_bytes(tx.signature);
    return enc.take();
}

inline Hash256 tx_id(const Transaction& tx)
{
    return hash_data(serialize_tx(tx));
}

/// Value attached to the payload, if any.
inline std::uint64_t payload_value(const Payload& payload)
{
    if (const auto* t = std::get_if<TransferPayload>(&payload))
        return t->amount;
    if (const auto* d = std::get_if<DeployPayload>(&payload))
        return d->value;
    if (const auto* c = std::get_if<CallPayload>(&payload))
        return c->value;
    return 0;
}

inline Transaction sign_tx(Transaction tx, const KeyPair& key)
{
    if (address_of(key) != tx.sender)
        throw ChainError(Err::SenderKeyMismatch);
    tx.signature = sign_bundle(serialize_unsigned(tx), key);
    return tx;
}

inline bool verify_tx(const Transaction& tx)
{
    if (!tx.signed_())
        return false;
    return verify_bundle(serialize_unsigned(tx), tx.signature, tx.sender);
}

struct Block {
    std::uint64_t height = 0;
    Hash256 parent_hash;
    std::vector<Transaction> transactions;
    std::uint64_t gas_used = 0;
    std::uint64_t timestamp = 0; // simulated ticks
};

inline Bytes serialize_block(const Block& b)
{
    Encoder enc;
    enc.u64(b.height).hash(b.parent_hash).u64(b.timestamp).u64(b.gas_used);
    enc.vec(b.transactions,
            [](Encoder& e, const Transaction& tx) { e.var_bytes(serialize_tx(tx)); });
    return enc.take();
}

inline Hash256 block_hash(const Block& b)
{
    return hash_data(serialize_block(b));
}

} // namespace chainsim
