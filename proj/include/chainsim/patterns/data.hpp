// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <optional>

#include <chainsim/contracts/builtins.hpp>
#include <chainsim/patterns/structural.hpp>

namespace chainsim {

// Tokenisation, off-chain data anchoring, payment/state channels and the
// legal/smart contract pair.

// ---- tokenisation -----------------------------------------------------------

inline Address token_deploy(Chain& chain, const KeyPair& deployer,
                            const std::vector<Address>& minters = {})
{
    return deploy_contract(chain, deployer, ContractCode{"token"},
                           {Encoder{}.address_vec(minters).take()});
}

inline ExecutionReceipt token_mint(Chain& chain, const KeyPair& minter, const Address& token,
                                   const Address& to, std::uint64_t amount)
{
    return call_contract(chain, minter, token, "mint", {enc_address(to), enc_u64(amount)});
}

inline ExecutionReceipt token_burn(Chain& chain, const KeyPair& minter, const Address& token,
                                   const Address& from, std::uint64_t amount)
{
    return call_contract(chain, minter, token, "burn", {enc_address(from), enc_u64(amount)});
}

inline ExecutionReceipt token_transfer(Chain& chain, const KeyPair& holder, const Address& token,
                                       const Address& to, std::uint64_t amount)
{
    return call_contract(chain, holder, token, "transfer", {enc_address(to), enc_u64(amount)});
}

inline ExecutionReceipt token_approve(Chain& chain, const KeyPair& owner, const Address& token,
                                      const Address& spender, std::uint64_t amount)
{
    return call_contract(chain, owner, token, "approve", {enc_address(spender), enc_u64(amount)});
}

inline ExecutionReceipt token_transfer_from(Chain& chain, const KeyPair& spender,
                                            const Address& token, const Address& from,
                                            const Address& to, std::uint64_t amount)
{
    return call_contract(chain, spender, token, "transfer_from",
                         {enc_address(from), enc_address(to), enc_u64(amount)});
}

inline std::uint64_t token_balance(const Chain& chain, const Address& token,
                                   const Address& holder)
{
    return dec_u64(query_state(chain, token, "balance_of", {enc_address(holder)}));
}

inline std::uint64_t token_supply(const Chain& chain, const Address& token)
{
    return dec_u64(query_state(chain, token, "total_supply"));
}

// ---- off-chain data storage ---------------------------------------------------

enum class AnchorMode { TxEmbed, ContractStorage };

/// On-chain record for off-chain data: digest plus locator. The raw bytes
/// never touch the chain.
struct Anchor {
    Hash256 digest;
    std::string uri;
    std::uint64_t anchored_at = 0;
    Hash256 tx;
    AnchorMode mode = AnchorMode::TxEmbed;
};

/// Extracts the digest a transaction anchors, if it anchors one: embed
/// payloads carry digest-first bytes, kv puts key by digest, injections
/// carry 32-byte values.
inline std::optional<Hash256> anchored_digest_of(const Transaction& tx)
{
    if (const auto* embed = std::get_if<EmbedPayload>(&tx.payload)) {
        if (embed->data.size() >= 32) {
            Hash256 h;
            std::copy(embed->data.begin(), embed->data.begin() + 32, h.bytes.begin());
            return h;
        }
        return std::nullopt;
    }
    if (const auto* call = std::get_if<CallPayload>(&tx.payload)) {
        if (call->function == "put" && !call->args.empty() && call->args[0].size() == 32)
            return dec_hash(call->args[0]);
        if (call->function == "inject" && call->args.size() >= 2 && call->args[1].size() == 32)
            return dec_hash(call->args[1]);
    }
    return std::nullopt;
}

/// Anchors `raw_data` on-chain: the digest (and in embed mode the URI)
/// go into a transaction; the data itself stays wherever the URI points.
inline Anchor anchor_store(Chain& chain, const KeyPair& caller, const Bytes& raw_data,
                           const std::string& uri, AnchorMode mode,
                           std::optional<Address> store = std::nullopt)
{
    Anchor anchor;
    anchor.digest = hash_data(raw_data);
    anchor.uri = uri;
    anchor.mode = mode;

    if (mode == AnchorMode::TxEmbed) {
        Bytes data = enc_hash(anchor.digest);
        append(data, bytes_of(uri));
        if (data.size() > chain.profile().max_embed_bytes)
            throw ChainError(Err::EmbedTooLarge,
                             std::to_string(data.size()) + " > " +
                                 std::to_string(chain.profile().max_embed_bytes));
        ExecutionReceipt receipt = exec_now(chain, caller, Payload(EmbedPayload{std::move(data)}));
        anchor.tx = receipt.tx;
    } else {
        if (!store)
            throw ChainError(Err::BadArguments, "contract-storage mode needs a kv-store");
        ExecutionReceipt receipt = kv_put(chain, caller, *store, anchor.digest, bytes_of(uri));
        if (!receipt.success)
            throw ChainError(receipt.error.value_or(Err::NotAuthorized), receipt.error_detail);
        anchor.tx = receipt.tx;
    }
    auto conf = chain.confirmations_of(anchor.tx);
    anchor.anchored_at = conf ? conf->inclusion_height : 0;
    return anchor;
}

enum class AnchorCheck { Intact, Tampered };

/// Integrity check of candidate bytes against an anchoring transaction.
/// Detection only: the anchor carries no data to recover the original.
inline AnchorCheck anchor_verify(const Chain& chain, const Hash256& anchor_tx,
                                 const Bytes& candidate)
{
    const Transaction* tx = chain.find_tx(anchor_tx);
    if (!tx)
        throw ChainError(Err::NoSuchAnchor, to_hex(anchor_tx));
    auto digest = anchored_digest_of(*tx);
    if (!digest)
        throw ChainError(Err::NoSuchAnchor, "transaction anchors nothing");
    return hash_data(candidate) == *digest ? AnchorCheck::Intact : AnchorCheck::Tampered;
}

// ---- state channels -------------------------------------------------------------

using builtin::ChannelState;
using builtin::channel_state_message;

inline Bytes encode_channel_state(const ChannelState& s) { return channel_state_message(s); }

inline Bytes sign_channel_state(const ChannelState& s, const KeyPair& key)
{
    return sign_bundle(channel_state_message(s), key);
}

struct ChannelHandle {
    Address contract;
    Address party_a;
    Address party_b;
    std::uint64_t deposit_a = 0;
    std::uint64_t deposit_b = 0;
    ChannelState initial; // seq 0, dual-signed at open
};

/// Opens a channel: A deploys with its deposit, B joins with the agreed
/// counter-deposit, and both sign the seq-0 state so either side can close
/// unilaterally from the start.
inline ChannelHandle channel_open(Chain& chain, const KeyPair& a, const KeyPair& b,
                                  std::uint64_t deposit_a, std::uint64_t deposit_b,
                                  std::uint64_t challenge_window = 20)
{
    if (chain.get_balance(address_of(a)) < deposit_a ||
        chain.get_balance(address_of(b)) < deposit_b)
        throw ChainError(Err::InsufficientBalance, "deposit exceeds balance");

    ChannelHandle h;
    h.party_a = address_of(a);
    h.party_b = address_of(b);
    h.deposit_a = deposit_a;
    h.deposit_b = deposit_b;

    DeployOptions opts;
    opts.value = deposit_a;
    h.contract = deploy_contract(
        chain, a, ContractCode{"channel"},
        {enc_address(h.party_b), enc_u64(deposit_b), enc_u64(challenge_window)}, opts);

    ExecutionReceipt join = call_contract(chain, b, h.contract, "join", {}, deposit_b);
    if (!join.success)
        throw ChainError(join.error.value_or(Err::NotOpen), join.error_detail);

    h.initial.channel = h.contract;
    h.initial.seq = 0;
    h.initial.balance_a = deposit_a;
    h.initial.balance_b = deposit_b;
    h.initial.signature_a = sign_channel_state(h.initial, a);
    h.initial.signature_b = sign_channel_state(h.initial, b);
    return h;
}

/// Pure off-chain update: moves `delta` from A to B (negative moves back),
/// bumps the sequence number and collects both signatures. No chain
/// interaction, no gas, no block.
inline ChannelState channel_update_offchain(const ChannelState& prev, std::int64_t delta,
                                            const std::optional<KeyPair>& a_key,
                                            const std::optional<KeyPair>& b_key)
{
    if (!a_key || !b_key)
        throw ChainError(Err::MissingSignature, "both parties must sign");
    ChannelState next;
    next.channel = prev.channel;
    next.seq = prev.seq + 1;
    if (delta >= 0) {
        std::uint64_t d = static_cast<std::uint64_t>(delta);
        if (prev.balance_a < d)
            throw ChainError(Err::Overdraft, "A cannot cover the transfer");
        next.balance_a = prev.balance_a - d;
        next.balance_b = prev.balance_b + d;
    } else {
        std::uint64_t d = static_cast<std::uint64_t>(-delta);
        if (prev.balance_b < d)
            throw ChainError(Err::Overdraft, "B cannot cover the transfer");
        next.balance_a = prev.balance_a + d;
        next.balance_b = prev.balance_b - d;
    }
    next.signature_a = sign_channel_state(next, *a_key);
    next.signature_b = sign_channel_state(next, *b_key);
    return next;
}

inline std::vector<Bytes> channel_state_args(const ChannelState& s)
{
    return {encode_channel_state(s), s.signature_a, s.signature_b};
}

inline ExecutionReceipt channel_close_cooperative(Chain& chain, const KeyPair& caller,
                                                  const Address& channel, const ChannelState& final_state)
{
    return call_contract(chain, caller, channel, "close_cooperative",
                         channel_state_args(final_state));
}

inline ExecutionReceipt channel_dispute_open(Chain& chain, const KeyPair& caller,
                                             const Address& channel, const ChannelState& candidate)
{
    return call_contract(chain, caller, channel, "dispute_open", channel_state_args(candidate));
}

inline ExecutionReceipt channel_challenge(Chain& chain, const KeyPair& caller,
                                          const Address& channel, const ChannelState& newer)
{
    return call_contract(chain, caller, channel, "challenge", channel_state_args(newer));
}

inline ExecutionReceipt channel_finalize(Chain& chain, const KeyPair& caller,
                                         const Address& channel)
{
    return call_contract(chain, caller, channel, "finalize");
}

// ---- legal and smart contract pair ------------------------------------------------

struct PairBinding {
    Address contract;
    Bytes finalized_document;
    Hash256 document_hash;
};

inline std::string render_pair_address(const Address& addr)
{
    return "\ncontract-address: 0x" + to_hex(addr) + "\n";
}

/// Deploys the anchor contract, writes its address into the document, and
/// binds the finalized document's digest on-chain (write-once).
inline PairBinding pair_bind(Chain& chain, const KeyPair& caller, const Bytes& document)
{
    PairBinding binding;
    binding.contract = deploy_contract(chain, caller, ContractCode{"pair-anchor"});
    binding.finalized_document = document;
    append(binding.finalized_document, bytes_of(render_pair_address(binding.contract)));
    binding.document_hash = hash_data(binding.finalized_document);
    ExecutionReceipt receipt =
        call_contract(chain, caller, binding.contract, "bind", {enc_hash(binding.document_hash)});
    if (!receipt.success)
        throw ChainError(receipt.error.value_or(Err::AlreadyBound), receipt.error_detail);
    return binding;
}

enum class PairCheck { Bound, Mismatch };

inline PairCheck pair_verify(const Chain& chain, const Address& pair_contract,
                             const Bytes& candidate_document)
{
    Hash256 stored = dec_hash(query_state(chain, pair_contract, "agreement_hash"));
    return hash_data(candidate_document) == stored ? PairCheck::Bound : PairCheck::Mismatch;
}

} // namespace chainsim
