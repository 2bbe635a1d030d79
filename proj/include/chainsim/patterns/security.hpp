// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <optional>

#include <chainsim/contracts/builtins.hpp>

namespace chainsim {

// Multiple authorization, dynamic (hashlock) authorization and embedded
// permission, as operations over the built-in behaviors. On-chain
// encryption primitives live in crypto.hpp; the sealed bytes travel
// through kv_put or a transaction embed like any other value.

using builtin::encode_call_action;
using builtin::encode_transfer_action;
using builtin::encode_update_owners_action;

struct MultisigStatus {
    bool executed = false;
    std::uint64_t approvals = 0;
    std::uint64_t threshold = 0;
};

struct MultisigProposeOutcome {
    ExecutionReceipt receipt;
    std::uint64_t proposal_id = 0;
    MultisigStatus status;
};

struct MultisigApproveOutcome {
    ExecutionReceipt receipt;
    MultisigStatus status;
};

inline Address multisig_deploy(Chain& chain, const KeyPair& deployer,
                               const std::vector<Address>& owners, std::uint64_t threshold,
                               std::uint64_t funding = 0)
{
    DeployOptions opts;
    opts.value = funding;
    return deploy_contract(chain, deployer, ContractCode{"multisig-wallet"},
                           {Encoder{}.address_vec(owners).take(), enc_u64(threshold)}, opts);
}

inline MultisigProposeOutcome multisig_propose(Chain& chain, const KeyPair& owner,
                                               const Address& wallet, Bytes action)
{
    MultisigProposeOutcome out;
    out.receipt = call_contract(chain, owner, wallet, "propose", {std::move(action)});
    if (out.receipt.success) {
        Decoder dec(out.receipt.return_value);
        out.proposal_id = dec.u64();
        out.status.executed = dec.boolean();
        out.status.approvals = dec.u64();
        out.status.threshold = dec.u64();
    }
    return out;
}

inline MultisigApproveOutcome multisig_approve(Chain& chain, const KeyPair& owner,
                                               const Address& wallet, std::uint64_t proposal_id)
{
    MultisigApproveOutcome out;
    out.receipt = call_contract(chain, owner, wallet, "approve", {enc_u64(proposal_id)});
    if (out.receipt.success) {
        Decoder dec(out.receipt.return_value);
        out.status.executed = dec.boolean();
        out.status.approvals = dec.u64();
        out.status.threshold = dec.u64();
    }
    return out;
}

inline MultisigStatus multisig_status(const Chain& chain, const Address& wallet,
                                      std::uint64_t proposal_id)
{
    Bytes raw = query_state(chain, wallet, "proposal_status", {enc_u64(proposal_id)});
    Decoder dec(raw);
    MultisigStatus s;
    s.executed = dec.boolean();
    s.approvals = dec.u64();
    s.threshold = dec_u64(query_state(chain, wallet, "threshold"));
    return s;
}

/// Locks `amount` under a digest. Whoever can present the preimage (and
/// the matching signature, when a claimant is pinned) takes the funds.
inline Address hashlock_lock(Chain& chain, const KeyPair& funder, const Hash256& digest,
                             std::uint64_t amount,
                             std::optional<Address> required_claimant = std::nullopt,
                             std::optional<std::uint64_t> timeout_height = std::nullopt)
{
    if (chain.get_balance(address_of(funder)) < amount)
        throw ChainError(Err::InsufficientBalance, "funder cannot cover the lock");
    Encoder claimant_arg;
    claimant_arg.boolean(required_claimant.has_value());
    if (required_claimant)
        claimant_arg.address(*required_claimant);
    Encoder timeout_arg;
    timeout_arg.boolean(timeout_height.has_value());
    if (timeout_height)
        timeout_arg.u64(*timeout_height);
    DeployOptions opts;
    opts.value = amount;
    return deploy_contract(chain, funder, ContractCode{"hashlock-escrow"},
                           {enc_hash(digest), claimant_arg.take(), timeout_arg.take()}, opts);
}

inline ExecutionReceipt hashlock_claim(Chain& chain, const KeyPair& claimant, const Address& lock,
                                       const Bytes& preimage)
{
    return call_contract(chain, claimant, lock, "claim", {preimage});
}

inline ExecutionReceipt hashlock_refund(Chain& chain, const KeyPair& funder, const Address& lock)
{
    return call_contract(chain, funder, lock, "refund");
}

/// Preimage published by a successful claim, if any.
inline std::optional<Bytes> hashlock_revealed_preimage(const Chain& chain, const Address& lock)
{
    try {
        return query_state(chain, lock, "revealed_preimage");
    } catch (const ChainError& e) {
        if (e.code() == Err::NoSuchKey)
            return std::nullopt;
        throw;
    }
}

} // namespace chainsim
