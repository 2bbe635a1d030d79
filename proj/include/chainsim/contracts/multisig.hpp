// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <set>

#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// M-of-N wallet. A proposal executes exactly once, in the same call that
// collects the M-th distinct approval; repeat approvals by one owner are
// idempotent. update_owners rotates the owner set and threshold, so a lost
// key can be replaced by the surviving quorum.

namespace multisig_detail {

    // Action encodings: 0 transfer(to, amount)
    //                   1 update_owners(owners, threshold)
    //                   2 call(target, function, args, value)
    inline constexpr std::uint8_t kActionTransfer = 0;
    inline constexpr std::uint8_t kActionUpdateOwners = 1;
    inline constexpr std::uint8_t kActionCall = 2;

    inline Bytes proposal_key(std::uint64_t id)
    {
        Bytes k = bytes_of("p/");
        append(k, enc_u64(id));
        return k;
    }

    struct Proposal {
        Bytes action;
        bool executed = false;
        std::vector<Address> approvals;
    };

    inline Bytes encode_proposal(const Proposal& p)
    {
        Encoder enc;
        enc.var_bytes(p.action).boolean(p.executed).address_vec(p.approvals);
        return enc.take();
    }

    inline Proposal decode_proposal(const Bytes& b)
    {
        Decoder dec(b);
        Proposal p;
        p.action = dec.var_bytes();
        p.executed = dec.boolean();
        p.approvals = dec.address_vec();
        return p;
    }

    inline std::vector<Address> owners_of(CallEnv& env)
    {
        Decoder dec(env.load_or_reject(bytes_of("owners"), Err::BadArguments));
        return dec.address_vec();
    }

    inline bool is_owner(const std::vector<Address>& owners, const Address& who)
    {
        for (const auto& o : owners)
            if (o == who)
                return true;
        return false;
    }

    inline void execute_action(CallEnv& env, const Bytes& action)
    {
        Decoder dec(action);
        std::uint8_t tag = dec.u8();
        switch (tag) {
        case kActionTransfer: {
            Address to = dec.address();
            std::uint64_t amount = dec.u64();
            env.pay(to, amount);
            break;
        }
        case kActionUpdateOwners: {
            auto owners = dec.address_vec();
            std::uint64_t threshold = dec.u64();
            std::set<Address> dedup(owners.begin(), owners.end());
            if (dedup.empty() || threshold == 0 || threshold > dedup.size())
                env.reject(Err::BadArguments, "need 1 <= threshold <= |owners|");
            env.store(bytes_of("owners"),
                      Encoder{}.address_vec({dedup.begin(), dedup.end()}).take());
            env.store(bytes_of("threshold"), enc_u64(threshold));
            break;
        }
        case kActionCall: {
            Address target = dec.address();
            std::string function = dec.str();
            auto args = dec.bytes_vec();
            std::uint64_t value = dec.u64();
            env.call(target, function, args, value);
            break;
        }
        default:
            env.reject(Err::BadArguments, "unknown action tag");
        }
    }

    // Records the approval and fires the action when the threshold is met.
    // Returns (executed, approvals, threshold).
    inline Bytes approve_and_maybe_execute(CallEnv& env, std::uint64_t id, Proposal p)
    {
        std::uint64_t threshold = dec_u64(env.load_or_reject(bytes_of("threshold"), Err::BadArguments));
        if (!is_owner(p.approvals, env.caller()))
            p.approvals.push_back(env.caller());
        if (p.approvals.size() >= threshold) {
            p.executed = true;
            env.store(proposal_key(id), encode_proposal(p));
            execute_action(env, p.action);
            env.emit("Executed", enc_u64(id));
        } else {
            env.store(proposal_key(id), encode_proposal(p));
        }
        Encoder enc;
        enc.boolean(p.executed).u64(p.approvals.size()).u64(threshold);
        return enc.take();
    }

} // namespace multisig_detail

inline Bytes encode_transfer_action(const Address& to, std::uint64_t amount)
{
    Encoder enc;
    enc.u8(multisig_detail::kActionTransfer).address(to).u64(amount);
    return enc.take();
}

inline Bytes encode_update_owners_action(const std::vector<Address>& owners,
                                         std::uint64_t threshold)
{
    Encoder enc;
    enc.u8(multisig_detail::kActionUpdateOwners).address_vec(owners).u64(threshold);
    return enc.take();
}

inline Bytes encode_call_action(const Address& target, const std::string& function,
                                const std::vector<Bytes>& args, std::uint64_t value)
{
    Encoder enc;
    enc.u8(multisig_detail::kActionCall).address(target).str(function).bytes_vec(args).u64(value);
    return enc.take();
}

inline Behavior multisig_behavior()
{
    using namespace multisig_detail;
    Behavior b;
    b.code_id = "multisig-wallet";

    // args: [address vec owners, u64 threshold]
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        Decoder dec(env.arg(args, 0));
        auto owners = dec.address_vec();
        std::set<Address> dedup(owners.begin(), owners.end());
        std::uint64_t threshold = dec_u64(env.arg(args, 1));
        if (dedup.empty() || threshold == 0 || threshold > dedup.size())
            env.reject(Err::BadArguments, "need 1 <= threshold <= |owners|");
        env.store(bytes_of("owners"), Encoder{}.address_vec({dedup.begin(), dedup.end()}).take());
        env.store(bytes_of("threshold"), enc_u64(threshold));
        env.store(bytes_of("count"), enc_u64(0));
    };

    b.functions.push_back(
        {"propose", PermissionGuard::custom("owner set"),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             auto owners = owners_of(env);
             if (!is_owner(owners, env.caller()))
                 env.reject(Err::NotAnOwner);
             std::uint64_t id = dec_u64(env.load_or_reject(bytes_of("count"), Err::BadArguments));
             env.store(bytes_of("count"), enc_u64(id + 1));
             Proposal p;
             p.action = env.arg(args, 0);
             env.emit("ProposalCreated", enc_u64(id));
             // The proposer's approval counts; a 1-of-N wallet executes here.
             Bytes status = approve_and_maybe_execute(env, id, std::move(p));
             Encoder enc;
             enc.u64(id).raw(status);
             return enc.take();
         }});

    b.functions.push_back(
        {"approve", PermissionGuard::custom("owner set"),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             auto owners = owners_of(env);
             if (!is_owner(owners, env.caller()))
                 env.reject(Err::NotAnOwner);
             std::uint64_t id = dec_u64(env.arg(args, 0));
             auto raw = env.load(proposal_key(id));
             if (!raw)
                 env.reject(Err::NoSuchProposal, std::to_string(id));
             Proposal p = decode_proposal(*raw);
             if (p.executed)
                 env.reject(Err::AlreadyExecuted, std::to_string(id));
             env.emit("Approved", Encoder{}.u64(id).address(env.caller()).take());
             return approve_and_maybe_execute(env, id, std::move(p));
         }});

    b.views.push_back(
        {"proposal_status", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::uint64_t id = dec_u64(args.at(0));
             auto raw = env.load(multisig_detail::proposal_key(id));
             if (!raw)
                 throw ChainError(Err::NoSuchProposal, std::to_string(id));
             auto p = multisig_detail::decode_proposal(*raw);
             Encoder enc;
             enc.boolean(p.executed).u64(p.approvals.size());
             return enc.take();
         }});

    b.views.push_back({"owners", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("owners"), Err::NoSuchKey);
                       }});

    b.views.push_back({"threshold", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("threshold"), Err::NoSuchKey);
                       }});

    return b;
}

} // namespace chainsim::builtin
