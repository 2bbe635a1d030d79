// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/crypto.hpp>
#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// Escrow unlocked by revealing the preimage of a stored digest. The claim
// writes the preimage into storage, so a successful claim publishes the
// secret and every other lock under the same digest becomes claimable.
// An optional required claimant additionally pins the claim to one
// address; an optional timeout height opens a funder refund path (without
// one, a lost secret locks the funds forever).

inline Behavior hashlock_behavior()
{
    Behavior b;
    b.code_id = "hashlock-escrow";

    // args: [digest32, optional claimant (bool+addr), optional timeout
    // height (bool+u64)]; the escrowed amount is the attached value.
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        Hash256 digest = dec_hash(env.arg(args, 0));
        env.store(bytes_of("digest"), enc_hash(digest));
        env.store(bytes_of("funder"), enc_address(env.caller()));
        env.store(bytes_of("amount"), enc_u64(env.attached_value()));
        if (args.size() > 1 && !args[1].empty()) {
            Decoder dec(args[1]);
            if (dec.boolean())
                env.store(bytes_of("claimant"), enc_address(dec.address()));
        }
        if (args.size() > 2 && !args[2].empty()) {
            Decoder dec(args[2]);
            if (dec.boolean())
                env.store(bytes_of("timeout"), enc_u64(dec.u64()));
        }
        env.emit("Locked", Encoder{}.hash(digest).u64(env.attached_value()).take());
    };

    b.functions.push_back(
        {"claim", PermissionGuard::anyone(), // dynamic authorization: the preimage is the credential
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             const Bytes& preimage = env.arg(args, 0);
             if (env.load(bytes_of("spent")))
                 env.reject(Err::AlreadyClaimed);
             if (auto timeout = env.load(bytes_of("timeout")))
                 if (env.block_height() >= dec_u64(*timeout))
                     env.reject(Err::TimedOut);
             if (auto claimant = env.load(bytes_of("claimant")))
                 if (dec_address(*claimant) != env.caller())
                     env.reject(Err::WrongClaimant);
             Hash256 digest = dec_hash(env.load_or_reject(bytes_of("digest"), Err::BadArguments));
             if (hash_data(preimage) != digest)
                 env.reject(Err::WrongPreimage);

             std::uint64_t amount = dec_u64(env.load_or_reject(bytes_of("amount"), Err::BadArguments));
             env.store(bytes_of("spent"), Bytes{1});
             env.store(bytes_of("preimage"), preimage); // revealed on-chain
             env.pay(env.caller(), amount);
             env.emit("Claimed", Encoder{}.address(env.caller()).var_bytes(preimage).take());
             return {};
         }});

    b.functions.push_back(
        {"refund", PermissionGuard::custom("funder after timeout"),
         [](CallEnv& env, const std::vector<Bytes>&) -> Bytes {
             Address funder = dec_address(env.load_or_reject(bytes_of("funder"), Err::BadArguments));
             if (env.caller() != funder)
                 env.reject(Err::NotAuthorized, "only the funder may refund");
             if (env.load(bytes_of("spent")))
                 env.reject(Err::AlreadyClaimed);
             auto timeout = env.load(bytes_of("timeout"));
             if (!timeout)
                 env.reject(Err::RefundUnavailable, "lock has no timeout");
             if (env.block_height() < dec_u64(*timeout))
                 env.reject(Err::TooEarly);
             std::uint64_t amount = dec_u64(env.load_or_reject(bytes_of("amount"), Err::BadArguments));
             env.store(bytes_of("spent"), Bytes{1});
             env.pay(funder, amount);
             env.emit("Refunded", Encoder{}.address(funder).u64(amount).take());
             return {};
         }});

    b.views.push_back({"digest", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("digest"), Err::NoSuchKey);
                       }});

    b.views.push_back({"amount", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("amount"), Err::NoSuchKey);
                       }});

    b.views.push_back({"spent", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return enc_bool(env.load(bytes_of("spent")).has_value());
                       }});

    // Publicly readable once any claim succeeds.
    b.views.push_back({"revealed_preimage",
                       [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("preimage"), Err::NoSuchKey);
                       }});

    return b;
}

} // namespace chainsim::builtin
