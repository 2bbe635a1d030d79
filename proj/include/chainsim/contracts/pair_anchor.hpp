// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// Anchor half of a legal/smart contract pair. Deployed with a blank
// agreement hash; after the contract address is written into the document,
// the document digest is bound exactly once. Only the deploying account
// may bind.

inline Behavior pair_anchor_behavior()
{
    Behavior b;
    b.code_id = "pair-anchor";

    b.constructor = [](CallEnv& env, const std::vector<Bytes>&) {
        env.store(bytes_of("bound"), enc_bool(false));
    };

    b.functions.push_back(
        {"bind", PermissionGuard::owner_only(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             Hash256 digest = dec_hash(env.arg(args, 0));
             if (dec_bool(env.load_or_reject(bytes_of("bound"), Err::BadArguments)))
                 env.reject(Err::AlreadyBound);
             env.store(bytes_of("bound"), enc_bool(true));
             env.store(bytes_of("agreement_hash"), enc_hash(digest));
             env.store(bytes_of("bound_at"), enc_u64(env.block_height()));
             env.emit("Bound", enc_hash(digest));
             return {};
         }});

    b.views.push_back({"agreement_hash", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("agreement_hash"), Err::NoSuchKey);
                       }});

    b.views.push_back({"bound_at", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("bound_at"), Err::NoSuchKey);
                       }});

    return b;
}

} // namespace chainsim::builtin
