// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// Minimal logic contract that keeps all of its data in an external
// kv-store. Swapping the logic (a new deployment, re-pointed through a
// registry) leaves the data where it is — no migration transaction ever
// touches the store.

inline Behavior kv_client_behavior()
{
    Behavior b;
    b.code_id = "kv-client";

    // args: [kv-store address]
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        env.store(bytes_of("kv"), enc_address(dec_address(env.arg(args, 0))));
    };

    b.functions.push_back(
        {"put_via", PermissionGuard::owner_only(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             Address kv = dec_address(env.load_or_reject(bytes_of("kv"), Err::BadArguments));
             env.call(kv, "put", {env.arg(args, 0), env.arg(args, 1)});
             return {};
         }});

    b.views.push_back({"get_via", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           Address kv =
                               dec_address(env.load_or_throw(bytes_of("kv"), Err::NoSuchKey));
                           return env.view(kv, "get", {args.at(0)});
                       }});

    b.views.push_back({"store_address", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("kv"), Err::NoSuchKey);
                       }});

    return b;
}

} // namespace chainsim::builtin
