// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// Generic data contract: a flat map from 32-byte keys to opaque values,
// isolated from any logic contract so upgrades never migrate data.
//
// Writer modes: 0 = owner only, 1 = anyone, 2 = explicit writer list
// (extendable by the owner through grant).

namespace kv_detail {

    inline Bytes entry_key(const Hash256& h)
    {
        Bytes k = bytes_of("e/");
        k.insert(k.end(), h.bytes.begin(), h.bytes.end());
        return k;
    }

    inline bool writer_allowed(CallEnv& env, const Address& who)
    {
        auto mode = env.load_or_reject(bytes_of("mode"), Err::BadArguments);
        switch (mode.at(0)) {
        case 0:
            return env.owner() && *env.owner() == who;
        case 1:
            return true;
        case 2: {
            auto writers = env.load(bytes_of("writers"));
            if (!writers)
                return false;
            Decoder dec(*writers);
            for (const auto& a : dec.address_vec())
                if (a == who)
                    return true;
            return false;
        }
        default:
            return false;
        }
    }

} // namespace kv_detail

inline Behavior kv_store_behavior()
{
    using namespace kv_detail;
    Behavior b;
    b.code_id = "kv-store";

    // args: [u8 mode, address vec writers (mode 2)]
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        std::uint8_t mode = args.empty() ? 0 : env.arg(args, 0).at(0);
        if (mode > 2)
            env.reject(Err::BadArguments, "writer mode must be 0, 1 or 2");
        env.store(bytes_of("mode"), Bytes{mode});
        if (mode == 2) {
            Decoder dec(env.arg(args, 1));
            env.store(bytes_of("writers"), Encoder{}.address_vec(dec.address_vec()).take());
        }
    };

    b.functions.push_back(
        {"put", PermissionGuard::custom("writer permission"),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             if (!writer_allowed(env, env.caller()))
                 env.reject(Err::NotAuthorized, "caller lacks write permission");
             Hash256 key = dec_hash(env.arg(args, 0));
             env.store(entry_key(key), env.arg(args, 1));
             env.emit("Put", enc_hash(key));
             return {};
         }});

    b.functions.push_back(
        {"grant", PermissionGuard::owner_only(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             Address who = dec_address(env.arg(args, 0));
             std::vector<Address> writers;
             if (auto existing = env.load(bytes_of("writers"))) {
                 Decoder dec(*existing);
                 writers = dec.address_vec();
             }
             for (const auto& w : writers)
                 if (w == who)
                     return {};
             writers.push_back(who);
             env.store(bytes_of("writers"), Encoder{}.address_vec(writers).take());
             env.store(bytes_of("mode"), Bytes{2});
             return {};
         }});

    b.views.push_back({"get", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           if (args.size() != 1)
                               throw ChainError(Err::BadArguments, "get takes a 32-byte key");
                           return env.load_or_throw(kv_detail::entry_key(dec_hash(args[0])),
                                                    Err::NoSuchKey);
                       }});

    return b;
}

} // namespace chainsim::builtin
