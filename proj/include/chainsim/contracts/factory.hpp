// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// On-chain template instantiation. The factory pins the template set and
// version at deployment, so every instance it produces reports the same
// code identity while holding fully independent state.

inline Behavior factory_behavior()
{
    Behavior b;
    b.code_id = "factory";

    // args: [templates as bytes vec of code ids, version string]
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        Decoder dec(env.arg(args, 0));
        auto templates = dec.bytes_vec();
        if (templates.empty())
            env.reject(Err::BadArguments, "factory needs at least one template");
        std::string version = args.size() > 1 ? string_of(args[1]) : "1";
        env.store(bytes_of("templates"), Encoder{}.bytes_vec(templates).take());
        env.store(bytes_of("version"), bytes_of(version));
        env.store(bytes_of("instances"), Encoder{}.address_vec({}).take());
    };

    // instantiate(template, ctor args...) -> instance address; attached
    // value funds the new instance.
    b.functions.push_back(
        {"instantiate", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::string wanted = string_of(env.arg(args, 0));
             Decoder dec(env.load_or_reject(bytes_of("templates"), Err::BadArguments));
             bool known = false;
             for (const auto& t : dec.bytes_vec())
                 known = known || string_of(t) == wanted;
             if (!known)
                 env.reject(Err::UnknownTemplate, wanted);

             std::string version = string_of(env.load_or_reject(bytes_of("version"), Err::BadArguments));
             std::vector<Bytes> ctor_args(args.begin() + 1, args.end());
             Address instance =
                 env.deploy(ContractCode{wanted, version}, ctor_args, env.attached_value());

             Decoder idec(env.load_or_reject(bytes_of("instances"), Err::BadArguments));
             auto instances = idec.address_vec();
             instances.push_back(instance);
             env.store(bytes_of("instances"), Encoder{}.address_vec(instances).take());
             env.emit("Instantiated", Encoder{}.str(wanted).address(instance).take());
             return enc_address(instance);
         }});

    b.views.push_back({"instances", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("instances"), Err::NoSuchKey);
                       }});

    b.views.push_back({"templates", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("templates"), Err::NoSuchKey);
                       }});

    return b;
}

} // namespace chainsim::builtin
