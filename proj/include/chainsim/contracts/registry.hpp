// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// Name -> address registry with dense integer versions. Every historical
// version stays queryable; updating a name never deletes anything. Write
// permission is per name (the registering account) plus a registry-wide
// admin list that a multisig wallet can sit behind.

namespace registry_detail {

    inline Bytes owner_key(const std::string& name) { return bytes_of("n/" + name + "/owner"); }
    inline Bytes count_key(const std::string& name) { return bytes_of("n/" + name + "/count"); }

    inline Bytes version_key(const std::string& name, std::uint64_t version)
    {
        Bytes k = bytes_of("n/" + name + "/v/");
        append(k, enc_u64(version));
        return k;
    }

    inline bool is_admin_call(CallEnv& env, const Address& who)
    {
        auto admins = env.load(bytes_of("admins"));
        if (!admins)
            return false;
        Decoder dec(*admins);
        for (const auto& a : dec.address_vec())
            if (a == who)
                return true;
        return false;
    }

} // namespace registry_detail

inline Behavior registry_behavior()
{
    using namespace registry_detail;
    Behavior b;
    b.code_id = "registry";

    // args: [u8 open_registration (default 1), address vec admins
    // (default: deployer)]
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        std::uint8_t open = args.empty() ? 1 : env.arg(args, 0).at(0);
        env.store(bytes_of("open"), Bytes{open});
        std::vector<Address> admins;
        if (args.size() > 1) {
            Decoder dec(env.arg(args, 1));
            admins = dec.address_vec();
        }
        if (admins.empty())
            admins.push_back(env.caller());
        env.store(bytes_of("admins"), Encoder{}.address_vec(admins).take());
    };

    b.functions.push_back(
        {"register_name", PermissionGuard::custom("open registration or admin"),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::string name = string_of(env.arg(args, 0));
             Address target = dec_address(env.arg(args, 1));
             bool open = env.load_or_reject(bytes_of("open"), Err::BadArguments).at(0) != 0;
             if (!open && !is_admin_call(env, env.caller()))
                 env.reject(Err::NotAuthorized, "registration is admin-only");
             if (env.load(count_key(name)))
                 env.reject(Err::NameTaken, name);
             env.store(owner_key(name), enc_address(env.caller()));
             env.store(count_key(name), enc_u64(1));
             env.store(version_key(name, 1), enc_address(target));
             env.emit("Registered", Encoder{}.str(name).address(target).u64(1).take());
             return enc_u64(1);
         }});

    b.functions.push_back(
        {"update_name", PermissionGuard::custom("name owner or admin"),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::string name = string_of(env.arg(args, 0));
             Address target = dec_address(env.arg(args, 1));
             auto count = env.load(count_key(name));
             if (!count)
                 env.reject(Err::NoSuchName, name);
             Address name_owner = dec_address(env.load_or_reject(owner_key(name), Err::NoSuchName));
             if (env.caller() != name_owner && !is_admin_call(env, env.caller()))
                 env.reject(Err::NotAuthorized, "caller owns neither name nor registry");
             std::uint64_t next = dec_u64(*count) + 1;
             env.store(count_key(name), enc_u64(next));
             env.store(version_key(name, next), enc_address(target));
             env.emit("Updated", Encoder{}.str(name).address(target).u64(next).take());
             return enc_u64(next);
         }});

    b.functions.push_back(
        {"set_admins", PermissionGuard::storage_set(bytes_of("admins")),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             Decoder dec(env.arg(args, 0));
             auto admins = dec.address_vec();
             if (admins.empty())
                 env.reject(Err::BadArguments, "admin list cannot be empty");
             env.store(bytes_of("admins"), Encoder{}.address_vec(admins).take());
             env.emit("AdminsUpdated");
             return {};
         }});

    b.views.push_back({"lookup", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           std::string name = string_of(args.at(0));
                           auto count = env.load(registry_detail::count_key(name));
                           if (!count)
                               throw ChainError(Err::NoSuchName, name);
                           return env.load_or_throw(
                               registry_detail::version_key(name, dec_u64(*count)),
                               Err::NoSuchVersion);
                       }});

    b.views.push_back(
        {"lookup_version", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::string name = string_of(args.at(0));
             std::uint64_t version = dec_u64(args.at(1));
             auto count = env.load(registry_detail::count_key(name));
             if (!count)
                 throw ChainError(Err::NoSuchName, name);
             if (version == 0 || version > dec_u64(*count))
                 throw ChainError(Err::NoSuchVersion, std::to_string(version));
             return env.load_or_throw(registry_detail::version_key(name, version),
                                      Err::NoSuchVersion);
         }});

    b.views.push_back(
        {"version_count", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::string name = string_of(args.at(0));
             return env.load_or_throw(registry_detail::count_key(name), Err::NoSuchName);
         }});

    b.views.push_back({"owner_of", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           std::string name = string_of(args.at(0));
                           return env.load_or_throw(registry_detail::owner_key(name),
                                                    Err::NoSuchName);
                       }});

    b.views.push_back({"admins", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("admins"), Err::NoSuchKey);
                       }});

    return b;
}

} // namespace chainsim::builtin
