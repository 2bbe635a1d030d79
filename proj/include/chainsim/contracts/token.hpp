// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// Fungible token ledger kept in contract storage. Custodied-asset issuance
// maps onto mint/burn: only the minter set may create or retire units, so
// the on-chain supply tracks what sits in custody.
//
// Storage: "supply" -> u64, "minters" -> address vec,
//          "b/<addr>" -> u64, "a/<owner><spender>" -> u64.

namespace token_detail {

    inline Bytes balance_key(const Address& a)
    {
        Bytes k = bytes_of("b/");
        k.insert(k.end(), a.bytes.begin(), a.bytes.end());
        return k;
    }

    inline Bytes allowance_key(const Address& owner, const Address& spender)
    {
        Bytes k = bytes_of("a/");
        k.insert(k.end(), owner.bytes.begin(), owner.bytes.end());
        k.insert(k.end(), spender.bytes.begin(), spender.bytes.end());
        return k;
    }

    inline std::uint64_t read_u64(CallEnv& env, const Bytes& key)
    {
        auto v = env.load(key);
        return v ? dec_u64(*v) : 0;
    }

    inline void write_u64(CallEnv& env, const Bytes& key, std::uint64_t value)
    {
        env.store(key, enc_u64(value));
    }

    inline bool is_minter(CallEnv& env, const Address& who)
    {
        auto v = env.load(bytes_of("minters"));
        if (!v)
            return false;
        Decoder dec(*v);
        for (const auto& a : dec.address_vec())
            if (a == who)
                return true;
        return false;
    }

    inline void move_units(CallEnv& env, const Address& from, const Address& to,
                           std::uint64_t amount)
    {
        std::uint64_t from_bal = read_u64(env, balance_key(from));
        if (from_bal < amount)
            env.reject(Err::InsufficientBalance);
        write_u64(env, balance_key(from), from_bal - amount);
        write_u64(env, balance_key(to), read_u64(env, balance_key(to)) + amount);
    }

} // namespace token_detail

inline Behavior token_behavior()
{
    using namespace token_detail;
    Behavior b;
    b.code_id = "token";

    // args: [minters address vec] (defaults to the deployer)
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        std::vector<Address> minters;
        if (!args.empty()) {
            Decoder dec(env.arg(args, 0));
            minters = dec.address_vec();
        }
        if (minters.empty())
            minters.push_back(env.caller());
        env.store(bytes_of("minters"), Encoder{}.address_vec(minters).take());
        env.store(bytes_of("supply"), enc_u64(0));
    };

    b.functions.push_back(
        {"mint", PermissionGuard::custom("minter set"),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             if (!is_minter(env, env.caller()))
                 env.reject(Err::NotAuthorized, "caller is not a minter");
             Address to = dec_address(env.arg(args, 0));
             std::uint64_t amount = dec_u64(env.arg(args, 1));
             std::uint64_t supply = read_u64(env, bytes_of("supply"));
             if (supply + amount < supply)
                 env.reject(Err::BadArguments, "supply overflow");
             write_u64(env, bytes_of("supply"), supply + amount);
             write_u64(env, balance_key(to), read_u64(env, balance_key(to)) + amount);
             env.emit("Mint", Encoder{}.address(to).u64(amount).take());
             return {};
         }});

    b.functions.push_back(
        {"burn", PermissionGuard::custom("minter set"),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             if (!is_minter(env, env.caller()))
                 env.reject(Err::NotAuthorized, "caller is not a minter");
             Address from = dec_address(env.arg(args, 0));
             std::uint64_t amount = dec_u64(env.arg(args, 1));
             std::uint64_t bal = read_u64(env, balance_key(from));
             if (bal < amount)
                 env.reject(Err::InsufficientBalance);
             write_u64(env, balance_key(from), bal - amount);
             write_u64(env, bytes_of("supply"), read_u64(env, bytes_of("supply")) - amount);
             env.emit("Burn", Encoder{}.address(from).u64(amount).take());
             return {};
         }});

    b.functions.push_back(
        {"transfer", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             Address to = dec_address(env.arg(args, 0));
             std::uint64_t amount = dec_u64(env.arg(args, 1));
             move_units(env, env.caller(), to, amount);
             env.emit("Transfer", Encoder{}.address(env.caller()).address(to).u64(amount).take());
             return {};
         }});

    b.functions.push_back(
        {"approve", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             Address spender = dec_address(env.arg(args, 0));
             std::uint64_t amount = dec_u64(env.arg(args, 1));
             write_u64(env, allowance_key(env.caller(), spender), amount);
             env.emit("Approval",
                      Encoder{}.address(env.caller()).address(spender).u64(amount).take());
             return {};
         }});

    b.functions.push_back(
        {"transfer_from", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             Address from = dec_address(env.arg(args, 0));
             Address to = dec_address(env.arg(args, 1));
             std::uint64_t amount = dec_u64(env.arg(args, 2));
             Bytes akey = allowance_key(from, env.caller());
             std::uint64_t allowance = read_u64(env, akey);
             if (allowance < amount)
                 env.reject(Err::InsufficientAllowance);
             move_units(env, from, to, amount);
             write_u64(env, akey, allowance - amount);
             env.emit("Transfer", Encoder{}.address(from).address(to).u64(amount).take());
             return {};
         }});

    b.views.push_back({"balance_of", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           if (args.size() != 1)
                               throw ChainError(Err::BadArguments, "balance_of takes an address");
                           auto v = env.load(token_detail::balance_key(dec_address(args[0])));
                           return v ? *v : enc_u64(0);
                       }});

    b.views.push_back({"total_supply", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("supply"), Err::NoSuchKey);
                       }});

    b.views.push_back({"allowance", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           if (args.size() != 2)
                               throw ChainError(Err::BadArguments, "allowance takes two addresses");
                           auto v = env.load(
                               token_detail::allowance_key(dec_address(args[0]), dec_address(args[1])));
                           return v ? *v : enc_u64(0);
                       }});

    return b;
}

} // namespace chainsim::builtin
