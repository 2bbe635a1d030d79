// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// Consumer fed by a single registered oracle (the admin curates the
// oracle set). Injection is authenticated, never validated: whatever a
// registered oracle signs becomes the on-chain fact. An optional
// conditional payout keyed on one fact makes the trust consequences
// observable.

namespace oracle_detail {

    inline Bytes fact_key(const std::string& query) { return bytes_of("f/" + query); }

    struct BetConfig {
        std::string query;
        Bytes expect;
        Address to_match;
        Address to_else;
    };

    inline Bytes encode_bet(const BetConfig& c)
    {
        Encoder enc;
        enc.str(c.query).var_bytes(c.expect).address(c.to_match).address(c.to_else);
        return enc.take();
    }

    inline BetConfig decode_bet(const Bytes& b)
    {
        Decoder dec(b);
        BetConfig c;
        c.query = dec.str();
        c.expect = dec.var_bytes();
        c.to_match = dec.address();
        c.to_else = dec.address();
        return c;
    }

    inline void settle_bet(CallEnv& env, const Bytes& fact_value)
    {
        BetConfig bet = decode_bet(env.load_or_reject(bytes_of("bet"), Err::BadArguments));
        if (env.load(bytes_of("settled")))
            env.reject(Err::AlreadyResolved, "payout already settled");
        Address winner = fact_value == bet.expect ? bet.to_match : bet.to_else;
        std::uint64_t pot = env.self_balance();
        env.store(bytes_of("settled"), Bytes{1});
        env.pay(winner, pot);
        env.emit("Settled", Encoder{}.address(winner).u64(pot).take());
    }

} // namespace oracle_detail

inline Behavior oracle_consumer_behavior()
{
    using namespace oracle_detail;
    Behavior b;
    b.code_id = "oracle-consumer";

    // args: [optional bet config (query, expect, to_match, to_else)];
    // attached value funds the conditional payout pot.
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        env.store(bytes_of("oracles"), Encoder{}.address_vec({}).take());
        if (!args.empty() && !args[0].empty())
            env.store(bytes_of("bet"), env.arg(args, 0));
    };

    b.functions.push_back(
        {"register_oracle", PermissionGuard::owner_only(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             Address oracle = dec_address(env.arg(args, 0));
             Decoder dec(env.load_or_reject(bytes_of("oracles"), Err::BadArguments));
             auto oracles = dec.address_vec();
             for (const auto& o : oracles)
                 if (o == oracle)
                     env.reject(Err::AlreadyRegistered);
             oracles.push_back(oracle);
             env.store(bytes_of("oracles"), Encoder{}.address_vec(oracles).take());
             env.emit("OracleRegistered", enc_address(oracle));
             return {};
         }});

    b.functions.push_back(
        {"deactivate_oracle", PermissionGuard::owner_only(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             Address oracle = dec_address(env.arg(args, 0));
             Decoder dec(env.load_or_reject(bytes_of("oracles"), Err::BadArguments));
             auto oracles = dec.address_vec();
             std::vector<Address> kept;
             for (const auto& o : oracles)
                 if (o != oracle)
                     kept.push_back(o);
             env.store(bytes_of("oracles"), Encoder{}.address_vec(kept).take());
             env.emit("OracleDeactivated", enc_address(oracle));
             return {};
         }});

    // Acceptance is purely by sender identity; the value itself is taken
    // on trust.
    b.functions.push_back(
        {"inject", PermissionGuard::storage_set(bytes_of("oracles")),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::string query = string_of(env.arg(args, 0));
             const Bytes& value = env.arg(args, 1);
             env.store(fact_key(query), value);
             env.emit("Injected", Encoder{}.str(query).var_bytes(value).take());
             return {};
         }});

    b.functions.push_back(
        {"settle", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>&) -> Bytes {
             BetConfig bet = decode_bet(env.load_or_reject(bytes_of("bet"), Err::BadArguments));
             auto fact = env.load(fact_key(bet.query));
             if (!fact)
                 env.reject(Err::NoSuchKey, "no injected value for " + bet.query);
             settle_bet(env, *fact);
             return {};
         }});

    b.views.push_back({"fact", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           return env.load_or_throw(oracle_detail::fact_key(string_of(args.at(0))),
                                                    Err::NoSuchKey);
                       }});

    b.views.push_back({"oracles", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("oracles"), Err::NoSuchKey);
                       }});

    b.views.push_back({"settled", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return enc_bool(env.load(bytes_of("settled")).has_value());
                       }});

    return b;
}

/// Helper shared with the pattern layer: encodes the conditional payout
/// constructor argument.
inline Bytes encode_bet_config(const std::string& query, const Bytes& expect,
                               const Address& to_match, const Address& to_else)
{
    oracle_detail::BetConfig c{query, expect, to_match, to_else};
    return oracle_detail::encode_bet(c);
}

} // namespace chainsim::builtin
