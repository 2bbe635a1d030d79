// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// Security deposit escrow: the stake is held until an arbiter rules. Held
// -> refunded pays the depositor back in full; held -> slashed compensates
// the beneficiary. Exactly one terminal transition happens.

namespace deposit_detail {
    inline constexpr std::uint8_t kHeld = 0;
    inline constexpr std::uint8_t kRefunded = 1;
    inline constexpr std::uint8_t kSlashed = 2;
} // namespace deposit_detail

inline Behavior deposit_escrow_behavior()
{
    using namespace deposit_detail;
    Behavior b;
    b.code_id = "deposit-escrow";

    // args: [beneficiary addr, arbiter address vec]; the deposit is the
    // attached value and the deployer is the depositor.
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        Address beneficiary = dec_address(env.arg(args, 0));
        Decoder dec(env.arg(args, 1));
        auto arbiters = dec.address_vec();
        if (arbiters.empty())
            env.reject(Err::BadArguments, "need at least one arbiter");
        env.store(bytes_of("depositor"), enc_address(env.caller()));
        env.store(bytes_of("beneficiary"), enc_address(beneficiary));
        env.store(bytes_of("arbiters"), Encoder{}.address_vec(arbiters).take());
        env.store(bytes_of("amount"), enc_u64(env.attached_value()));
        env.store(bytes_of("state"), Bytes{kHeld});
    };

    b.functions.push_back(
        {"resolve", PermissionGuard::storage_set(bytes_of("arbiters")),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::uint8_t state = env.load_or_reject(bytes_of("state"), Err::BadArguments).at(0);
             if (state != kHeld)
                 env.reject(Err::AlreadyResolved);
             bool honest = dec_bool(env.arg(args, 0));
             std::uint64_t amount = dec_u64(env.load_or_reject(bytes_of("amount"), Err::BadArguments));
             Address payee = honest
                 ? dec_address(env.load_or_reject(bytes_of("depositor"), Err::BadArguments))
                 : dec_address(env.load_or_reject(bytes_of("beneficiary"), Err::BadArguments));
             env.store(bytes_of("state"), Bytes{honest ? kRefunded : kSlashed});
             env.pay(payee, amount);
             env.emit("DepositResolved",
                      Encoder{}.boolean(honest).address(payee).u64(amount).take());
             return {};
         }});

    b.views.push_back({"state", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("state"), Err::NoSuchKey);
                       }});

    b.views.push_back({"amount", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("amount"), Err::NoSuchKey);
                       }});

    return b;
}

} // namespace chainsim::builtin
