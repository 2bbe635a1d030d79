// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// Accessorial work nobody benefits from directly, made worth invoking by a
// reward. The reward pays at most once, only to whoever performs the work
// at or after the due height, and only while the contract can actually
// fund it — an unfunded job just sits there, incentive or not.

namespace job_detail {

    inline Bytes tmp_key(const Bytes& suffix)
    {
        Bytes k = bytes_of("tmp/");
        append(k, suffix);
        return k;
    }

} // namespace job_detail

inline Behavior incentive_job_behavior()
{
    using namespace job_detail;
    Behavior b;
    b.code_id = "incentive-job";

    // args: [u64 due height, u64 reward, work name, optional bytes vec of
    // expired record keys to seed]; attached value funds the reward.
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        std::uint64_t due = dec_u64(env.arg(args, 0));
        std::uint64_t reward = dec_u64(env.arg(args, 1));
        std::string work = string_of(env.arg(args, 2));
        if (work != "cleanup-expired" && work != "noop")
            env.reject(Err::BadArguments, "unknown work action: " + work);
        env.store(bytes_of("due"), enc_u64(due));
        env.store(bytes_of("reward"), enc_u64(reward));
        env.store(bytes_of("work"), bytes_of(work));
        std::vector<Bytes> seeded;
        if (args.size() > 3) {
            Decoder dec(env.arg(args, 3));
            seeded = dec.bytes_vec();
            for (const auto& key : seeded)
                env.store(tmp_key(key), bytes_of("expired-record"));
        }
        env.store(bytes_of("tmp_keys"), Encoder{}.bytes_vec(seeded).take());
    };

    b.functions.push_back(
        {"invoke", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>&) -> Bytes {
             if (env.load(bytes_of("done")))
                 env.reject(Err::AlreadyDone);
             std::uint64_t due = dec_u64(env.load_or_reject(bytes_of("due"), Err::BadArguments));
             if (env.block_height() < due)
                 env.reject(Err::TooEarly);
             std::uint64_t reward = dec_u64(env.load_or_reject(bytes_of("reward"), Err::BadArguments));
             if (env.self_balance() < reward)
                 env.reject(Err::InsufficientReward);

             std::string work = string_of(env.load_or_reject(bytes_of("work"), Err::BadArguments));
             if (work == "cleanup-expired") {
                 Decoder dec(env.load_or_reject(bytes_of("tmp_keys"), Err::BadArguments));
                 for (const auto& key : dec.bytes_vec())
                     env.erase(tmp_key(key));
                 env.store(bytes_of("tmp_keys"), Encoder{}.bytes_vec({}).take());
             }

             env.store(bytes_of("done"), Bytes{1});
             env.pay(env.caller(), reward);
             env.emit("JobExecuted", Encoder{}.str(work).address(env.caller()).u64(reward).take());
             return {};
         }});

    b.views.push_back({"done", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return enc_bool(env.load(bytes_of("done")).has_value());
                       }});

    b.views.push_back({"due", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("due"), Err::NoSuchKey);
                       }});

    b.views.push_back({"pending_cleanup", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           auto raw = env.load(bytes_of("tmp_keys"));
                           if (!raw)
                               return enc_u64(0);
                           Decoder dec(*raw);
                           return enc_u64(dec.bytes_vec().size());
                       }});

    return b;
}

} // namespace chainsim::builtin
