// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/crypto.hpp>
#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// Two-party payment/state channel. Deposits lock at open; funds leave only
// at close, paying exactly one dual-signed split. Unilateral closes run
// through a dispute window in which the counterparty can displace a stale
// candidate with any newer-sequence state.

/// Off-chain signed balance split. `signature_a`/`signature_b` are
/// pubkey+signature bundles over the canonical (channel, seq, split) bytes.
struct ChannelState {
    Address channel;
    std::uint64_t seq = 0;
    std::uint64_t balance_a = 0;
    std::uint64_t balance_b = 0;
    Bytes signature_a;
    Bytes signature_b;
};

inline Bytes channel_state_message(const ChannelState& s)
{
    Encoder enc;
    enc.address(s.channel).u64(s.seq).u64(s.balance_a).u64(s.balance_b);
    return enc.take();
}

namespace channel_detail {

    inline constexpr std::uint8_t kAwaitingJoin = 0;
    inline constexpr std::uint8_t kOpen = 1;
    inline constexpr std::uint8_t kDisputing = 2;
    inline constexpr std::uint8_t kClosed = 3;

    struct Parsed {
        ChannelState state;
    };

    inline std::uint8_t status_of(CallEnv& env)
    {
        return env.load_or_reject(bytes_of("status"), Err::BadArguments).at(0);
    }

    inline void require_party(CallEnv& env)
    {
        Address a = dec_address(env.load_or_reject(bytes_of("party_a"), Err::BadArguments));
        Address b = dec_address(env.load_or_reject(bytes_of("party_b"), Err::BadArguments));
        if (env.caller() != a && env.caller() != b)
            env.reject(Err::NotAuthorized, "caller is not a channel party");
    }

    /// Decodes and authenticates a submitted state: both signatures must
    /// verify against the channel parties and the split must conserve the
    /// deposits.
    inline ChannelState checked_state(CallEnv& env, const std::vector<Bytes>& args)
    {
        ChannelState s;
        {
            Decoder dec(env.arg(args, 0));
            s.channel = dec.address();
            s.seq = dec.u64();
            s.balance_a = dec.u64();
            s.balance_b = dec.u64();
        }
        s.signature_a = env.arg(args, 1);
        s.signature_b = env.arg(args, 2);

        if (s.channel != env.self())
            env.reject(Err::BadSignatures, "state was signed for another channel");
        Address party_a = dec_address(env.load_or_reject(bytes_of("party_a"), Err::BadArguments));
        Address party_b = dec_address(env.load_or_reject(bytes_of("party_b"), Err::BadArguments));
        Bytes message = channel_state_message(s);
        if (!verify_bundle(message, s.signature_a, party_a) ||
            !verify_bundle(message, s.signature_b, party_b))
            env.reject(Err::BadSignatures);

        std::uint64_t dep_a = dec_u64(env.load_or_reject(bytes_of("deposit_a"), Err::BadArguments));
        std::uint64_t dep_b = dec_u64(env.load_or_reject(bytes_of("deposit_b"), Err::BadArguments));
        if (s.balance_a + s.balance_b != dep_a + dep_b)
            env.reject(Err::SplitMismatch);
        return s;
    }

    inline void settle(CallEnv& env, std::uint64_t pay_a, std::uint64_t pay_b,
                       const char* event_name)
    {
        Address party_a = dec_address(env.load_or_reject(bytes_of("party_a"), Err::BadArguments));
        Address party_b = dec_address(env.load_or_reject(bytes_of("party_b"), Err::BadArguments));
        env.store(bytes_of("status"), Bytes{kClosed});
        if (pay_a > 0)
            env.pay(party_a, pay_a);
        if (pay_b > 0)
            env.pay(party_b, pay_b);
        env.emit(event_name, Encoder{}.u64(pay_a).u64(pay_b).take());
    }

} // namespace channel_detail

inline Behavior channel_behavior()
{
    using namespace channel_detail;
    Behavior b;
    b.code_id = "channel";

    // args: [party_b addr, expected deposit_b u64, challenge window u64];
    // deposit_a is the attached value, the deployer is party A.
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        Address party_b = dec_address(env.arg(args, 0));
        std::uint64_t expected_b = dec_u64(env.arg(args, 1));
        std::uint64_t window = dec_u64(env.arg(args, 2));
        if (window == 0)
            env.reject(Err::BadArguments, "challenge window must be positive");
        env.store(bytes_of("party_a"), enc_address(env.caller()));
        env.store(bytes_of("party_b"), enc_address(party_b));
        env.store(bytes_of("deposit_a"), enc_u64(env.attached_value()));
        env.store(bytes_of("deposit_b"), enc_u64(expected_b));
        env.store(bytes_of("window"), enc_u64(window));
        env.store(bytes_of("status"), Bytes{kAwaitingJoin});
    };

    b.functions.push_back(
        {"join", PermissionGuard::custom("party B"),
         [](CallEnv& env, const std::vector<Bytes>&) -> Bytes {
             Address party_b = dec_address(env.load_or_reject(bytes_of("party_b"), Err::BadArguments));
             if (env.caller() != party_b)
                 env.reject(Err::NotAuthorized, "only party B joins");
             if (status_of(env) != kAwaitingJoin)
                 env.reject(Err::NotOpen, "channel already joined");
             std::uint64_t expected =
                 dec_u64(env.load_or_reject(bytes_of("deposit_b"), Err::BadArguments));
             if (env.attached_value() != expected)
                 env.reject(Err::BadArguments, "join must attach the agreed deposit");
             env.store(bytes_of("status"), Bytes{kOpen});
             env.emit("ChannelOpened");
             return {};
         }});

    b.functions.push_back(
        {"close_cooperative", PermissionGuard::custom("channel parties"),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             require_party(env);
             if (status_of(env) != kOpen)
                 env.reject(Err::NotOpen);
             ChannelState s = checked_state(env, args);
             settle(env, s.balance_a, s.balance_b, "Closed");
             return enc_u64(s.seq);
         }});

    b.functions.push_back(
        {"dispute_open", PermissionGuard::custom("channel parties"),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             require_party(env);
             if (status_of(env) != kOpen)
                 env.reject(Err::NotOpen);
             ChannelState s = checked_state(env, args);
             std::uint64_t window = dec_u64(env.load_or_reject(bytes_of("window"), Err::BadArguments));
             std::uint64_t deadline = env.block_height() + window;
             env.store(bytes_of("status"), Bytes{kDisputing});
             env.store(bytes_of("cand_seq"), enc_u64(s.seq));
             env.store(bytes_of("cand_a"), enc_u64(s.balance_a));
             env.store(bytes_of("cand_b"), enc_u64(s.balance_b));
             env.store(bytes_of("deadline"), enc_u64(deadline));
             env.emit("DisputeOpened", Encoder{}.u64(s.seq).u64(deadline).take());
             return enc_u64(deadline);
         }});

    b.functions.push_back(
        {"challenge", PermissionGuard::custom("channel parties"),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             require_party(env);
             if (status_of(env) != kDisputing)
                 env.reject(Err::NotOpen, "no dispute in progress");
             std::uint64_t deadline =
                 dec_u64(env.load_or_reject(bytes_of("deadline"), Err::BadArguments));
             if (env.block_height() >= deadline)
                 env.reject(Err::DeadlinePassed);
             ChannelState s = checked_state(env, args);
             std::uint64_t cand_seq =
                 dec_u64(env.load_or_reject(bytes_of("cand_seq"), Err::BadArguments));
             if (s.seq <= cand_seq)
                 env.reject(Err::StaleState);
             env.store(bytes_of("cand_seq"), enc_u64(s.seq));
             env.store(bytes_of("cand_a"), enc_u64(s.balance_a));
             env.store(bytes_of("cand_b"), enc_u64(s.balance_b));
             env.emit("Challenged", enc_u64(s.seq));
             return {};
         }});

    b.functions.push_back(
        {"finalize", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>&) -> Bytes {
             if (status_of(env) != kDisputing)
                 env.reject(Err::NotOpen, "no dispute in progress");
             std::uint64_t deadline =
                 dec_u64(env.load_or_reject(bytes_of("deadline"), Err::BadArguments));
             if (env.block_height() < deadline)
                 env.reject(Err::TooEarly);
             std::uint64_t pay_a = dec_u64(env.load_or_reject(bytes_of("cand_a"), Err::BadArguments));
             std::uint64_t pay_b = dec_u64(env.load_or_reject(bytes_of("cand_b"), Err::BadArguments));
             std::uint64_t seq = dec_u64(env.load_or_reject(bytes_of("cand_seq"), Err::BadArguments));
             settle(env, pay_a, pay_b, "Finalized");
             return enc_u64(seq);
         }});

    b.views.push_back({"status", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("status"), Err::NoSuchKey);
                       }});

    b.views.push_back({"parties", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           Encoder enc;
                           enc.raw(env.load_or_throw(bytes_of("party_a"), Err::NoSuchKey));
                           enc.raw(env.load_or_throw(bytes_of("party_b"), Err::NoSuchKey));
                           return enc.take();
                       }});

    b.views.push_back({"deposits", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           Encoder enc;
                           enc.raw(env.load_or_throw(bytes_of("deposit_a"), Err::NoSuchKey));
                           enc.raw(env.load_or_throw(bytes_of("deposit_b"), Err::NoSuchKey));
                           return enc.take();
                       }});

    b.views.push_back({"candidate_seq", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("cand_seq"), Err::NoSuchKey);
                       }});

    b.views.push_back({"deadline", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("deadline"), Err::NoSuchKey);
                       }});

    return b;
}

} // namespace chainsim::builtin
