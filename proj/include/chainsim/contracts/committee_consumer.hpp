// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <map>

#include <chainsim/contracts/oracle_consumer.hpp>
#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// Consumer fed by an oracle committee. Each member reports per query
// (latest report wins); resolution aggregates by simple majority of the
// committee size or by greatest stake weight once the quorum is reached.
// An exact tie after the reporting window stays unresolved. The first
// successful resolution is cached and final.

namespace committee_detail {

    inline constexpr std::uint8_t kModeMajority = 0;
    inline constexpr std::uint8_t kModeStake = 1;

    inline constexpr std::uint8_t kPending = 0;
    inline constexpr std::uint8_t kResolvedStatus = 1;
    inline constexpr std::uint8_t kUnresolved = 2;

    struct Report {
        Address oracle;
        Bytes value;
        std::uint64_t weight = 0; // reporter balance snapshot (stake mode)
    };

    inline Bytes reports_key(const std::string& query) { return bytes_of("r/" + query); }
    inline Bytes resolved_key(const std::string& query) { return bytes_of("res/" + query); }

    inline Bytes encode_reports(const std::vector<Report>& reports)
    {
        Encoder enc;
        enc.vec(reports, [](Encoder& e, const Report& r) {
            e.address(r.oracle).var_bytes(r.value).u64(r.weight);
        });
        return enc.take();
    }

    inline std::vector<Report> decode_reports(const Bytes& b)
    {
        Decoder dec(b);
        auto count = dec.u32();
        std::vector<Report> out;
        out.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            Report r;
            r.oracle = dec.address();
            r.value = dec.var_bytes();
            r.weight = dec.u64();
            out.push_back(r);
        }
        return out;
    }

    struct Aggregation {
        std::uint8_t status = kPending;
        Bytes value;
    };

    /// Pure aggregation rule over the current report set.
    inline Aggregation aggregate(const std::vector<Report>& reports, std::size_t committee_size,
                                 std::uint64_t quorum, std::uint8_t mode, bool window_over)
    {
        Aggregation out;
        std::map<Bytes, std::uint64_t> tally;
        for (const auto& r : reports)
            tally[r.value] += (mode == kModeStake) ? r.weight : 1;

        if (mode == kModeMajority) {
            std::uint64_t need = committee_size / 2 + 1;
            for (const auto& [value, count] : tally) {
                if (count >= need) {
                    out.status = kResolvedStatus;
                    out.value = value;
                    return out;
                }
            }
            out.status = window_over ? kUnresolved : kPending;
            return out;
        }

        // Stake weighting only settles once every member reported or the
        // window closed; before that a later report could still flip the
        // maximum.
        bool can_settle = reports.size() >= quorum &&
                          (window_over || reports.size() == committee_size);
        if (!can_settle) {
            out.status = window_over ? kUnresolved : kPending;
            return out;
        }
        std::uint64_t best = 0;
        bool tie = true;
        Bytes best_value;
        for (const auto& [value, weight] : tally) {
            if (weight > best) {
                best = weight;
                best_value = value;
                tie = false;
            } else if (weight == best) {
                tie = true;
            }
        }
        if (!tie && best > 0) {
            out.status = kResolvedStatus;
            out.value = best_value;
        } else {
            out.status = window_over ? kUnresolved : kPending;
        }
        return out;
    }

} // namespace committee_detail

inline Behavior committee_consumer_behavior()
{
    using namespace committee_detail;
    Behavior b;
    b.code_id = "committee-consumer";

    // args: [members address vec, u64 quorum, u8 mode, u64 window length,
    // optional bet config]; attached value funds the payout pot.
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        Decoder dec(env.arg(args, 0));
        auto members = dec.address_vec();
        std::uint64_t quorum = dec_u64(env.arg(args, 1));
        std::uint8_t mode = env.arg(args, 2).at(0);
        std::uint64_t window = dec_u64(env.arg(args, 3));
        if (members.empty() || quorum == 0 || quorum > members.size())
            env.reject(Err::BadArguments, "need 1 <= quorum <= |members|");
        if (mode == kModeMajority && quorum < members.size() / 2 + 1)
            env.reject(Err::BadArguments, "majority mode needs quorum >= floor(N/2)+1");
        if (mode > kModeStake)
            env.reject(Err::BadArguments, "unknown aggregation mode");
        if (window == 0)
            env.reject(Err::BadArguments, "window must be positive");
        env.store(bytes_of("members"), Encoder{}.address_vec(members).take());
        env.store(bytes_of("quorum"), enc_u64(quorum));
        env.store(bytes_of("mode"), Bytes{mode});
        env.store(bytes_of("window_end"), enc_u64(env.block_height() + window));
        if (args.size() > 4 && !args[4].empty())
            env.store(bytes_of("bet"), env.arg(args, 4));
    };

    b.functions.push_back(
        {"report", PermissionGuard::custom("committee members"),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::string query = string_of(env.arg(args, 0));
             const Bytes& value = env.arg(args, 1);
             Decoder dec(env.load_or_reject(bytes_of("members"), Err::BadArguments));
             auto members = dec.address_vec();
             bool member = false;
             for (const auto& m : members)
                 member = member || m == env.caller();
             if (!member)
                 env.reject(Err::NotInCommittee);
             std::uint64_t window_end =
                 dec_u64(env.load_or_reject(bytes_of("window_end"), Err::BadArguments));
             if (env.block_height() >= window_end)
                 env.reject(Err::WindowClosed);

             auto raw = env.load(reports_key(query));
             std::vector<Report> reports = raw ? decode_reports(*raw) : std::vector<Report>{};
             std::uint64_t weight = env.balance_of(env.caller());
             bool replaced = false;
             for (auto& r : reports) {
                 if (r.oracle == env.caller()) { // latest report wins
                     r.value = value;
                     r.weight = weight;
                     replaced = true;
                 }
             }
             if (!replaced)
                 reports.push_back(Report{env.caller(), value, weight});
             env.store(reports_key(query), encode_reports(reports));
             env.emit("Reported", Encoder{}.str(query).address(env.caller()).take());
             return {};
         }});

    b.functions.push_back(
        {"resolve", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::string query = string_of(env.arg(args, 0));
             auto reply = [](std::uint8_t status, const Bytes& value) {
                 Encoder enc;
                 enc.u8(status).var_bytes(value);
                 return enc.take();
             };
             if (auto cached = env.load(resolved_key(query)))
                 return reply(kResolvedStatus, *cached);

             Decoder dec(env.load_or_reject(bytes_of("members"), Err::BadArguments));
             auto members = dec.address_vec();
             std::uint64_t quorum = dec_u64(env.load_or_reject(bytes_of("quorum"), Err::BadArguments));
             std::uint8_t mode = env.load_or_reject(bytes_of("mode"), Err::BadArguments).at(0);
             std::uint64_t window_end =
                 dec_u64(env.load_or_reject(bytes_of("window_end"), Err::BadArguments));
             auto raw = env.load(reports_key(query));
             std::vector<Report> reports = raw ? decode_reports(*raw) : std::vector<Report>{};

             Aggregation agg = aggregate(reports, members.size(), quorum, mode,
                                         env.block_height() >= window_end);
             if (agg.status == kResolvedStatus) {
                 env.store(resolved_key(query), agg.value);
                 env.emit("Resolved", Encoder{}.str(query).var_bytes(agg.value).take());
             }
             return reply(agg.status, agg.value);
         }});

    b.functions.push_back(
        {"settle", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>&) -> Bytes {
             oracle_detail::BetConfig bet =
                 oracle_detail::decode_bet(env.load_or_reject(bytes_of("bet"), Err::BadArguments));
             auto resolved = env.load(resolved_key(bet.query));
             if (!resolved)
                 env.reject(Err::NoSuchKey, "query not resolved: " + bet.query);
             oracle_detail::settle_bet(env, *resolved);
             return {};
         }});

    b.views.push_back({"reports", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           auto v = env.load(committee_detail::reports_key(string_of(args.at(0))));
                           return v ? *v : Encoder{}.u32(0).take();
                       }});

    b.views.push_back({"members", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return env.load_or_throw(bytes_of("members"), Err::NoSuchKey);
                       }});

    b.views.push_back({"resolved_value",
                       [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           return env.load_or_throw(
                               committee_detail::resolved_key(string_of(args.at(0))),
                               Err::NoSuchKey);
                       }});

    b.views.push_back({"settled", [](const ViewEnv& env, const std::vector<Bytes>&) -> Bytes {
                           return enc_bool(env.load(bytes_of("settled")).has_value());
                       }});

    return b;
}

} // namespace chainsim::builtin
