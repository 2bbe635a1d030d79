// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/crypto.hpp>
#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

// Stake-weighted voting over disputable proposals. One vote counts per
// address (a re-cast replaces the previous one and releases its stake).
// After the window, a strict weight maximum resolves the proposal; an
// exact tie extends the window once by its original length, a second tie
// is terminal. All locked stakes return at a terminal status.
//
// A commit/reveal pair supports the secret-vote variant: the commitment is
// a digest over (alternative index, salt) and only revealed votes count.

namespace voting_detail {

    inline constexpr std::uint8_t kOpen = 0;
    inline constexpr std::uint8_t kResolved = 1;
    inline constexpr std::uint8_t kTiedFinal = 2;

    struct Vote {
        Address voter;
        std::uint32_t alternative = 0;
        std::uint64_t stake = 0;
    };

    struct Commit {
        Address voter;
        Hash256 digest;
        std::uint64_t stake = 0;
    };

    struct ProposalRecord {
        std::string question;
        std::uint64_t window_end = 0;
        std::uint64_t window_len = 0;
        bool extended = false;
        std::uint8_t status = kOpen;
        Bytes resolved_value;
    };

    inline Bytes rec_key(std::uint64_t id)
    {
        Bytes k = bytes_of("p/");
        append(k, enc_u64(id));
        return k;
    }

    inline Bytes alts_key(std::uint64_t id)
    {
        Bytes k = rec_key(id);
        append(k, bytes_of("/alts"));
        return k;
    }

    inline Bytes votes_key(std::uint64_t id)
    {
        Bytes k = rec_key(id);
        append(k, bytes_of("/votes"));
        return k;
    }

    inline Bytes commits_key(std::uint64_t id)
    {
        Bytes k = rec_key(id);
        append(k, bytes_of("/commits"));
        return k;
    }

    inline Bytes question_key(const std::string& q) { return bytes_of("q/" + q); }

    inline Bytes encode_record(const ProposalRecord& r)
    {
        Encoder enc;
        enc.str(r.question).u64(r.window_end).u64(r.window_len).boolean(r.extended).u8(r.status);
        enc.var_bytes(r.resolved_value);
        return enc.take();
    }

    inline ProposalRecord decode_record(const Bytes& b)
    {
        Decoder dec(b);
        ProposalRecord r;
        r.question = dec.str();
        r.window_end = dec.u64();
        r.window_len = dec.u64();
        r.extended = dec.boolean();
        r.status = dec.u8();
        r.resolved_value = dec.var_bytes();
        return r;
    }

    inline Bytes encode_votes(const std::vector<Vote>& votes)
    {
        Encoder enc;
        enc.vec(votes, [](Encoder& e, const Vote& v) {
            e.address(v.voter).u32(v.alternative).u64(v.stake);
        });
        return enc.take();
    }

    inline std::vector<Vote> decode_votes(const Bytes& b)
    {
        Decoder dec(b);
        auto count = dec.u32();
        std::vector<Vote> out;
        out.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            Vote v;
            v.voter = dec.address();
            v.alternative = dec.u32();
            v.stake = dec.u64();
            out.push_back(v);
        }
        return out;
    }

    inline Bytes encode_commits(const std::vector<Commit>& commits)
    {
        Encoder enc;
        enc.vec(commits, [](Encoder& e, const Commit& c) {
            e.address(c.voter).hash(c.digest).u64(c.stake);
        });
        return enc.take();
    }

    inline std::vector<Commit> decode_commits(const Bytes& b)
    {
        Decoder dec(b);
        auto count = dec.u32();
        std::vector<Commit> out;
        out.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            Commit c;
            c.voter = dec.address();
            c.digest = dec.hash();
            c.stake = dec.u64();
            out.push_back(c);
        }
        return out;
    }

    inline ProposalRecord load_record(CallEnv& env, std::uint64_t id)
    {
        auto raw = env.load(rec_key(id));
        if (!raw)
            env.reject(Err::NoSuchProposal, std::to_string(id));
        return decode_record(*raw);
    }

    inline std::vector<Bytes> load_alts(CallEnv& env, std::uint64_t id)
    {
        auto raw = env.load(alts_key(id));
        if (!raw)
            return {};
        Decoder dec(*raw);
        return dec.bytes_vec();
    }

    inline void release_stakes(CallEnv& env, std::uint64_t id)
    {
        auto raw = env.load(votes_key(id));
        if (raw) {
            for (const auto& v : decode_votes(*raw))
                if (v.stake > 0)
                    env.pay(v.voter, v.stake);
        }
        // Unrevealed commitments are returned as well; the choice inside
        // them never counted.
        auto craw = env.load(commits_key(id));
        if (craw) {
            for (const auto& c : decode_commits(*craw))
                if (c.stake > 0)
                    env.pay(c.voter, c.stake);
        }
    }

    inline Hash256 commitment_digest(std::uint32_t alternative, const Bytes& salt)
    {
        Encoder enc;
        enc.u32(alternative).var_bytes(salt);
        return hash_data(enc.take());
    }

} // namespace voting_detail

inline Behavior voting_behavior()
{
    using namespace voting_detail;
    Behavior b;
    b.code_id = "voting";

    // args: [u64 window length in blocks]
    b.constructor = [](CallEnv& env, const std::vector<Bytes>& args) {
        std::uint64_t window = dec_u64(env.arg(args, 0));
        if (window == 0)
            env.reject(Err::BadArguments, "window length must be positive");
        env.store(bytes_of("window_len"), enc_u64(window));
        env.store(bytes_of("count"), enc_u64(0));
    };

    // propose(question, alternative) -> proposal id. A new question opens
    // a proposal; a known open question gains the alternative (identical
    // byte values dedup).
    b.functions.push_back(
        {"propose", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::string question = string_of(env.arg(args, 0));
             const Bytes& alternative = env.arg(args, 1);

             if (auto existing = env.load(question_key(question))) {
                 std::uint64_t id = dec_u64(*existing);
                 ProposalRecord rec = load_record(env, id);
                 if (rec.status != kOpen || env.block_height() >= rec.window_end)
                     env.reject(Err::WindowClosed);
                 auto alts = load_alts(env, id);
                 for (const auto& a : alts)
                     if (a == alternative)
                         return enc_u64(id); // already proposed
                 alts.push_back(alternative);
                 env.store(alts_key(id), Encoder{}.bytes_vec(alts).take());
                 env.emit("AlternativeAdded", enc_u64(id));
                 return enc_u64(id);
             }

             std::uint64_t id = dec_u64(env.load_or_reject(bytes_of("count"), Err::BadArguments));
             env.store(bytes_of("count"), enc_u64(id + 1));
             std::uint64_t window =
                 dec_u64(env.load_or_reject(bytes_of("window_len"), Err::BadArguments));
             ProposalRecord rec;
             rec.question = question;
             rec.window_len = window;
             rec.window_end = env.block_height() + window;
             env.store(rec_key(id), encode_record(rec));
             env.store(alts_key(id), Encoder{}.bytes_vec({alternative}).take());
             env.store(question_key(question), enc_u64(id));
             env.emit("ProposalCreated", Encoder{}.u64(id).str(question).take());
             return enc_u64(id);
         }});

    // cast(id, alternative index); the stake is the attached value. A
    // re-cast by the same address replaces the prior vote and releases its
    // stake, so only the most recent vote counts.
    b.functions.push_back(
        {"cast", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::uint64_t id = dec_u64(env.arg(args, 0));
             std::uint32_t alt = static_cast<std::uint32_t>(dec_u64(env.arg(args, 1)));
             ProposalRecord rec = load_record(env, id);
             if (rec.status != kOpen || env.block_height() >= rec.window_end)
                 env.reject(Err::WindowClosed);
             auto alts = load_alts(env, id);
             if (alt >= alts.size())
                 env.reject(Err::NoSuchAlternative);

             auto raw = env.load(votes_key(id));
             std::vector<Vote> votes = raw ? decode_votes(*raw) : std::vector<Vote>{};
             for (auto& v : votes) {
                 if (v.voter == env.caller()) {
                     if (v.stake > 0)
                         env.pay(v.voter, v.stake); // release the replaced stake
                     v.alternative = alt;
                     v.stake = env.attached_value();
                     env.store(votes_key(id), encode_votes(votes));
                     env.emit("VoteCast", Encoder{}.u64(id).address(v.voter).u32(alt).take());
                     return {};
                 }
             }
             votes.push_back(Vote{env.caller(), alt, env.attached_value()});
             env.store(votes_key(id), encode_votes(votes));
             env.emit("VoteCast", Encoder{}.u64(id).address(env.caller()).u32(alt).take());
             return {};
         }});

    // Secret-vote variant: commit a digest of (alternative, salt) now,
    // reveal before the window closes.
    b.functions.push_back(
        {"commit", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::uint64_t id = dec_u64(env.arg(args, 0));
             Hash256 digest = dec_hash(env.arg(args, 1));
             ProposalRecord rec = load_record(env, id);
             if (rec.status != kOpen || env.block_height() >= rec.window_end)
                 env.reject(Err::WindowClosed);
             auto raw = env.load(commits_key(id));
             std::vector<Commit> commits = raw ? decode_commits(*raw) : std::vector<Commit>{};
             for (auto& c : commits) {
                 if (c.voter == env.caller()) {
                     if (c.stake > 0)
                         env.pay(c.voter, c.stake);
                     c.digest = digest;
                     c.stake = env.attached_value();
                     env.store(commits_key(id), encode_commits(commits));
                     return {};
                 }
             }
             commits.push_back(Commit{env.caller(), digest, env.attached_value()});
             env.store(commits_key(id), encode_commits(commits));
             env.emit("VoteCommitted", Encoder{}.u64(id).address(env.caller()).take());
             return {};
         }});

    b.functions.push_back(
        {"reveal", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::uint64_t id = dec_u64(env.arg(args, 0));
             std::uint32_t alt = static_cast<std::uint32_t>(dec_u64(env.arg(args, 1)));
             const Bytes& salt = env.arg(args, 2);
             ProposalRecord rec = load_record(env, id);
             if (rec.status != kOpen || env.block_height() >= rec.window_end)
                 env.reject(Err::WindowClosed);
             auto raw = env.load(commits_key(id));
             std::vector<Commit> commits = raw ? decode_commits(*raw) : std::vector<Commit>{};
             for (std::size_t i = 0; i < commits.size(); ++i) {
                 if (commits[i].voter != env.caller())
                     continue;
                 if (commitment_digest(alt, salt) != commits[i].digest)
                     env.reject(Err::WrongPreimage, "reveal does not match commitment");
                 auto alts = load_alts(env, id);
                 if (alt >= alts.size())
                     env.reject(Err::NoSuchAlternative);
                 std::uint64_t stake = commits[i].stake;
                 commits.erase(commits.begin() + i);
                 env.store(commits_key(id), encode_commits(commits));
                 auto vraw = env.load(votes_key(id));
                 std::vector<Vote> votes = vraw ? decode_votes(*vraw) : std::vector<Vote>{};
                 for (auto& v : votes) {
                     if (v.voter == env.caller()) {
                         if (v.stake > 0)
                             env.pay(v.voter, v.stake);
                         v.alternative = alt;
                         v.stake = stake;
                         env.store(votes_key(id), encode_votes(votes));
                         return {};
                     }
                 }
                 votes.push_back(Vote{env.caller(), alt, stake});
                 env.store(votes_key(id), encode_votes(votes));
                 env.emit("VoteRevealed", Encoder{}.u64(id).address(env.caller()).take());
                 return {};
             }
             env.reject(Err::NoSuchKey, "no commitment from caller");
         }});

    // tally(id) -> status. Drives the post-window state machine: resolve,
    // extend once on a tie, then terminal tie; stakes release on terminal.
    b.functions.push_back(
        {"tally", PermissionGuard::anyone(),
         [](CallEnv& env, const std::vector<Bytes>& args) -> Bytes {
             std::uint64_t id = dec_u64(env.arg(args, 0));
             ProposalRecord rec = load_record(env, id);

             auto reply = [](std::uint8_t status, const Bytes& value, bool extended) {
                 Encoder enc;
                 enc.u8(status).var_bytes(value).boolean(extended);
                 return enc.take();
             };

             if (rec.status != kOpen)
                 return reply(rec.status, rec.resolved_value, rec.extended);
             if (env.block_height() < rec.window_end)
                 return reply(kOpen, {}, rec.extended);

             auto alts = load_alts(env, id);
             std::vector<std::uint64_t> weight(alts.size(), 0);
             auto raw = env.load(votes_key(id));
             if (raw)
                 for (const auto& v : decode_votes(*raw))
                     weight[v.alternative] += v.stake;

             std::uint64_t best = 0;
             std::size_t best_idx = 0;
             bool tie = alts.empty();
             for (std::size_t i = 0; i < weight.size(); ++i) {
                 if (weight[i] > best) {
                     best = weight[i];
                     best_idx = i;
                     tie = false;
                 } else if (weight[i] == best && i != best_idx) {
                     tie = true;
                 }
             }

             if (!tie) {
                 rec.status = kResolved;
                 rec.resolved_value = alts[best_idx];
                 env.store(rec_key(id), encode_record(rec));
                 release_stakes(env, id);
                 env.emit("Resolved", Encoder{}.u64(id).var_bytes(rec.resolved_value).take());
                 return reply(kResolved, rec.resolved_value, rec.extended);
             }
             if (!rec.extended) {
                 rec.extended = true;
                 rec.window_end += rec.window_len;
                 env.store(rec_key(id), encode_record(rec));
                 env.emit("WindowExtended", enc_u64(id));
                 return reply(kTiedFinal, {}, true); // tied, one extension granted
             }
             rec.status = kTiedFinal;
             env.store(rec_key(id), encode_record(rec));
             release_stakes(env, id);
             env.emit("Tied", enc_u64(id));
             return reply(kTiedFinal, {}, true);
         }});

    b.views.push_back({"alternatives", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           return env.load_or_throw(voting_detail::alts_key(dec_u64(args.at(0))),
                                                    Err::NoSuchProposal);
                       }});

    b.views.push_back({"votes", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           auto v = env.load(voting_detail::votes_key(dec_u64(args.at(0))));
                           return v ? *v : Encoder{}.u32(0).take();
                       }});

    b.views.push_back({"proposal", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           return env.load_or_throw(voting_detail::rec_key(dec_u64(args.at(0))),
                                                    Err::NoSuchProposal);
                       }});

    b.views.push_back({"proposal_id_of", [](const ViewEnv& env, const std::vector<Bytes>& args) -> Bytes {
                           return env.load_or_throw(voting_detail::question_key(string_of(args.at(0))),
                                                    Err::NoSuchProposal);
                       }});

    return b;
}

} // namespace chainsim::builtin
