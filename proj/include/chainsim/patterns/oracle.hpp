// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include <chainsim/contracts/builtins.hpp>
#include <chainsim/patterns/data.hpp>

namespace chainsim {

// Centralized/decentralized oracles, stake-weighted voting and the reverse
// oracle. Oracles are off-chain actors; everything they do on-chain is an
// ordinary signed transaction.

/// Off-chain test double for "the real world". Facts are deterministic per
/// query; per-oracle overrides model faulty or lying oracles.
class ExternalWorld {
public:
    void set_fact(const std::string& query, Bytes value) { facts_[query] = std::move(value); }

    void set_override(const std::string& oracle, const std::string& query, Bytes value)
    {
        overrides_[oracle][query] = std::move(value);
    }

    /// What `oracle` observes for `query` — the override if one exists,
    /// the shared fact otherwise.
    Bytes view(const std::string& oracle, const std::string& query) const
    {
        if (auto oit = overrides_.find(oracle); oit != overrides_.end())
            if (auto qit = oit->second.find(query); qit != oit->second.end())
                return qit->second;
        auto it = facts_.find(query);
        if (it == facts_.end())
            throw ChainError(Err::NoSuchKey, "no fact for query: " + query);
        return it->second;
    }

    bool has_fact(const std::string& query) const { return facts_.count(query) > 0; }

    /// Fixture format: {"facts": {query: value}, "overrides": {oracle:
    /// {query: value}}}; values are UTF-8 strings.
    static ExternalWorld from_json(const nlohmann::json& j)
    {
        ExternalWorld world;
        if (j.contains("facts"))
            for (auto it = j.at("facts").begin(); it != j.at("facts").end(); ++it)
                world.set_fact(it.key(), bytes_of(it.value().get<std::string>()));
        if (j.contains("overrides"))
            for (auto oit = j.at("overrides").begin(); oit != j.at("overrides").end(); ++oit)
                for (auto qit = oit.value().begin(); qit != oit.value().end(); ++qit)
                    world.set_override(oit.key(), qit.key(),
                                       bytes_of(qit.value().get<std::string>()));
        return world;
    }

private:
    std::map<std::string, Bytes> facts_;
    std::map<std::string, std::map<std::string, Bytes>> overrides_;
};

// ---- centralized oracle ------------------------------------------------------

inline Address oracle_consumer_deploy(Chain& chain, const KeyPair& admin, Bytes bet_config = {},
                                      std::uint64_t pot = 0)
{
    DeployOptions opts;
    opts.value = pot;
    return deploy_contract(chain, admin, ContractCode{"oracle-consumer"}, {std::move(bet_config)},
                           opts);
}

inline ExecutionReceipt oracle_register(Chain& chain, const KeyPair& admin,
                                        const Address& consumer, const Address& oracle)
{
    return call_contract(chain, admin, consumer, "register_oracle", {enc_address(oracle)});
}

inline ExecutionReceipt oracle_inject(Chain& chain, const KeyPair& oracle,
                                      const Address& consumer, const std::string& query,
                                      const Bytes& value)
{
    return call_contract(chain, oracle, consumer, "inject", {bytes_of(query), value});
}

inline Bytes oracle_fact(const Chain& chain, const Address& consumer, const std::string& query)
{
    return query_state(chain, consumer, "fact", {bytes_of(query)});
}

// ---- decentralized oracle committee ---------------------------------------------

enum class Aggregation : std::uint8_t { Majority = 0, StakeWeighted = 1 };

inline Address committee_deploy(Chain& chain, const KeyPair& admin,
                                const std::vector<Address>& members, std::uint64_t quorum,
                                Aggregation mode, std::uint64_t window_blocks,
                                Bytes bet_config = {}, std::uint64_t pot = 0)
{
    DeployOptions opts;
    opts.value = pot;
    return deploy_contract(chain, admin, ContractCode{"committee-consumer"},
                           {Encoder{}.address_vec(members).take(), enc_u64(quorum),
                            Bytes{static_cast<std::uint8_t>(mode)}, enc_u64(window_blocks),
                            std::move(bet_config)},
                           opts);
}

inline ExecutionReceipt committee_report(Chain& chain, const KeyPair& oracle,
                                         const Address& consumer, const std::string& query,
                                         const Bytes& value)
{
    return call_contract(chain, oracle, consumer, "report", {bytes_of(query), value});
}

enum class CommitteeStatus : std::uint8_t { Pending = 0, Resolved = 1, Unresolved = 2 };

struct CommitteeOutcome {
    ExecutionReceipt receipt;
    CommitteeStatus status = CommitteeStatus::Pending;
    Bytes value;
};

inline CommitteeOutcome committee_resolve(Chain& chain, const KeyPair& caller,
                                          const Address& consumer, const std::string& query)
{
    CommitteeOutcome out;
    out.receipt = call_contract(chain, caller, consumer, "resolve", {bytes_of(query)});
    if (out.receipt.success) {
        Decoder dec(out.receipt.return_value);
        out.status = static_cast<CommitteeStatus>(dec.u8());
        out.value = dec.var_bytes();
    }
    return out;
}

// ---- voting -------------------------------------------------------------------

inline Address voting_deploy(Chain& chain, const KeyPair& deployer, std::uint64_t window_blocks)
{
    return deploy_contract(chain, deployer, ContractCode{"voting"}, {enc_u64(window_blocks)});
}

struct ProposeOutcome {
    ExecutionReceipt receipt;
    std::uint64_t proposal_id = 0;
};

inline ProposeOutcome vote_propose(Chain& chain, const KeyPair& proposer, const Address& voting,
                                   const std::string& question, const Bytes& alternative)
{
    ProposeOutcome out;
    out.receipt = call_contract(chain, proposer, voting, "propose", {bytes_of(question), alternative});
    if (out.receipt.success)
        out.proposal_id = dec_u64(out.receipt.return_value);
    return out;
}

inline ExecutionReceipt vote_cast(Chain& chain, const KeyPair& voter, const Address& voting,
                                  std::uint64_t proposal_id, std::uint64_t alternative_index,
                                  std::uint64_t stake)
{
    return call_contract(chain, voter, voting, "cast",
                         {enc_u64(proposal_id), enc_u64(alternative_index)}, stake);
}

inline ExecutionReceipt vote_commit(Chain& chain, const KeyPair& voter, const Address& voting,
                                    std::uint64_t proposal_id, std::uint64_t alternative_index,
                                    const Bytes& salt, std::uint64_t stake)
{
    Hash256 digest = builtin::voting_detail::commitment_digest(
        static_cast<std::uint32_t>(alternative_index), salt);
    return call_contract(chain, voter, voting, "commit", {enc_u64(proposal_id), enc_hash(digest)},
                         stake);
}

inline ExecutionReceipt vote_reveal(Chain& chain, const KeyPair& voter, const Address& voting,
                                    std::uint64_t proposal_id, std::uint64_t alternative_index,
                                    const Bytes& salt)
{
    return call_contract(chain, voter, voting, "reveal",
                         {enc_u64(proposal_id), enc_u64(alternative_index), salt});
}

enum class TallyStatus : std::uint8_t { Open = 0, Resolved = 1, Tied = 2 };

struct TallyOutcome {
    ExecutionReceipt receipt;
    TallyStatus status = TallyStatus::Open;
    Bytes value;
    bool extended = false;
};

inline TallyOutcome vote_tally(Chain& chain, const KeyPair& caller, const Address& voting,
                               std::uint64_t proposal_id)
{
    TallyOutcome out;
    out.receipt = call_contract(chain, caller, voting, "tally", {enc_u64(proposal_id)});
    if (out.receipt.success) {
        Decoder dec(out.receipt.return_value);
        out.status = static_cast<TallyStatus>(dec.u8());
        out.value = dec.var_bytes();
        out.extended = dec.boolean();
    }
    return out;
}

/// Current per-alternative weights (for oracles and assertions).
inline std::vector<std::uint64_t> vote_weights(const Chain& chain, const Address& voting,
                                               std::uint64_t proposal_id)
{
    Decoder alts(query_state(chain, voting, "alternatives", {enc_u64(proposal_id)}));
    std::vector<std::uint64_t> weights(alts.bytes_vec().size(), 0);
    Decoder dec(query_state(chain, voting, "votes", {enc_u64(proposal_id)}));
    auto count = dec.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
        dec.address();
        std::uint32_t alt = dec.u32();
        std::uint64_t stake = dec.u64();
        if (alt < weights.size())
            weights[alt] += stake;
    }
    return weights;
}

// ---- reverse oracle --------------------------------------------------------------

enum class ReverseStatus { Match, Mismatch, NotFound };

/// Off-chain validation of an external record against the chain: fetch
/// the referenced transaction, recompute the record digest, compare with
/// what the transaction anchored or injected. Read-only by construction.
inline ReverseStatus reverse_validate(const Chain& chain, const Hash256& tx_ref,
                                      const Bytes& external_record)
{
    const Transaction* tx = chain.find_tx(tx_ref);
    if (!tx)
        return ReverseStatus::NotFound;
    auto digest = anchored_digest_of(*tx);
    if (!digest)
        return ReverseStatus::Mismatch;
    return hash_data(external_record) == *digest ? ReverseStatus::Match : ReverseStatus::Mismatch;
}

} // namespace chainsim
