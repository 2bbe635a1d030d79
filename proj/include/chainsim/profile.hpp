// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include <chainsim/errors.hpp>

namespace chainsim {

/// Gas cost table. Values are Ethereum-inspired round numbers; they only
/// need to be consistent within a run and are configurable per profile.
struct GasSchedule {
    std::uint64_t base_tx = 21000;
    std::uint64_t per_payload_byte = 68;
    std::uint64_t storage_write = 20000;
    std::uint64_t storage_read = 200;
    std::uint64_t contract_call = 700;
};

/// Chain timing and capacity parameters. `block_interval_ticks` and
/// `confirmation_depth` drive the commit latency of the simulation; the
/// byte and gas limits bound what fits into transactions and blocks.
struct ChainProfile {
    std::string name;
    std::uint64_t block_interval_ticks = 0;
    std::uint64_t confirmation_depth = 0;
    std::uint64_t block_gas_limit = 0;
    std::uint64_t max_tx_bytes = 0;
    std::uint64_t max_embed_bytes = 0;

    GasSchedule gas;

    /// When set, only these behaviors may be deployed or called on the
    /// profile (the script-only chain flavor).
    std::optional<std::set<std::string>> allowed_code_ids;

    void validate() const
    {
        if (name.empty())
            throw ChainError(Err::ParseError, "profile name must be nonempty");
        if (block_interval_ticks == 0 || confirmation_depth == 0 || block_gas_limit == 0 ||
            max_tx_bytes == 0 || max_embed_bytes == 0)
            throw ChainError(Err::ParseError, "profile numeric fields must be strictly positive");
    }
};

inline ChainProfile ethereum_like_profile()
{
    ChainProfile p;
    p.name = "ethereum-like";
    p.block_interval_ticks = 14;
    p.confirmation_depth = 11;
    p.block_gas_limit = 8'000'000;
    p.max_tx_bytes = 131'072;
    // Embeds are bounded by gas, not by a byte cap.
    p.max_embed_bytes = std::numeric_limits<std::uint64_t>::max();
    return p;
}

inline ChainProfile bitcoin_like_profile()
{
    ChainProfile p;
    p.name = "bitcoin-like";
    p.block_interval_ticks = 600;
    p.confirmation_depth = 5;
    p.block_gas_limit = 4'000'000;
    p.max_tx_bytes = 100'000;
    p.max_embed_bytes = 40;
    p.allowed_code_ids = std::set<std::string>{"hashlock-escrow", "multisig-wallet"};
    return p;
}

inline std::optional<ChainProfile> builtin_profile(const std::string& name)
{
    if (name == "ethereum-like")
        return ethereum_like_profile();
    if (name == "bitcoin-like")
        return bitcoin_like_profile();
    return std::nullopt;
}

/// Loads a profile from its JSON form. The document must carry exactly the
/// keys name, block_interval_ticks, confirmation_depth, block_gas_limit,
/// max_tx_bytes and max_embed_bytes.
inline ChainProfile profile_from_json(const nlohmann::json& j)
{
    static const std::set<std::string> expected = {
        "name",           "block_interval_ticks", "confirmation_depth",
        "block_gas_limit", "max_tx_bytes",         "max_embed_bytes"};

    if (!j.is_object())
        throw ChainError(Err::ParseError, "profile document must be a JSON object");
    for (const auto& key : expected)
        if (!j.contains(key))
            throw ChainError(Err::ParseError, "profile missing key: " + key);
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!expected.count(it.key()))
            throw ChainError(Err::ParseError, "profile has unexpected key: " + it.key());

    ChainProfile p;
    try {
        p.name = j.at("name").get<std::string>();
        p.block_interval_ticks = j.at("block_interval_ticks").get<std::uint64_t>();
        p.confirmation_depth = j.at("confirmation_depth").get<std::uint64_t>();
        p.block_gas_limit = j.at("block_gas_limit").get<std::uint64_t>();
        p.max_tx_bytes = j.at("max_tx_bytes").get<std::uint64_t>();
        p.max_embed_bytes = j.at("max_embed_bytes").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ChainError(Err::ParseError, std::string("profile field: ") + e.what());
    }
    p.validate();
    return p;
}

} // namespace chainsim
