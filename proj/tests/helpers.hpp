// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <random>
#include <string>
#include <vector>

#include <chainsim/chainsim.hpp>

namespace test_helpers {

using namespace chainsim;

struct Actor {
    KeyPair key;
    Address addr;
};

inline Actor make_actor(Chain& chain, const std::string& name, std::uint64_t funding = 0)
{
    auto [key, addr] = chain.create_account(bytes_of(name));
    if (funding > 0)
        chain.mint(addr, funding);
    return Actor{std::move(key), addr};
}

/// Everything the chain tracks as value: accounts, contracts and the fee
/// pot. Conservation means this always equals total minted supply.
inline std::uint64_t sum_all_value(const Chain& chain)
{
    std::uint64_t sum = chain.total_fees();
    for (const auto& [addr, acct] : chain.accounts())
        sum += acct.balance;
    for (const auto& [addr, inst] : chain.contracts())
        sum += inst.balance;
    return sum;
}

inline bool conserved(const Chain& chain)
{
    return sum_all_value(chain) == chain.total_minted();
}

/// Re-derives every parent hash from scratch and checks the chain links.
inline bool hash_chain_intact(const Chain& chain)
{
    const auto& blocks = chain.blocks();
    for (std::size_t h = 1; h < blocks.size(); ++h)
        if (blocks[h].parent_hash != block_hash(blocks[h - 1]))
            return false;
    return !blocks.empty() && blocks[0].parent_hash == Hash256{};
}

inline bool gas_bound_holds(const Chain& chain)
{
    for (const auto& b : chain.blocks())
        if (b.gas_used > chain.profile().block_gas_limit)
            return false;
    return true;
}

inline Bytes random_bytes(std::mt19937_64& rng, std::size_t n)
{
    Bytes out(n);
    for (auto& b : out)
        b = static_cast<std::uint8_t>(rng());
    return out;
}

} // namespace test_helpers
