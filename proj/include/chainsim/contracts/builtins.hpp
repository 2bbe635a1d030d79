// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <memory>

#include <chainsim/contracts/channel.hpp>
#include <chainsim/contracts/committee_consumer.hpp>
#include <chainsim/contracts/deposit.hpp>
#include <chainsim/contracts/factory.hpp>
#include <chainsim/contracts/hashlock.hpp>
#include <chainsim/contracts/incentive_job.hpp>
#include <chainsim/contracts/kv_client.hpp>
#include <chainsim/contracts/kv_store.hpp>
#include <chainsim/contracts/multisig.hpp>
#include <chainsim/contracts/oracle_consumer.hpp>
#include <chainsim/contracts/pair_anchor.hpp>
#include <chainsim/contracts/registry.hpp>
#include <chainsim/contracts/token.hpp>
#include <chainsim/contracts/voting.hpp>
#include <chainsim/runtime.hpp>

namespace chainsim::builtin {

/// Registers every built-in behavior. Registration re-checks the guard
/// completeness rule for each of them.
inline std::shared_ptr<BehaviorRegistry> make_builtin_registry()
{
    auto registry = std::make_shared<BehaviorRegistry>();
    registry->add(token_behavior());
    registry->add(kv_store_behavior());
    registry->add(registry_behavior());
    registry->add(multisig_behavior());
    registry->add(hashlock_behavior());
    registry->add(channel_behavior());
    registry->add(deposit_escrow_behavior());
    registry->add(voting_behavior());
    registry->add(oracle_consumer_behavior());
    registry->add(committee_consumer_behavior());
    registry->add(factory_behavior());
    registry->add(pair_anchor_behavior());
    registry->add(incentive_job_behavior());
    registry->add(kv_client_behavior());
    return registry;
}

} // namespace chainsim::builtin

namespace chainsim {

/// Chain wired to the default runtime with all built-in behaviors.
inline Chain make_chain(ChainProfile profile)
{
    auto runtime = std::make_shared<Runtime>(builtin::make_builtin_registry());
    return Chain(std::move(profile), std::move(runtime));
}

inline Chain make_chain(const std::string& profile_name)
{
    auto p = builtin_profile(profile_name);
    if (!p)
        throw ChainError(Err::ParseError, "unknown profile: " + profile_name);
    return make_chain(*p);
}

} // namespace chainsim
