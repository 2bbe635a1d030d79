// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <chainsim/bytes.hpp>
#include <chainsim/errors.hpp>

namespace chainsim {

/// Contract event. Events are the only push-style output of execution;
/// off-chain actors observe receipts, they are never called back.
struct Event {
    Address contract;
    std::string name;
    Bytes payload;
};

struct ExecutionReceipt {
    Hash256 tx;
    bool success = false;
    std::uint64_t gas_used = 0;
    Bytes return_value;
    std::vector<Event> events;
    std::optional<Err> error;
    std::string error_detail;

    bool failed_with(Err e) const { return !success && error && *error == e; }

    const Event* find_event(const std::string& name) const
    {
        for (const auto& ev : events)
            if (ev.name == name)
                return &ev;
        return nullptr;
    }
};

} // namespace chainsim
