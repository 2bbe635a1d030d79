// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <chainsim/bytes.hpp>
#include <chainsim/chain.hpp>
#include <chainsim/contracts/builtins.hpp>
#include <chainsim/crypto.hpp>
#include <chainsim/errors.hpp>
#include <chainsim/guard.hpp>
#include <chainsim/patterns/data.hpp>
#include <chainsim/patterns/oracle.hpp>
#include <chainsim/patterns/security.hpp>
#include <chainsim/patterns/structural.hpp>
#include <chainsim/profile.hpp>
#include <chainsim/receipt.hpp>
#include <chainsim/runtime.hpp>
#include <chainsim/scenario.hpp>
#include <chainsim/serial.hpp>
#include <chainsim/tx.hpp>
