// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <optional>
#include <set>
#include <string>

#include <chainsim/bytes.hpp>
#include <chainsim/serial.hpp>

namespace chainsim {

/// Embedded permission guard, evaluated before any state change of the
/// guarded function. Every state-mutating contract function must declare
/// one explicitly; `Unspecified` fails behavior registration, so "anyone"
/// is always a conscious choice.
struct PermissionGuard {
    enum class Kind : std::uint8_t {
        Unspecified = 0,
        Anyone = 1,
        OwnerOnly = 2,
        AddressSet = 3,
        /// Allowed set is read from the contract's own storage under
        /// `storage_key` (encoded address vector), so it can change at
        /// runtime (multisig owner rotation and the like).
        StorageSet = 4,
        /// The function body performs its own caller check before touching
        /// state. Declaring it keeps the guard audit explicit.
        Custom = 5,
    };

    Kind kind = Kind::Unspecified;
    std::set<Address> allowed;
    Bytes storage_key;
    std::string custom_rule;

    static PermissionGuard anyone()
    {
        PermissionGuard g;
        g.kind = Kind::Anyone;
        return g;
    }

    static PermissionGuard owner_only()
    {
        PermissionGuard g;
        g.kind = Kind::OwnerOnly;
        return g;
    }

    static PermissionGuard address_set(std::set<Address> addrs)
    {
        PermissionGuard g;
        g.kind = Kind::AddressSet;
        g.allowed = std::move(addrs);
        return g;
    }

    static PermissionGuard storage_set(Bytes key)
    {
        PermissionGuard g;
        g.kind = Kind::StorageSet;
        g.storage_key = std::move(key);
        return g;
    }

    static PermissionGuard custom(std::string rule)
    {
        PermissionGuard g;
        g.kind = Kind::Custom;
        g.custom_rule = std::move(rule);
        return g;
    }

    bool declared() const { return kind != Kind::Unspecified; }
};

inline void encode_guard(Encoder& enc, const PermissionGuard& g)
{
    enc.u8(static_cast<std::uint8_t>(g.kind));
    std::vector<Address> addrs(g.allowed.begin(), g.allowed.end());
    enc.address_vec(addrs);
    enc.var_bytes(g.storage_key);
    enc.str(g.custom_rule);
}

inline PermissionGuard decode_guard(Decoder& dec)
{
    PermissionGuard g;
    g.kind = static_cast<PermissionGuard::Kind>(dec.u8());
    auto addrs = dec.address_vec();
    g.allowed = std::set<Address>(addrs.begin(), addrs.end());
    g.storage_key = dec.var_bytes();
    g.custom_rule = dec.str();
    return g;
}

inline std::string guard_kind_name(PermissionGuard::Kind k)
{
    switch (k) {
    case PermissionGuard::Kind::Unspecified: return "unspecified";
    case PermissionGuard::Kind::Anyone: return "anyone";
    case PermissionGuard::Kind::OwnerOnly: return "owner-only";
    case PermissionGuard::Kind::AddressSet: return "address-set";
    case PermissionGuard::Kind::StorageSet: return "storage-set";
    case PermissionGuard::Kind::Custom: return "custom";
    }
    return "unspecified";
}

} // namespace chainsim
