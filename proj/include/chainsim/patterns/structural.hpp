// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <optional>

#include <chainsim/contracts/builtins.hpp>

namespace chainsim {

// Contract registry, data contract, factory, incentive execution and
// security deposit operations.

struct RegistryOutcome {
    ExecutionReceipt receipt;
    std::uint64_t version = 0;
};

inline Address registry_deploy(Chain& chain, const KeyPair& deployer,
                               bool open_registration = true,
                               const std::vector<Address>& admins = {})
{
    return deploy_contract(chain, deployer, ContractCode{"registry"},
                           {Bytes{static_cast<std::uint8_t>(open_registration ? 1 : 0)},
                            Encoder{}.address_vec(admins).take()});
}

inline RegistryOutcome registry_register(Chain& chain, const KeyPair& caller,
                                         const Address& registry, const std::string& name,
                                         const Address& target)
{
    RegistryOutcome out;
    out.receipt =
        call_contract(chain, caller, registry, "register_name", {bytes_of(name), enc_address(target)});
    if (out.receipt.success)
        out.version = dec_u64(out.receipt.return_value);
    return out;
}

inline RegistryOutcome registry_update(Chain& chain, const KeyPair& caller,
                                       const Address& registry, const std::string& name,
                                       const Address& new_target)
{
    RegistryOutcome out;
    out.receipt = call_contract(chain, caller, registry, "update_name",
                                {bytes_of(name), enc_address(new_target)});
    if (out.receipt.success)
        out.version = dec_u64(out.receipt.return_value);
    return out;
}

/// Resolves a name; no version means latest. Throws NoSuchName or
/// NoSuchVersion.
inline Address registry_lookup(const Chain& chain, const Address& registry,
                               const std::string& name,
                               std::optional<std::uint64_t> version = std::nullopt)
{
    Bytes raw = version
        ? query_state(chain, registry, "lookup_version", {bytes_of(name), enc_u64(*version)})
        : query_state(chain, registry, "lookup", {bytes_of(name)});
    return dec_address(raw);
}

inline std::uint64_t registry_version_count(const Chain& chain, const Address& registry,
                                            const std::string& name)
{
    return dec_u64(query_state(chain, registry, "version_count", {bytes_of(name)}));
}

// ---- data contract -------------------------------------------------------

inline Address kv_deploy(Chain& chain, const KeyPair& deployer, std::uint8_t writer_mode = 0,
                         const std::vector<Address>& writers = {})
{
    return deploy_contract(chain, deployer, ContractCode{"kv-store"},
                           {Bytes{writer_mode}, Encoder{}.address_vec(writers).take()});
}

inline ExecutionReceipt kv_put(Chain& chain, const KeyPair& caller, const Address& store,
                               const Hash256& key, const Bytes& value)
{
    return call_contract(chain, caller, store, "put", {enc_hash(key), value});
}

inline Bytes kv_get(const Chain& chain, const Address& store, const Hash256& key)
{
    return query_state(chain, store, "get", {enc_hash(key)});
}

inline ExecutionReceipt kv_grant(Chain& chain, const KeyPair& owner, const Address& store,
                                 const Address& writer)
{
    return call_contract(chain, owner, store, "grant", {enc_address(writer)});
}

// ---- factory ---------------------------------------------------------------

struct InstantiateOutcome {
    ExecutionReceipt receipt;
    Address instance;
};

inline Address factory_deploy(Chain& chain, const KeyPair& deployer,
                              const std::vector<std::string>& templates,
                              const std::string& version = "1")
{
    std::vector<Bytes> encoded;
    for (const auto& t : templates)
        encoded.push_back(bytes_of(t));
    return deploy_contract(chain, deployer, ContractCode{"factory"},
                           {Encoder{}.bytes_vec(encoded).take(), bytes_of(version)});
}

inline InstantiateOutcome factory_instantiate(Chain& chain, const KeyPair& caller,
                                              const Address& factory,
                                              const std::string& template_id,
                                              std::vector<Bytes> params = {},
                                              std::uint64_t value = 0)
{
    InstantiateOutcome out;
    std::vector<Bytes> args{bytes_of(template_id)};
    for (auto& p : params)
        args.push_back(std::move(p));
    out.receipt = call_contract(chain, caller, factory, "instantiate", std::move(args), value);
    if (out.receipt.success)
        out.instance = dec_address(out.receipt.return_value);
    return out;
}

inline std::vector<Address> factory_instances(const Chain& chain, const Address& factory)
{
    Decoder dec(query_state(chain, factory, "instances"));
    return dec.address_vec();
}

// ---- incentive execution ---------------------------------------------------

inline Address incentive_deploy(Chain& chain, const KeyPair& deployer, std::uint64_t due_height,
                                std::uint64_t reward, const std::string& work,
                                const std::vector<Bytes>& expired_keys = {},
                                std::uint64_t funding = 0)
{
    DeployOptions opts;
    opts.value = funding;
    return deploy_contract(chain, deployer, ContractCode{"incentive-job"},
                           {enc_u64(due_height), enc_u64(reward), bytes_of(work),
                            Encoder{}.bytes_vec(expired_keys).take()},
                           opts);
}

inline ExecutionReceipt incentive_invoke(Chain& chain, const KeyPair& caller, const Address& job)
{
    return call_contract(chain, caller, job, "invoke");
}

// ---- security deposit --------------------------------------------------------

inline Address stake_deposit(Chain& chain, const KeyPair& depositor, const Address& beneficiary,
                             const std::vector<Address>& arbiters, std::uint64_t amount)
{
    if (chain.get_balance(address_of(depositor)) < amount)
        throw ChainError(Err::InsufficientBalance, "depositor cannot cover the stake");
    DeployOptions opts;
    opts.value = amount;
    return deploy_contract(chain, depositor, ContractCode{"deposit-escrow"},
                           {enc_address(beneficiary), Encoder{}.address_vec(arbiters).take()},
                           opts);
}

inline ExecutionReceipt resolve_deposit(Chain& chain, const KeyPair& arbiter,
                                        const Address& escrow, bool honest)
{
    return call_contract(chain, arbiter, escrow, "resolve", {enc_bool(honest)});
}

} // namespace chainsim
