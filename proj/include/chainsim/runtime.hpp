// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <chainsim/chain.hpp>

namespace chainsim {

class Runtime;
class CallEnv;
class ViewEnv;

/// Raised by contract code to abort the current transaction. The runtime
/// converts it into a failure receipt and the ledger rolls back all state
/// the transaction touched.
struct ContractReject {
    Err code;
    std::string detail;
};

using CallHandler = std::function<Bytes(CallEnv&, const std::vector<Bytes>&)>;
using ViewHandler = std::function<Bytes(const ViewEnv&, const std::vector<Bytes>&)>;
using CtorHandler = std::function<void(CallEnv&, const std::vector<Bytes>&)>;

/// State-mutating entry point. The guard is evaluated by the runtime
/// before the handler runs and before any state change.
struct FunctionSpec {
    std::string name;
    PermissionGuard guard;
    CallHandler handler;
};

/// Read-only entry point: no gas, no transaction, no state change.
struct ViewSpec {
    std::string name;
    ViewHandler handler;
};

/// A built-in contract behavior. Contracts are native state machines
/// selected by code id; there is no user-supplied bytecode.
struct Behavior {
    std::string code_id;
    std::string version = "1";
    CtorHandler constructor;
    std::vector<FunctionSpec> functions;
    std::vector<ViewSpec> views;

    const FunctionSpec* find_function(const std::string& name) const
    {
        for (const auto& f : functions)
            if (f.name == name)
                return &f;
        return nullptr;
    }

    const ViewSpec* find_view(const std::string& name) const
    {
        for (const auto& v : views)
            if (v.name == name)
                return &v;
        return nullptr;
    }
};

class BehaviorRegistry {
public:
    /// Registers a behavior, enforcing guard completeness: every mutating
    /// function must carry an explicit guard ("anyone" included), and
    /// "terminate" is reserved for the runtime.
    void add(Behavior behavior)
    {
        if (behavior.code_id.empty())
            throw std::logic_error("behavior needs a code id");
        if (behaviors_.count(behavior.code_id))
            throw std::logic_error("duplicate behavior: " + behavior.code_id);
        for (const auto& fn : behavior.functions) {
            if (!fn.guard.declared())
                throw std::logic_error("behavior " + behavior.code_id + " function " + fn.name +
                                       " has no declared guard");
            if (fn.name == "terminate")
                throw std::logic_error("'terminate' is reserved by the runtime");
        }
        behaviors_.emplace(behavior.code_id, std::move(behavior));
    }

    const Behavior* find(const std::string& code_id) const
    {
        auto it = behaviors_.find(code_id);
        return it == behaviors_.end() ? nullptr : &it->second;
    }

    std::vector<std::string> code_ids() const
    {
        std::vector<std::string> out;
        for (const auto& [id, _] : behaviors_)
            out.push_back(id);
        return out;
    }

private:
    std::map<std::string, Behavior> behaviors_;
};

inline constexpr int kMaxCallDepth = 64;
inline constexpr std::uint64_t kDefaultCallGas = 2'000'000;

/// Execution context handed to behavior code. Contracts may read only
/// their own storage, this context, and values returned by calls they
/// make; there is no ambient access to anything else.
class CallEnv {
public:
    CallEnv(Runtime& rt, Chain& chain, GasMeter& gas, std::vector<Event>& events, Address self,
            Address caller, std::uint64_t value, int depth)
        : rt_(rt)
        , chain_(chain)
        , gas_(gas)
        , events_(events)
        , self_(self)
        , caller_(caller)
        , value_(value)
        , depth_(depth)
    {
    }

    const Address& self() const { return self_; }
    const Address& caller() const { return caller_; }
    std::uint64_t attached_value() const { return value_; }
    std::uint64_t block_height() const { return chain_.executing_height(); }
    std::uint64_t tick() const { return chain_.now(); }
    int depth() const { return depth_; }

    std::optional<Bytes> load(const Bytes& key)
    {
        gas_.charge(chain_.profile().gas.storage_read);
        const auto& storage = chain_.contract_mut(self_).storage;
        auto it = storage.find(key);
        if (it == storage.end())
            return std::nullopt;
        return it->second;
    }

    Bytes load_or_reject(const Bytes& key, Err code)
    {
        auto v = load(key);
        if (!v)
            reject(code);
        return *v;
    }

    void store(const Bytes& key, Bytes value)
    {
        gas_.charge(chain_.profile().gas.storage_write);
        chain_.j_storage_put(self_, key, std::move(value));
    }

    void erase(const Bytes& key)
    {
        gas_.charge(chain_.profile().gas.storage_write);
        chain_.j_storage_erase(self_, key);
    }

    std::uint64_t self_balance() const { return chain_.get_balance(self_); }

    /// On-chain balance of an arbitrary address. Balances are public chain
    /// state, not external state, so contracts may read them (stake
    /// weighting needs the caller's).
    std::uint64_t balance_of(const Address& addr) const { return chain_.get_balance(addr); }

    std::optional<Address> owner() const
    {
        const ContractInstance* inst = chain_.contract(self_);
        return inst ? inst->owner : std::nullopt;
    }

    /// Pays out of the contract's own balance.
    void pay(const Address& to, std::uint64_t amount);

    void emit(std::string name, Bytes payload = {})
    {
        events_.push_back(Event{self_, std::move(name), std::move(payload)});
    }

    /// Synchronous nested call; failures abort the whole transaction.
    Bytes call(const Address& contract, const std::string& function, std::vector<Bytes> args,
               std::uint64_t value = 0);

    /// Deploys a new instance from contract code (factory use).
    Address deploy(ContractCode code, std::vector<Bytes> ctor_args, std::uint64_t value = 0);

    [[noreturn]] void reject(Err code, std::string detail = {}) const
    {
        throw ContractReject{code, std::move(detail)};
    }

    /// Argument accessor with arity checking.
    const Bytes& arg(const std::vector<Bytes>& args, std::size_t i) const
    {
        if (i >= args.size())
            reject(Err::BadArguments, "missing argument " + std::to_string(i));
        return args[i];
    }

    Chain& chain() { return chain_; }
    GasMeter& gas() { return gas_; }

private:
    Runtime& rt_;
    Chain& chain_;
    GasMeter& gas_;
    std::vector<Event>& events_;
    Address self_;
    Address caller_;
    std::uint64_t value_;
    int depth_;
};

/// Read-only context for views. No gas is metered and no state changes.
class ViewEnv {
public:
    ViewEnv(const Runtime& rt, const Chain& chain, const ContractInstance& inst)
        : rt_(rt)
        , chain_(chain)
        , inst_(inst)
    {
    }

    const ContractInstance& instance() const { return inst_; }
    const Address& self() const { return inst_.address; }
    std::uint64_t height() const { return chain_.height(); }
    std::uint64_t self_balance() const { return inst_.balance; }

    std::optional<Bytes> load(const Bytes& key) const
    {
        auto it = inst_.storage.find(key);
        if (it == inst_.storage.end())
            return std::nullopt;
        return it->second;
    }

    Bytes load_or_throw(const Bytes& key, Err code) const
    {
        auto v = load(key);
        if (!v)
            throw ChainError(code);
        return *v;
    }

    /// Nested read-only view of another contract.
    Bytes view(const Address& contract, const std::string& name,
               const std::vector<Bytes>& args) const;

private:
    const Runtime& rt_;
    const Chain& chain_;
    const ContractInstance& inst_;
};

/// Contract runtime: resolves behaviors, enforces guards and the closed
/// execution environment, and routes deploys/calls coming out of the
/// ledger's block producer.
class Runtime : public ContractEngine {
public:
    explicit Runtime(std::shared_ptr<BehaviorRegistry> registry)
        : registry_(std::move(registry))
    {
    }

    const BehaviorRegistry& registry() const { return *registry_; }

    bool knows_code_id(const std::string& code_id) const override
    {
        return registry_->find(code_id) != nullptr;
    }

    Outcome execute(Chain& chain, const Transaction& tx, GasMeter& gas) override
    {
        Outcome outcome;
        std::vector<Event> events;
        try {
            if (const auto* deploy = std::get_if<DeployPayload>(&tx.payload)) {
                Address addr = do_deploy(chain, gas, events, tx.sender, tx.sender, tx.nonce,
                                         *deploy, /*depth=*/0, /*from_contract=*/false);
                outcome.return_value = enc_address(addr);
            } else if (const auto* call = std::get_if<CallPayload>(&tx.payload)) {
                outcome.return_value = do_call(chain, gas, events, tx.sender, call->contract,
                                               call->function, call->args, call->value,
                                               /*depth=*/0);
            } else {
                throw ContractReject{Err::BadArguments, "engine cannot execute this payload"};
            }
            outcome.success = true;
            outcome.events = std::move(events);
        } catch (const ContractReject& r) {
            outcome.success = false;
            outcome.error = r.code;
            outcome.error_detail = r.detail;
        } catch (const ChainError& e) {
            outcome.success = false;
            outcome.error = e.code();
            outcome.error_detail = e.what();
        }
        // GasMeter::Exhausted intentionally propagates to the ledger.
        return outcome;
    }

    Bytes query(const Chain& chain, const Address& contract, const std::string& view,
                const std::vector<Bytes>& args) const override
    {
        const ContractInstance* inst = chain.contract(contract);
        if (!inst)
            throw ChainError(Err::NoSuchContract, to_hex(contract));
        // Raw storage stays readable even on terminated contracts.
        if (view == "storage") {
            if (args.size() != 1)
                throw ChainError(Err::BadArguments, "storage view takes one key");
            auto it = inst->storage.find(args[0]);
            if (it == inst->storage.end())
                throw ChainError(Err::NoSuchKey);
            return it->second;
        }
        if (view == "code") {
            Encoder enc;
            enc.str(inst->code.code_id).str(inst->code.version);
            return enc.take();
        }
        const Behavior* behavior = registry_->find(inst->code.code_id);
        if (!behavior)
            throw ChainError(Err::UnknownCodeId, inst->code.code_id);
        const ViewSpec* spec = behavior->find_view(view);
        if (!spec)
            throw ChainError(Err::NoSuchKey, "no view named " + view);
        ViewEnv env(*this, chain, *inst);
        return spec->handler(env, args);
    }

    // ---- internals shared with CallEnv -----------------------------------

    Address do_deploy(Chain& chain, GasMeter& gas, std::vector<Event>& events,
                      const Address& deployer, const Address& tx_sender, std::uint64_t nonce,
                      const DeployPayload& payload, int depth, bool from_contract)
    {
        if (depth >= kMaxCallDepth)
            throw ContractReject{Err::DepthLimit, "call depth limit reached"};

        const auto& allowed = chain.profile().allowed_code_ids;
        if (allowed && !allowed->count(payload.code.code_id))
            throw ContractReject{Err::BehaviorNotAllowed,
                                 payload.code.code_id + " not available on " + chain.profile().name};
        const Behavior* behavior = registry_->find(payload.code.code_id);
        if (!behavior)
            throw ContractReject{Err::UnknownCodeId, payload.code.code_id};

        // Fresh address from (deployer, nonce).
        Encoder enc;
        enc.address(deployer).u64(nonce);
        Hash256 digest = hash_data(enc.take());
        Address addr;
        std::copy(digest.bytes.end() - 20, digest.bytes.end(), addr.bytes.begin());

        gas.charge(chain.profile().gas.storage_write); // instance record

        ContractInstance inst;
        inst.address = addr;
        inst.code = payload.code;
        inst.owner = payload.owner ? payload.owner : std::optional<Address>(deployer);
        inst.terminate_guard = payload.terminate_guard;
        chain.j_create_contract(std::move(inst));

        move_value(chain, from_contract ? deployer : tx_sender, addr, payload.value,
                   from_contract);

        CallEnv env(*this, chain, gas, events, addr, deployer, payload.value, depth);
        try {
            behavior->constructor(env, payload.constructor_args);
        } catch (const ContractReject& r) {
            throw ContractReject{Err::ConstructorRejected,
                                 std::string(err_name(r.code)) +
                                     (r.detail.empty() ? "" : ": " + r.detail)};
        }
        events.push_back(Event{addr, "Deployed", bytes_of(payload.code.code_id)});
        return addr;
    }

    Bytes do_call(Chain& chain, GasMeter& gas, std::vector<Event>& events, const Address& caller,
                  const Address& target, const std::string& function,
                  const std::vector<Bytes>& args, std::uint64_t value, int depth)
    {
        if (depth >= kMaxCallDepth)
            throw ContractReject{Err::DepthLimit, "call depth limit reached"};
        gas.charge(chain.profile().gas.contract_call);

        const ContractInstance* inst = chain.contract(target);
        if (!inst)
            throw ContractReject{Err::NoSuchContract, to_hex(target)};
        if (function == "terminate")
            return do_terminate(chain, gas, events, caller, target, value, depth);
        if (inst->terminated)
            throw ContractReject{Err::ContractTerminated, {}};

        const auto& allowed = chain.profile().allowed_code_ids;
        if (allowed && !allowed->count(inst->code.code_id))
            throw ContractReject{Err::BehaviorNotAllowed, inst->code.code_id};

        const Behavior* behavior = registry_->find(inst->code.code_id);
        if (!behavior)
            throw ContractReject{Err::UnknownCodeId, inst->code.code_id};
        const FunctionSpec* spec = behavior->find_function(function);
        if (!spec)
            throw ContractReject{Err::BadArguments, "no function named " + function};

        // Guard first (no state change yet), then the value move, then the
        // body; a rejecting body rolls the value move back with the rest.
        if (!guard_admits(chain, gas, *inst, spec->guard, caller))
            throw ContractReject{Err::NotAuthorized, function + " guard rejected caller"};
        move_value(chain, caller, target, value, depth > 0);

        CallEnv env(*this, chain, gas, events, target, caller, value, depth);
        return spec->handler(env, args);
    }

    Bytes do_terminate(Chain& chain, GasMeter& gas, std::vector<Event>& events,
                       const Address& caller, const Address& target, std::uint64_t value,
                       int depth)
    {
        (void)depth;
        if (value != 0)
            throw ContractReject{Err::BadArguments, "terminate takes no value"};
        const ContractInstance& inst = *chain.contract(target);
        if (inst.terminated)
            throw ContractReject{Err::ContractTerminated, {}};
        if (!guard_admits(chain, gas, inst, inst.terminate_guard, caller))
            throw ContractReject{Err::NotAuthorized, "termination guard rejected caller"};

        gas.charge(chain.profile().gas.storage_write);
        // Sweep the remaining balance to the owner, or to the caller for
        // ownerless instances.
        Address sink = inst.owner ? *inst.owner : caller;
        std::uint64_t balance = inst.balance;
        if (balance > 0) {
            chain.j_set_contract_balance(target, 0);
            credit(chain, sink, balance);
        }
        chain.j_set_terminated(target, true);
        Encoder enc;
        enc.address(sink).u64(balance);
        events.push_back(Event{target, "Terminated", enc.take()});
        return {};
    }

    bool guard_admits(Chain& chain, GasMeter& gas, const ContractInstance& inst,
                      const PermissionGuard& guard, const Address& caller)
    {
        switch (guard.kind) {
        case PermissionGuard::Kind::Anyone:
            return true;
        case PermissionGuard::Kind::OwnerOnly:
            return inst.owner && *inst.owner == caller;
        case PermissionGuard::Kind::AddressSet:
            return guard.allowed.count(caller) > 0;
        case PermissionGuard::Kind::StorageSet: {
            gas.charge(chain.profile().gas.storage_read);
            auto it = inst.storage.find(guard.storage_key);
            if (it == inst.storage.end())
                return false;
            Decoder dec(it->second);
            for (const auto& a : dec.address_vec())
                if (a == caller)
                    return true;
            return false;
        }
        case PermissionGuard::Kind::Custom:
            return true; // the function body checks
        case PermissionGuard::Kind::Unspecified:
            break;
        }
        return false;
    }

    void move_value(Chain& chain, const Address& from, const Address& to, std::uint64_t amount,
                    bool from_is_contract)
    {
        if (amount == 0)
            return;
        if (from_is_contract || chain.contract(from) != nullptr) {
            const ContractInstance* ci = chain.contract(from);
            if (!ci || ci->balance < amount)
                throw ContractReject{Err::InsufficientBalance, {}};
            chain.j_set_contract_balance(from, ci->balance - amount);
        } else {
            auto it = chain.accounts().find(from);
            std::uint64_t bal = it == chain.accounts().end() ? 0 : it->second.balance;
            if (bal < amount)
                throw ContractReject{Err::InsufficientBalance, {}};
            chain.j_set_account_balance(from, bal - amount);
        }
        credit(chain, to, amount);
    }

    void credit(Chain& chain, const Address& to, std::uint64_t amount)
    {
        if (amount == 0)
            return;
        if (chain.contract(to) != nullptr)
            chain.j_set_contract_balance(to, chain.contract(to)->balance + amount);
        else
            chain.j_set_account_balance(to, chain.get_balance(to) + amount);
    }

private:
    std::shared_ptr<BehaviorRegistry> registry_;
};

inline void CallEnv::pay(const Address& to, std::uint64_t amount)
{
    if (chain_.get_balance(self_) < amount)
        reject(Err::InsufficientBalance, "contract balance too low");
    rt_.move_value(chain_, self_, to, amount, /*from_is_contract=*/true);
}

inline Bytes CallEnv::call(const Address& contract, const std::string& function,
                           std::vector<Bytes> args, std::uint64_t value)
{
    return rt_.do_call(chain_, gas_, events_, self_, contract, function, args, value, depth_ + 1);
}

inline Address CallEnv::deploy(ContractCode code, std::vector<Bytes> ctor_args,
                               std::uint64_t value)
{
    ContractInstance& self_inst = chain_.contract_mut(self_);
    std::uint64_t nonce = self_inst.nonce;
    chain_.j_set_contract_nonce(self_, nonce + 1);
    DeployPayload payload;
    payload.code = std::move(code);
    payload.constructor_args = std::move(ctor_args);
    payload.value = value;
    payload.owner = self_;
    return rt_.do_deploy(chain_, gas_, events_, self_, self_, nonce, payload, depth_ + 1,
                         /*from_contract=*/true);
}

inline Bytes ViewEnv::view(const Address& contract, const std::string& name,
                           const std::vector<Bytes>& args) const
{
    return rt_.query(chain_, contract, name, args);
}

// ---- operations -----------------------------------------------------------

struct DeployOptions {
    std::optional<Address> owner;
    PermissionGuard terminate_guard = PermissionGuard::owner_only();
    std::uint64_t value = 0;
    std::uint64_t gas_limit = kDefaultCallGas;
};

/// Builds, signs and submits a transaction in one step. The nonce is taken
/// from the chain.
inline Hash256 submit_signed(Chain& chain, const KeyPair& sender, Payload payload,
                             std::uint64_t gas_limit)
{
    Transaction tx;
    tx.sender = address_of(sender);
    tx.nonce = chain.next_nonce(tx.sender);
    tx.gas_limit = gas_limit;
    tx.payload = std::move(payload);
    return chain.submit_tx(sign_tx(std::move(tx), sender));
}

/// Submits and immediately produces a block; returns the receipt.
inline ExecutionReceipt exec_now(Chain& chain, const KeyPair& sender, Payload payload,
                                 std::uint64_t gas_limit = kDefaultCallGas)
{
    Hash256 id = submit_signed(chain, sender, std::move(payload), gas_limit);
    chain.advance_block();
    const ExecutionReceipt* r = chain.receipt_of(id);
    if (!r)
        throw ChainError(Err::ParseError, "transaction missing from produced block");
    return *r;
}

/// Deploys a behavior instance and returns its address. Deployment
/// failures surface as ChainError.
inline Address deploy_contract(Chain& chain, const KeyPair& deployer, ContractCode code,
                               std::vector<Bytes> constructor_args = {}, DeployOptions opts = {})
{
    if (chain.engine() && !chain.engine()->knows_code_id(code.code_id))
        throw ChainError(Err::UnknownCodeId, code.code_id);
    DeployPayload payload;
    payload.code = std::move(code);
    payload.constructor_args = std::move(constructor_args);
    payload.value = opts.value;
    payload.owner = opts.owner;
    payload.terminate_guard = opts.terminate_guard;
    ExecutionReceipt receipt = exec_now(chain, deployer, Payload(std::move(payload)), opts.gas_limit);
    if (!receipt.success)
        throw ChainError(receipt.error.value_or(Err::ConstructorRejected), receipt.error_detail);
    return dec_address(receipt.return_value);
}

/// Calls a contract function through a transaction. Errors come back in
/// the receipt, not as exceptions.
inline ExecutionReceipt call_contract(Chain& chain, const KeyPair& caller, const Address& contract,
                                      const std::string& function, std::vector<Bytes> args = {},
                                      std::uint64_t value = 0,
                                      std::uint64_t gas_limit = kDefaultCallGas)
{
    CallPayload payload;
    payload.contract = contract;
    payload.function = function;
    payload.args = std::move(args);
    payload.value = value;
    return exec_now(chain, caller, Payload(std::move(payload)), gas_limit);
}

/// Read-only state access: no gas, no transaction, no state change.
inline Bytes query_state(const Chain& chain, const Address& contract, const std::string& view,
                         const std::vector<Bytes>& args = {})
{
    if (!chain.engine())
        throw ChainError(Err::NoSuchContract, "no contract engine attached");
    return chain.engine()->query(chain, contract, view, args);
}

inline ExecutionReceipt terminate_contract(Chain& chain, const KeyPair& caller,
                                           const Address& contract)
{
    return call_contract(chain, caller, contract, "terminate");
}

} // namespace chainsim
