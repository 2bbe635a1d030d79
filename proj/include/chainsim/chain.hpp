// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <chainsim/bytes.hpp>
#include <chainsim/crypto.hpp>
#include <chainsim/errors.hpp>
#include <chainsim/guard.hpp>
#include <chainsim/profile.hpp>
#include <chainsim/receipt.hpp>
#include <chainsim/serial.hpp>
#include <chainsim/tx.hpp>

namespace chainsim {

struct AccountState {
    std::uint64_t balance = 0;
    std::uint64_t nonce = 0;
};

/// Deployed contract: code identity, isolated storage, its own balance.
/// The code never changes after deployment; termination disables calls but
/// leaves storage readable for audit.
struct ContractInstance {
    Address address;
    ContractCode code;
    std::map<Bytes, Bytes> storage;
    std::uint64_t balance = 0;
    std::optional<Address> owner;
    bool terminated = false;
    PermissionGuard terminate_guard = PermissionGuard::owner_only();
    std::uint64_t nonce = 0; // counts contracts this instance deployed
};

struct Confirmation {
    std::uint64_t count = 0;
    bool committed = false;
    std::uint64_t inclusion_height = 0;
};

class Chain;

/// Boundary between the ledger and the contract runtime. The ledger owns
/// world state and block production; deploys and calls are delegated here.
class ContractEngine {
public:
    virtual ~ContractEngine() = default;

    struct Outcome {
        bool success = false;
        Bytes return_value;
        std::vector<Event> events;
        std::optional<Err> error;
        std::string error_detail;
    };

    /// Executes a deploy or call payload against live state. Gas for the
    /// executed work is drawn from `gas`; the ledger has already charged
    /// the intrinsic cost. Must not throw for on-chain failures.
    virtual Outcome execute(Chain& chain, const Transaction& tx, class GasMeter& gas) = 0;

    /// Read-only view dispatch; throws ChainError on bad queries.
    virtual Bytes query(const Chain& chain, const Address& contract, const std::string& view,
                        const std::vector<Bytes>& args) const = 0;

    virtual bool knows_code_id(const std::string& code_id) const = 0;
};

/// Runtime gas meter. Exceeding the limit aborts execution; the full limit
/// is then charged.
class GasMeter {
public:
    struct Exhausted {
    };

    GasMeter(std::uint64_t limit)
        : limit_(limit)
    {
    }

    void charge(std::uint64_t amount)
    {
        if (amount > limit_ - used_)
            throw Exhausted{};
        used_ += amount;
    }

    std::uint64_t used() const { return used_; }
    std::uint64_t limit() const { return limit_; }

private:
    std::uint64_t limit_;
    std::uint64_t used_ = 0;
};

/// Deterministic in-memory ledger: accounts, mempool, append-only blocks,
/// gas accounting and a single block producer. All mutation goes through
/// this one handle; given the same inputs the chain evolves identically.
class Chain {
public:
    explicit Chain(ChainProfile profile, std::shared_ptr<ContractEngine> engine = nullptr)
        : profile_(std::move(profile))
        , engine_(std::move(engine))
    {
        profile_.validate();
        Block genesis;
        genesis.height = 0;
        genesis.parent_hash = Hash256{}; // all-zero parent
        genesis.timestamp = 0;
        blocks_.push_back(std::move(genesis));
    }

    const ChainProfile& profile() const { return profile_; }
    ContractEngine* engine() const { return engine_.get(); }
    void set_engine(std::shared_ptr<ContractEngine> engine) { engine_ = std::move(engine); }

    std::uint64_t height() const { return blocks_.back().height; }
    std::uint64_t now() const { return now_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t mempool_size() const { return mempool_.size(); }

    std::uint64_t total_minted() const { return total_minted_; }
    std::uint64_t total_fees() const { return total_fees_; }
    std::uint64_t mint_count() const { return mint_count_; }

    // ---- accounts ------------------------------------------------------

    /// Deterministic account from a nonempty seed; registers the address
    /// with balance 0 and nonce 0.
    std::pair<KeyPair, Address> create_account(const Bytes& seed)
    {
        KeyPair kp = keypair_from_seed(seed);
        Address addr = address_of(kp);
        accounts_.try_emplace(addr);
        return {std::move(kp), addr};
    }

    /// Test/genesis faucet. The only way total supply grows; callers are
    /// expected to flag it in traces.
    void mint(const Address& to, std::uint64_t amount)
    {
        if (total_minted_ + amount < total_minted_)
            throw ChainError(Err::BadArguments, "mint overflows total supply");
        accounts_[to].balance += amount;
        total_minted_ += amount;
        ++mint_count_;
    }

    std::uint64_t get_balance(const Address& addr) const
    {
        if (auto it = accounts_.find(addr); it != accounts_.end())
            return it->second.balance;
        if (auto it = contracts_.find(addr); it != contracts_.end())
            return it->second.balance;
        return 0;
    }

    std::uint64_t account_nonce(const Address& addr) const
    {
        auto it = accounts_.find(addr);
        return it == accounts_.end() ? 0 : it->second.nonce;
    }

    /// Nonce the next submitted transaction from `addr` must carry
    /// (account nonce plus transactions already pending).
    std::uint64_t next_nonce(const Address& addr) const
    {
        std::uint64_t pending = 0;
        for (const auto& tx : mempool_)
            if (tx.sender == addr)
                ++pending;
        return account_nonce(addr) + pending;
    }

    const std::map<Address, AccountState>& accounts() const { return accounts_; }
    const std::map<Address, ContractInstance>& contracts() const { return contracts_; }

    const ContractInstance* contract(const Address& addr) const
    {
        auto it = contracts_.find(addr);
        return it == contracts_.end() ? nullptr : &it->second;
    }

    // ---- transactions ----------------------------------------------------

    /// Validates and enqueues a signed transaction. Returns its id.
    Hash256 submit_tx(const Transaction& tx)
    {
        if (!verify_tx(tx))
            throw ChainError(Err::BadSignature);
        if (tx.nonce != next_nonce(tx.sender))
            throw ChainError(Err::BadNonce, "expected " + std::to_string(next_nonce(tx.sender)));
        Bytes payload = serialize_payload(tx.payload);
        if (payload.size() > profile_.max_tx_bytes)
            throw ChainError(Err::OversizeTransaction);
        if (tx.gas_limit > profile_.block_gas_limit)
            throw ChainError(Err::OversizeTransaction, "gas limit exceeds block gas limit");
        if (const auto* embed = std::get_if<EmbedPayload>(&tx.payload))
            if (embed->data.size() > profile_.max_embed_bytes)
                throw ChainError(Err::EmbedTooLarge);
        if (get_balance(tx.sender) < payload_value(tx.payload))
            throw ChainError(Err::InsufficientBalance);

        mempool_.push_back(tx);
        return tx_id(tx);
    }

    /// Produces the next block: drains the mempool FIFO until the next
    /// transaction's gas limit would not fit, executes everything against
    /// world state and advances the simulated clock. Failed transactions
    /// are included with a failure receipt and still consume gas.
    Block advance_block()
    {
        Block block;
        block.height = height() + 1;
        block.parent_hash = block_hash(blocks_.back());
        now_ += profile_.block_interval_ticks;
        block.timestamp = now_;

        std::uint64_t gas_reserved = 0;
        while (!mempool_.empty()) {
            const Transaction& next = mempool_.front();
            if (gas_reserved + next.gas_limit > profile_.block_gas_limit)
                break;
            gas_reserved += next.gas_limit;
            Transaction tx = std::move(mempool_.front());
            mempool_.pop_front();

            ExecutionReceipt receipt = execute_tx(tx, block.height);
            block.gas_used += receipt.gas_used;
            block.transactions.push_back(std::move(tx));
            Hash256 id = receipt.tx;
            tx_index_[id] = block.height;
            receipts_[id] = std::move(receipt);
        }

        blocks_.push_back(block);
        return block;
    }

    std::optional<Confirmation> confirmations_of(const Hash256& id) const
    {
        auto it = tx_index_.find(id);
        if (it == tx_index_.end())
            return std::nullopt;
        Confirmation c;
        c.inclusion_height = it->second;
        c.count = height() - it->second + 1;
        c.committed = c.count >= profile_.confirmation_depth;
        return c;
    }

    const ExecutionReceipt* receipt_of(const Hash256& id) const
    {
        auto it = receipts_.find(id);
        return it == receipts_.end() ? nullptr : &it->second;
    }

    /// Locates an included transaction by id.
    const Transaction* find_tx(const Hash256& id) const
    {
        auto it = tx_index_.find(id);
        if (it == tx_index_.end())
            return nullptr;
        const Block& b = blocks_[it->second];
        for (const auto& tx : b.transactions)
            if (tx_id(tx) == id)
                return &tx;
        return nullptr;
    }

    /// Digest over the full world state and chain head; used to assert
    /// read-only behavior of off-chain components.
    Hash256 state_digest() const
    {
        Encoder enc;
        enc.u64(height()).hash(block_hash(blocks_.back()));
        enc.u64(total_minted_).u64(total_fees_);
        enc.u32(static_cast<std::uint32_t>(accounts_.size()));
        for (const auto& [addr, acct] : accounts_)
            enc.address(addr).u64(acct.balance).u64(acct.nonce);
        enc.u32(static_cast<std::uint32_t>(contracts_.size()));
        for (const auto& [addr, inst] : contracts_) {
            enc.address(addr).str(inst.code.code_id).str(inst.code.version);
            enc.u64(inst.balance).boolean(inst.terminated).u64(inst.nonce);
            enc.u32(static_cast<std::uint32_t>(inst.storage.size()));
            for (const auto& [k, v] : inst.storage)
                enc.var_bytes(k).var_bytes(v);
        }
        return hash_data(enc.take());
    }

    // ---- journaled mutators (runtime interface) --------------------------
    //
    // Everything a transaction may touch goes through these so that a
    // failed transaction can be rolled back in O(touched) instead of
    // copying world state.

    void j_set_account_balance(const Address& addr, std::uint64_t value)
    {
        auto [it, created] = accounts_.try_emplace(addr);
        if (journaling_)
            journal_.push_back(created ? UndoOp{UndoOp::AccountCreated, addr, {}, {}, 0, 0}
                                       : UndoOp{UndoOp::AccountBalance, addr, {}, {}, it->second.balance, 0});
        it->second.balance = value;
    }

    void j_set_account_nonce(const Address& addr, std::uint64_t value)
    {
        auto [it, created] = accounts_.try_emplace(addr);
        if (journaling_ && !created)
            journal_.push_back({UndoOp::AccountNonce, addr, {}, {}, it->second.nonce, 0});
        else if (journaling_ && created)
            journal_.push_back({UndoOp::AccountCreated, addr, {}, {}, 0, 0});
        it->second.nonce = value;
    }

    ContractInstance& j_create_contract(ContractInstance inst)
    {
        Address addr = inst.address;
        if (contracts_.count(addr) || accounts_.count(addr))
            throw ChainError(Err::BadArguments, "address collision on deploy");
        if (journaling_)
            journal_.push_back({UndoOp::ContractCreated, addr, {}, {}, 0, 0});
        auto [it, ok] = contracts_.emplace(addr, std::move(inst));
        (void)ok;
        return it->second;
    }

    void j_set_contract_balance(const Address& addr, std::uint64_t value)
    {
        auto& inst = contract_mut(addr);
        if (journaling_)
            journal_.push_back({UndoOp::ContractBalance, addr, {}, {}, inst.balance, 0});
        inst.balance = value;
    }

    void j_set_contract_nonce(const Address& addr, std::uint64_t value)
    {
        auto& inst = contract_mut(addr);
        if (journaling_)
            journal_.push_back({UndoOp::ContractNonce, addr, {}, {}, inst.nonce, 0});
        inst.nonce = value;
    }

    void j_set_terminated(const Address& addr, bool value)
    {
        auto& inst = contract_mut(addr);
        if (journaling_)
            journal_.push_back({UndoOp::Terminated, addr, {}, {}, inst.terminated ? 1u : 0u, 0});
        inst.terminated = value;
    }

    void j_storage_put(const Address& addr, const Bytes& key, Bytes value)
    {
        auto& inst = contract_mut(addr);
        if (journaling_) {
            auto it = inst.storage.find(key);
            UndoOp op{UndoOp::Storage, addr, key, {}, 0, 0};
            if (it != inst.storage.end()) {
                op.old_value = it->second;
                op.had_value = 1;
            }
            journal_.push_back(std::move(op));
        }
        inst.storage[key] = std::move(value);
    }

    void j_storage_erase(const Address& addr, const Bytes& key)
    {
        auto& inst = contract_mut(addr);
        auto it = inst.storage.find(key);
        if (it == inst.storage.end())
            return;
        if (journaling_)
            journal_.push_back({UndoOp::Storage, addr, key, it->second, 0, 1});
        inst.storage.erase(it);
    }

    ContractInstance& contract_mut(const Address& addr)
    {
        auto it = contracts_.find(addr);
        if (it == contracts_.end())
            throw ChainError(Err::NoSuchContract, to_hex(addr));
        return it->second;
    }

private:
    struct UndoOp {
        enum Kind {
            AccountBalance,
            AccountNonce,
            AccountCreated,
            ContractCreated,
            ContractBalance,
            ContractNonce,
            Terminated,
            Storage,
        };
        Kind kind;
        Address addr;
        Bytes key;
        Bytes old_value;
        std::uint64_t old_number = 0;
        std::uint8_t had_value = 0;
    };

    void begin_tx_journal()
    {
        journaling_ = true;
        journal_.clear();
    }

    void commit_tx_journal()
    {
        journaling_ = false;
        journal_.clear();
    }

    void rollback_tx_journal()
    {
        for (auto it = journal_.rbegin(); it != journal_.rend(); ++it) {
            const UndoOp& op = *it;
            switch (op.kind) {
            case UndoOp::AccountBalance:
                accounts_[op.addr].balance = op.old_number;
                break;
            case UndoOp::AccountNonce:
                accounts_[op.addr].nonce = op.old_number;
                break;
            case UndoOp::AccountCreated:
                accounts_.erase(op.addr);
                break;
            case UndoOp::ContractCreated:
                contracts_.erase(op.addr);
                break;
            case UndoOp::ContractBalance:
                contracts_.at(op.addr).balance = op.old_number;
                break;
            case UndoOp::ContractNonce:
                contracts_.at(op.addr).nonce = op.old_number;
                break;
            case UndoOp::Terminated:
                contracts_.at(op.addr).terminated = op.old_number != 0;
                break;
            case UndoOp::Storage:
                if (op.had_value)
                    contracts_.at(op.addr).storage[op.key] = op.old_value;
                else
                    contracts_.at(op.addr).storage.erase(op.key);
                break;
            }
        }
        journaling_ = false;
        journal_.clear();
    }

    /// Runs one transaction at block production time. State changes of a
    /// failing transaction are rolled back; its fee and nonce bump stick.
    ExecutionReceipt execute_tx(const Transaction& tx, std::uint64_t block_height)
    {
        ExecutionReceipt receipt;
        receipt.tx = tx_id(tx);

        AccountState& sender = accounts_[tx.sender];
        std::uint64_t nonce_before = sender.nonce;
        std::uint64_t balance_before = sender.balance;

        // Unreachable under FIFO single-producer ordering (submit already
        // validated the nonce), kept so a future mempool policy cannot
        // silently break the nonce sequence.
        if (tx.nonce != nonce_before) {
            receipt.error = Err::BadNonce;
            receipt.gas_used = 0;
            return receipt;
        }

        // The sender must be able to reserve the whole gas limit.
        if (balance_before < tx.gas_limit) {
            std::uint64_t fee = balance_before;
            sender.balance = 0;
            sender.nonce = nonce_before + 1;
            total_fees_ += fee;
            receipt.error = Err::InsufficientBalance;
            receipt.error_detail = "cannot reserve gas";
            receipt.gas_used = fee;
            return receipt;
        }

        Bytes payload_bytes = serialize_payload(tx.payload);
        GasMeter gas(tx.gas_limit);
        exec_height_ = block_height;

        begin_tx_journal();
        j_set_account_balance(tx.sender, balance_before - tx.gas_limit);
        j_set_account_nonce(tx.sender, nonce_before + 1);

        bool out_of_gas = false;
        try {
            gas.charge(profile_.gas.base_tx);
            gas.charge(profile_.gas.per_payload_byte * payload_bytes.size());

            if (const auto* transfer = std::get_if<TransferPayload>(&tx.payload)) {
                credit_or_debit_for_transfer(tx.sender, transfer->to, transfer->amount);
                receipt.success = true;
            } else if (std::get_if<EmbedPayload>(&tx.payload)) {
                // Data rides in the transaction itself; nothing to execute.
                receipt.success = true;
            } else {
                if (!engine_)
                    throw ChainError(Err::UnknownCodeId, "no contract engine attached");
                auto outcome = engine_->execute(*this, tx, gas);
                receipt.success = outcome.success;
                receipt.return_value = std::move(outcome.return_value);
                receipt.events = std::move(outcome.events);
                receipt.error = outcome.error;
                receipt.error_detail = std::move(outcome.error_detail);
            }
        } catch (const GasMeter::Exhausted&) {
            out_of_gas = true;
            receipt.success = false;
            receipt.error = Err::InsufficientGas;
        } catch (const ChainError& e) {
            receipt.success = false;
            receipt.error = e.code();
            receipt.error_detail = e.what();
        }

        std::uint64_t fee = out_of_gas ? tx.gas_limit : gas.used();
        if (receipt.success) {
            commit_tx_journal();
            // Refund the unused part of the reserved gas.
            accounts_[tx.sender].balance += tx.gas_limit - fee;
            receipt.gas_used = fee;
        } else {
            rollback_tx_journal();
            receipt.events.clear();
            receipt.return_value.clear();
            AccountState& s = accounts_[tx.sender];
            s.balance = balance_before - fee;
            s.nonce = nonce_before + 1;
            receipt.gas_used = fee;
        }
        total_fees_ += fee;
        return receipt;
    }

    void credit_or_debit_for_transfer(const Address& from, const Address& to, std::uint64_t amount)
    {
        std::uint64_t from_balance = accounts_[from].balance;
        if (from_balance < amount)
            throw ChainError(Err::InsufficientBalance);
        j_set_account_balance(from, from_balance - amount);
        if (auto it = contracts_.find(to); it != contracts_.end())
            j_set_contract_balance(to, it->second.balance + amount);
        else
            j_set_account_balance(to, get_balance(to) + amount);
    }

public:
    /// Height the currently executing transaction observes.
    std::uint64_t executing_height() const { return exec_height_; }

private:
    ChainProfile profile_;
    std::shared_ptr<ContractEngine> engine_;

    std::vector<Block> blocks_;
    std::deque<Transaction> mempool_;
    std::map<Address, AccountState> accounts_;
    std::map<Address, ContractInstance> contracts_;
    std::map<Hash256, std::uint64_t> tx_index_;
    std::map<Hash256, ExecutionReceipt> receipts_;

    std::uint64_t now_ = 0;
    std::uint64_t total_minted_ = 0;
    std::uint64_t total_fees_ = 0;
    std::uint64_t mint_count_ = 0;
    std::uint64_t exec_height_ = 0;

    bool journaling_ = false;
    std::vector<UndoOp> journal_;
};

} // namespace chainsim
