// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include <chainsim/patterns/data.hpp>
#include <chainsim/patterns/oracle.hpp>
#include <chainsim/patterns/security.hpp>
#include <chainsim/patterns/structural.hpp>

namespace chainsim::scenario {

using nlohmann::json;

// Scripted scenario driver. A script is a JSON document:
//
//   {
//     "name": "...", "profile": "ethereum-like", "seed": 7,
//     "mode": "dapp",                      // default submission mode
//     "actors": {"carol": {"custody": "provider"}},
//     "fixtures": {"world": "fixtures/w.json",
//                  "documents": {"doc": "fixtures/d.txt"}},
//     "steps": [ {"op": "...", "actor": "...", "args": {...},
//                 "mode": "semidapp", "expect_error": "...",
//                 "confirm": false}, ... ]
//   }
//
// Replaying the same (script, seed, profile) yields a byte-identical
// trace. Exit codes: 0 all assertions pass, 1 assertion failed, 2
// script/fixture parse error.

struct TraceEvent {
    std::uint64_t step = 0;
    std::uint64_t tick = 0;
    std::string kind; // tx-prepared | tx-confirmed-by-user | tx-submitted |
                      // receipt | offchain-message | assertion
    json payload;
};

struct Trace {
    std::string name;
    std::string profile;
    std::uint64_t seed = 0;
    std::vector<TraceEvent> events;
    bool passed = false;

    json to_json() const
    {
        json j;
        j["name"] = name;
        j["profile"] = profile;
        j["seed"] = seed;
        j["result"] = passed ? "pass" : "fail";
        j["events"] = json::array();
        for (const auto& e : events) {
            json ev;
            ev["step"] = e.step;
            ev["tick"] = e.tick;
            ev["kind"] = e.kind;
            ev["payload"] = e.payload;
            j["events"].push_back(ev);
        }
        return j;
    }

    /// Canonical byte form: sorted keys, two-space indent, lowercase hex
    /// everywhere, token amounts as decimal strings.
    std::string export_bytes() const { return to_json().dump(2) + "\n"; }
};

class ScriptError : public std::runtime_error {
public:
    explicit ScriptError(std::string what)
        : std::runtime_error(std::move(what))
    {
    }
};

class AssertionError : public std::runtime_error {
public:
    AssertionError(std::size_t step, std::string what)
        : std::runtime_error("step " + std::to_string(step) + ": " + std::move(what))
        , step_(step)
    {
    }
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

struct RunnerOptions {
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> profile_override; // name or path to JSON
    bool interactive = false;
    std::filesystem::path output_dir = "scenario-out";
};

class Runner {
public:
    Runner(json script, std::filesystem::path script_dir, RunnerOptions options = {})
        : script_(std::move(script))
        , script_dir_(std::move(script_dir))
        , options_(std::move(options))
        , chain_(make_chain(resolve_profile()))
    {
        if (!script_.is_object() || !script_.contains("name") || !script_.contains("steps"))
            throw ScriptError("script needs name and steps");
        trace_.name = script_.at("name").get<std::string>();
        trace_.profile = chain_.profile().name;
        seed_ = options_.seed_override
                    ? *options_.seed_override
                    : script_.value("seed", std::uint64_t{0});
        trace_.seed = seed_;
        rng_.seed(seed_);
        default_mode_ = script_.value("mode", std::string("dapp"));
        load_actors();
        load_fixtures();
    }

    const Trace& trace() const { return trace_; }

    /// Runs every step; returns the process exit code.
    int run()
    {
        const auto& steps = script_.at("steps");
        if (!steps.is_array())
            throw ScriptError("steps must be an array");
        try {
            for (std::size_t i = 0; i < steps.size(); ++i) {
                step_index_ = i;
                run_step(steps[i]);
            }
        } catch (const AssertionError& e) {
            record(trace_.events, "assertion",
                   json{{"ok", false}, {"detail", std::string(e.what())}});
            trace_.passed = false;
            return 1;
        }
        trace_.passed = true;
        return 0;
    }

    Chain& chain() { return chain_; }

private:
    // ---- setup ------------------------------------------------------------

    ChainProfile resolve_profile()
    {
        std::string name = options_.profile_override
                               ? *options_.profile_override
                               : script_.value("profile", std::string("ethereum-like"));
        if (name.size() > 5 && name.substr(name.size() - 5) == ".json") {
            std::filesystem::path p = name;
            if (p.is_relative())
                p = script_dir_ / p;
            return profile_from_json(load_json_file(p));
        }
        auto p = builtin_profile(name);
        if (!p)
            throw ScriptError("unknown profile: " + name);
        return *p;
    }

    static json load_json_file(const std::filesystem::path& path)
    {
        std::ifstream in(path);
        if (!in)
            throw ScriptError("cannot open file: " + path.string());
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ScriptError("bad JSON in " + path.string() + ": " + e.what());
        }
        return j;
    }

    static Bytes load_file_bytes(const std::filesystem::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ScriptError("cannot open file: " + path.string());
        return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    struct ActorInfo {
        KeyPair key;
        Address address;
        bool provider_custody = false;
    };

    void load_actors()
    {
        if (script_.contains("actors"))
            for (auto it = script_.at("actors").begin(); it != script_.at("actors").end(); ++it)
                actor(it.key()).provider_custody =
                    it.value().value("custody", std::string("self")) == "provider";
    }

    ActorInfo& actor(const std::string& name)
    {
        auto it = actors_.find(name);
        if (it != actors_.end())
            return it->second;
        // Key material is a pure function of (scenario seed, actor name).
        Encoder enc;
        enc.u64(seed_).str(name);
        auto [key, address] = chain_.create_account(enc.take());
        ActorInfo info{std::move(key), address, false};
        return actors_.emplace(name, std::move(info)).first->second;
    }

    void load_fixtures()
    {
        if (!script_.contains("fixtures"))
            return;
        const json& f = script_.at("fixtures");
        if (f.contains("world"))
            world_ = ExternalWorld::from_json(
                load_json_file(script_dir_ / f.at("world").get<std::string>()));
        if (f.contains("documents"))
            for (auto it = f.at("documents").begin(); it != f.at("documents").end(); ++it)
                documents_[it.key()] =
                    load_file_bytes(script_dir_ / it.value().get<std::string>());
    }

    // ---- trace helpers -------------------------------------------------------

    void record(std::vector<TraceEvent>& sink, std::string kind, json payload)
    {
        TraceEvent e;
        e.step = step_index_;
        e.tick = chain_.now();
        e.kind = std::move(kind);
        e.payload = std::move(payload);
        sink.push_back(std::move(e));
    }

    void emit(std::string kind, json payload)
    {
        record(trace_.events, std::move(kind), std::move(payload));
    }

    void emit_assert(bool ok, std::string kind, json detail)
    {
        detail["check"] = std::move(kind);
        detail["ok"] = ok;
        emit("assertion", detail);
        if (!ok)
            throw AssertionError(step_index_, detail.dump());
    }

    // ---- value resolution -------------------------------------------------------

    Bytes var_bytes_of(const std::string& name) const
    {
        auto it = vars_.find(name);
        if (it == vars_.end())
            throw ScriptError("unknown variable: $" + name);
        return it->second;
    }

    Bytes resolve_bytes(const json& spec)
    {
        if (spec.is_string()) {
            std::string s = spec.get<std::string>();
            if (!s.empty() && s[0] == '@')
                return enc_address(actor(s.substr(1)).address);
            if (!s.empty() && s[0] == '$')
                return var_bytes_of(s.substr(1));
            return bytes_of(s);
        }
        if (spec.is_number_unsigned() || spec.is_number_integer())
            return enc_u64(spec.get<std::uint64_t>());
        if (spec.is_boolean())
            return enc_bool(spec.get<bool>());
        if (spec.is_object()) {
            if (spec.contains("u64"))
                return enc_u64(resolve_amount(spec.at("u64")));
            if (spec.contains("u8"))
                return Bytes{static_cast<std::uint8_t>(spec.at("u8").get<unsigned>())};
            if (spec.contains("str"))
                return bytes_of(spec.at("str").get<std::string>());
            if (spec.contains("hex"))
                return from_hex(spec.at("hex").get<std::string>());
            if (spec.contains("bool"))
                return enc_bool(spec.at("bool").get<bool>());
            if (spec.contains("addr"))
                return enc_address(resolve_address(spec.at("addr")));
            if (spec.contains("hash_of"))
                return enc_hash(hash_data(resolve_bytes(spec.at("hash_of"))));
            if (spec.contains("file"))
                return document(spec.at("file").get<std::string>());
            if (spec.contains("addr_vec")) {
                std::vector<Address> addrs;
                for (const auto& a : spec.at("addr_vec"))
                    addrs.push_back(resolve_address(a));
                return Encoder{}.address_vec(addrs).take();
            }
            if (spec.contains("bytes_vec")) {
                std::vector<Bytes> items;
                for (const auto& b : spec.at("bytes_vec"))
                    items.push_back(resolve_bytes(b));
                return Encoder{}.bytes_vec(items).take();
            }
            if (spec.contains("sealed")) {
                auto it = sealed_.find(spec.at("sealed").get<std::string>());
                if (it == sealed_.end())
                    throw ScriptError("unknown sealed payload");
                return encode_sealed(it->second);
            }
            if (spec.contains("bet")) {
                const json& b = spec.at("bet");
                return builtin::encode_bet_config(b.at("query").get<std::string>(),
                                                  resolve_bytes(b.at("expect")),
                                                  resolve_address(b.at("to_match")),
                                                  resolve_address(b.at("to_else")));
            }
        }
        throw ScriptError("cannot resolve byte value: " + spec.dump());
    }

    Address resolve_address(const json& spec)
    {
        Bytes raw = resolve_bytes(spec);
        if (raw.size() == 20)
            return dec_address(raw);
        if (raw.size() == 40) // hex form
            return address_from_hex(string_of(raw));
        throw ScriptError("value is not an address: " + spec.dump());
    }

    std::uint64_t resolve_amount(const json& spec)
    {
        if (spec.is_number_unsigned() || spec.is_number_integer())
            return spec.get<std::uint64_t>();
        if (spec.is_string()) {
            std::string s = spec.get<std::string>();
            if (!s.empty() && s[0] == '$')
                return dec_u64(var_bytes_of(s.substr(1)));
            return std::stoull(s);
        }
        throw ScriptError("cannot resolve amount: " + spec.dump());
    }

    Bytes document(const std::string& name) const
    {
        auto it = documents_.find(name);
        if (it == documents_.end())
            throw ScriptError("unknown document fixture: " + name);
        return it->second;
    }

    static std::string amount_str(std::uint64_t v) { return std::to_string(v); }

    // ---- transaction submission ---------------------------------------------------

    struct TxRecord {
        std::size_t step;
        Hash256 id;
        std::optional<Address> target;
        std::string function;
    };

    std::string step_mode(const json& step) const
    {
        return step.value("mode", default_mode_);
    }

    /// Runs one transaction through the scripted submission mode,
    /// producing the prepared/confirmed/submitted/receipt trace events.
    /// Returns nullopt when the user rejected the transaction (dapp) or a
    /// provider fault was injected (semidapp).
    std::optional<ExecutionReceipt> run_tx(const json& step, const std::string& actor_name,
                                           Payload payload,
                                           std::uint64_t gas_limit = kDefaultCallGas)
    {
        ActorInfo& who = actor(actor_name);
        std::string mode = step_mode(step);
        if (mode != "dapp" && mode != "semidapp")
            throw ScriptError("unknown submission mode: " + mode);
        if (mode == "dapp" && who.provider_custody)
            throw ScriptError(actor_name + " cannot sign dapp transactions: the provider holds the key");

        Transaction tx;
        tx.sender = who.address;
        tx.nonce = chain_.next_nonce(tx.sender);
        tx.gas_limit = gas_limit;
        tx.payload = std::move(payload);
        Transaction signed_tx = sign_tx(tx, who.key);
        Hash256 id = tx_id(signed_tx);

        json rendering = render_tx(signed_tx);
        rendering["mode"] = mode;

        if (mode == "dapp") {
            // The transaction is shown to the user for verification before
            // anything reaches the chain.
            emit("tx-prepared", rendering);
            bool confirmed = confirm_step(step, rendering);
            if (!confirmed)
                return std::nullopt;
            emit("tx-confirmed-by-user", json{{"tx_id", to_hex(id)}, {"actor", actor_name}});
        } else {
            if (step.value("inject_fault", std::string()) == "provider-unavailable")
                return std::nullopt;
        }

        chain_.submit_tx(signed_tx);
        emit("tx-submitted", json{{"tx_id", to_hex(id)},
                                  {"mode", mode},
                                  {"signer_custody", mode == "dapp" ? "self" : "provider"},
                                  {"actor", actor_name}});
        chain_.advance_block();

        const ExecutionReceipt* receipt = chain_.receipt_of(id);
        if (!receipt)
            throw ScriptError("transaction vanished from the block");
        emit("receipt", receipt_json(*receipt));

        TxRecord rec{step_index_, id, std::nullopt, {}};
        if (const auto* call = std::get_if<CallPayload>(&signed_tx.payload)) {
            rec.target = call->contract;
            rec.function = call->function;
        } else if (const auto* transfer = std::get_if<TransferPayload>(&signed_tx.payload)) {
            rec.target = transfer->to;
        }
        submitted_.push_back(rec);
        last_tx_ = id;
        return *receipt;
    }

    bool confirm_step(const json& step, const json& rendering)
    {
        bool confirmed;
        if (options_.interactive) {
            std::cout << "confirm transaction?\n" << rendering.dump(2) << "\n[y/n] " << std::flush;
            std::string line;
            std::getline(std::cin, line);
            confirmed = !line.empty() && (line[0] == 'y' || line[0] == 'Y');
        } else {
            confirmed = step.value("confirm", true);
        }
        if (!confirmed)
            emit("assertion", json{{"check", "user-rejected"},
                                   {"ok", true},
                                   {"detail", "transaction rejected before submission"}});
        return confirmed;
    }

    json render_tx(const Transaction& tx) const
    {
        json j;
        j["sender"] = to_hex(tx.sender);
        j["nonce"] = tx.nonce;
        j["gas_limit"] = tx.gas_limit; // visible so the user can inspect gas
        j["tx_id"] = to_hex(tx_id(tx));
        std::visit(
            [&j](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, TransferPayload>) {
                    j["kind"] = "transfer";
                    j["to"] = to_hex(p.to);
                    j["amount"] = amount_str(p.amount);
                } else if constexpr (std::is_same_v<T, DeployPayload>) {
                    j["kind"] = "deploy";
                    j["code_id"] = p.code.code_id;
                    j["version"] = p.code.version;
                    j["value"] = amount_str(p.value);
                } else if constexpr (std::is_same_v<T, CallPayload>) {
                    j["kind"] = "call";
                    j["contract"] = to_hex(p.contract);
                    j["function"] = p.function;
                    j["value"] = amount_str(p.value);
                    json args = json::array();
                    for (const auto& a : p.args)
                        args.push_back(to_hex(a));
                    j["args"] = args;
                } else if constexpr (std::is_same_v<T, EmbedPayload>) {
                    j["kind"] = "embed";
                    j["bytes"] = p.data.size();
                }
            },
            tx.payload);
        return j;
    }

    json receipt_json(const ExecutionReceipt& r) const
    {
        json j;
        j["tx_id"] = to_hex(r.tx);
        j["success"] = r.success;
        j["gas_used"] = r.gas_used;
        j["return_value"] = to_hex(r.return_value);
        if (r.error)
            j["error"] = err_name(*r.error);
        json events = json::array();
        for (const auto& ev : r.events) {
            events.push_back(json{{"contract", to_hex(ev.contract)},
                                  {"name", ev.name},
                                  {"payload", to_hex(ev.payload)}});
        }
        j["events"] = events;
        return j;
    }

    /// Applies a step's expect_error / saves to a tx outcome; the step
    /// fails the scenario when the expectation does not hold.
    void finish_tx_step(const json& step, const std::optional<ExecutionReceipt>& receipt)
    {
        std::string expected = step.value("expect_error", std::string());
        if (!receipt) {
            std::string synthetic =
                step_mode(step) == "dapp" ? "UserRejected" : "ProviderUnavailable";
            emit_assert(expected == synthetic, "expect-error",
                        json{{"expected", expected}, {"actual", synthetic}});
            return;
        }
        if (!expected.empty()) {
            std::string actual = receipt->error ? err_name(*receipt->error) : "";
            emit_assert(!receipt->success && actual == expected, "expect-error",
                        json{{"expected", expected}, {"actual", actual}});
            return;
        }
        if (!receipt->success)
            emit_assert(false, "tx-success",
                        json{{"error", receipt->error ? err_name(*receipt->error) : "unknown"},
                             {"detail", receipt->error_detail}});
        if (receipt->success) {
            if (step.contains("save_address"))
                vars_[step.at("save_address").get<std::string>()] = receipt->return_value;
            if (step.contains("save_u64"))
                vars_[step.at("save_u64").get<std::string>()] = receipt->return_value;
            if (step.contains("save_bytes"))
                vars_[step.at("save_bytes").get<std::string>()] = receipt->return_value;
        }
        if (step.contains("save_tx"))
            vars_[step.at("save_tx").get<std::string>()] =
                Bytes(receipt->tx.bytes.begin(), receipt->tx.bytes.end());
    }

    // ---- step dispatch ----------------------------------------------------------------

    void run_step(const json& step)
    {
        if (!step.is_object() || !step.contains("op"))
            throw ScriptError("step " + std::to_string(step_index_) + " needs an op");
        std::string op = step.at("op").get<std::string>();
        const json args = step.value("args", json::object());
        std::string actor_name = step.value("actor", std::string("operator"));

        try {
            dispatch(op, step, args, actor_name);
        } catch (const AssertionError&) {
            throw;
        } catch (const ScriptError&) {
            throw;
        } catch (const ChainError& e) {
            // Submission-level rejection: legitimate when expected.
            std::string expected = step.value("expect_error", std::string());
            emit_assert(!expected.empty() && expected == err_name(e.code()), "expect-error",
                        json{{"expected", expected}, {"actual", err_name(e.code())},
                             {"detail", std::string(e.what())}});
        }
    }

    void dispatch(const std::string& op, const json& step, const json& args,
                  const std::string& actor_name)
    {
        if (op == "mint") {
            Address to = resolve_address(args.at("to"));
            std::uint64_t amount = resolve_amount(args.at("amount"));
            chain_.mint(to, amount);
            emit("receipt", json{{"op", "mint"},
                                 {"faucet", true},
                                 {"to", to_hex(to)},
                                 {"amount", amount_str(amount)}});
            return;
        }
        if (op == "advance") {
            std::uint64_t blocks = args.value("blocks", std::uint64_t{1});
            for (std::uint64_t i = 0; i < blocks; ++i)
                chain_.advance_block();
            return;
        }
        if (op == "transfer") {
            Address to = resolve_address(args.at("to"));
            std::uint64_t amount;
            std::uint64_t gas_limit;
            if (args.at("amount").is_string() && args.at("amount").get<std::string>() == "all") {
                // Sweep: size the fee from the payload shape, then move
                // everything else.
                Bytes probe = serialize_payload(Payload(TransferPayload{to, 0}));
                std::uint64_t fee = chain_.profile().gas.base_tx +
                                    chain_.profile().gas.per_payload_byte * probe.size();
                std::uint64_t balance = chain_.get_balance(actor(actor_name).address);
                if (balance < fee)
                    throw ScriptError("balance cannot cover the sweep fee");
                amount = balance - fee;
                gas_limit = fee;
            } else {
                amount = resolve_amount(args.at("amount"));
                Bytes probe = serialize_payload(Payload(TransferPayload{to, amount}));
                gas_limit = chain_.profile().gas.base_tx +
                            chain_.profile().gas.per_payload_byte * probe.size();
            }
            auto receipt = run_tx(step, actor_name, Payload(TransferPayload{to, amount}), gas_limit);
            finish_tx_step(step, receipt);
            return;
        }
        if (op == "deploy") {
            DeployPayload payload;
            payload.code.code_id = args.at("code_id").get<std::string>();
            payload.code.version = args.value("version", std::string("1"));
            if (args.contains("args"))
                for (const auto& a : args.at("args"))
                    payload.constructor_args.push_back(resolve_bytes(a));
            payload.value = args.contains("value") ? resolve_amount(args.at("value")) : 0;
            if (args.contains("owner"))
                payload.owner = resolve_address(args.at("owner"));
            payload.terminate_guard = parse_guard(args.value("terminate_guard", json("owner")));
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            if (receipt && receipt->success && step.contains("save"))
                vars_[step.at("save").get<std::string>()] = receipt->return_value;
            finish_tx_step(step, receipt);
            return;
        }
        if (op == "call") {
            CallPayload payload;
            payload.contract = resolve_address(args.at("contract"));
            payload.function = args.at("function").get<std::string>();
            if (args.contains("args"))
                for (const auto& a : args.at("args"))
                    payload.args.push_back(resolve_bytes(a));
            payload.value = args.contains("value") ? resolve_amount(args.at("value")) : 0;
            std::uint64_t gas = args.contains("gas_limit") ? resolve_amount(args.at("gas_limit"))
                                                           : kDefaultCallGas;
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)), gas);
            finish_tx_step(step, receipt);
            return;
        }
        if (op == "terminate") {
            CallPayload payload;
            payload.contract = resolve_address(args.at("contract"));
            payload.function = "terminate";
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            finish_tx_step(step, receipt);
            return;
        }
        if (op == "query_expect") {
            run_query_expect(step, args);
            return;
        }
        if (op == "assert") {
            run_assert(args);
            return;
        }
        if (op == "save_chain_digest") {
            Hash256 digest = chain_.state_digest();
            vars_[step.at("save").get<std::string>()] =
                Bytes(digest.bytes.begin(), digest.bytes.end());
            return;
        }
        if (op == "offchain_message") {
            json payload{{"from", args.at("from").get<std::string>()},
                         {"to", args.at("to").get<std::string>()},
                         {"note", args.value("note", std::string())}};
            if (args.contains("share_key")) {
                // Keys travel only off-chain; the trace records that the
                // exchange happened.
                std::string key_name = args.at("share_key").get<std::string>();
                if (!keys_.count(key_name))
                    throw ScriptError("unknown key: " + key_name);
                payload["shared"] = "secret-key:" + key_name;
            }
            if (args.contains("payload"))
                payload["payload"] = to_hex(resolve_bytes(args.at("payload")));
            emit("offchain-message", payload);
            return;
        }

        if (dispatch_security(op, step, args, actor_name))
            return;
        if (dispatch_data(op, step, args, actor_name))
            return;
        if (dispatch_oracle(op, step, args, actor_name))
            return;
        throw ScriptError("unknown op: " + op);
    }

    PermissionGuard parse_guard(const json& spec)
    {
        if (spec.is_string()) {
            std::string s = spec.get<std::string>();
            if (s == "anyone")
                return PermissionGuard::anyone();
            if (s == "owner")
                return PermissionGuard::owner_only();
        }
        if (spec.is_object() && spec.contains("addrs")) {
            std::set<Address> addrs;
            for (const auto& a : spec.at("addrs"))
                addrs.insert(resolve_address(a));
            return PermissionGuard::address_set(std::move(addrs));
        }
        throw ScriptError("bad guard spec: " + spec.dump());
    }

    // ---- security pattern ops --------------------------------------------------------

    bool dispatch_security(const std::string& op, const json& step, const json& args,
                           const std::string& actor_name)
    {
        if (op == "multisig_propose") {
            Bytes action = parse_action(args.at("action"));
            CallPayload payload{resolve_address(args.at("wallet")), "propose", {action}, 0};
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            if (receipt && receipt->success) {
                Decoder dec(receipt->return_value);
                std::uint64_t id = dec.u64();
                if (step.contains("save"))
                    vars_[step.at("save").get<std::string>()] = enc_u64(id);
            }
            finish_tx_step(step, receipt);
            return true;
        }
        if (op == "multisig_approve") {
            CallPayload payload{resolve_address(args.at("wallet")),
                                "approve",
                                {enc_u64(resolve_amount(args.at("proposal")))},
                                0};
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            finish_tx_step(step, receipt);
            if (receipt && receipt->success && args.contains("expect_executed")) {
                Decoder dec(receipt->return_value);
                bool executed = dec.boolean();
                emit_assert(executed == args.at("expect_executed").get<bool>(),
                            "multisig-executed",
                            json{{"expected", args.at("expect_executed").get<bool>()},
                                 {"actual", executed}});
            }
            return true;
        }
        if (op == "hashlock_lock") {
            Hash256 digest = dec_hash(resolve_bytes(args.at("digest")));
            std::uint64_t amount = resolve_amount(args.at("amount"));
            Encoder claimant;
            claimant.boolean(args.contains("claimant"));
            if (args.contains("claimant"))
                claimant.address(resolve_address(args.at("claimant")));
            Encoder timeout;
            timeout.boolean(args.contains("timeout_height"));
            if (args.contains("timeout_height"))
                timeout.u64(resolve_amount(args.at("timeout_height")));
            DeployPayload payload;
            payload.code = ContractCode{"hashlock-escrow"};
            payload.constructor_args = {enc_hash(digest), claimant.take(), timeout.take()};
            payload.value = amount;
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            if (receipt && receipt->success && step.contains("save"))
                vars_[step.at("save").get<std::string>()] = receipt->return_value;
            finish_tx_step(step, receipt);
            return true;
        }
        if (op == "hashlock_claim") {
            CallPayload payload{resolve_address(args.at("lock")),
                                "claim",
                                {resolve_bytes(args.at("preimage"))},
                                0};
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            finish_tx_step(step, receipt);
            return true;
        }
        if (op == "hashlock_refund") {
            CallPayload payload{resolve_address(args.at("lock")), "refund", {}, 0};
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            finish_tx_step(step, receipt);
            return true;
        }
        if (op == "gen_key") {
            Bytes key(kSecretKeySize);
            for (auto& b : key)
                b = static_cast<std::uint8_t>(rng_());
            keys_[step.at("save").get<std::string>()] = key;
            return true;
        }
        if (op == "encrypt") {
            const Bytes& key = key_of(args.at("key").get<std::string>());
            Bytes plaintext = resolve_bytes(args.at("plaintext"));
            Bytes nonce(kSealNonceSize);
            for (auto& b : nonce)
                b = static_cast<std::uint8_t>(rng_());
            sealed_[step.at("save").get<std::string>()] = encrypt_payload(plaintext, key, nonce);
            return true;
        }
        if (op == "decrypt") {
            const Bytes& key = key_of(args.at("key").get<std::string>());
            SealedPayload sealed;
            if (args.contains("sealed")) {
                auto it = sealed_.find(args.at("sealed").get<std::string>());
                if (it == sealed_.end())
                    throw ScriptError("unknown sealed payload");
                sealed = it->second;
            } else {
                Bytes raw = query_state(chain_, resolve_address(args.at("contract")),
                                        args.value("view", std::string("get")),
                                        {resolve_bytes(args.at("query_arg"))});
                sealed = decode_sealed(raw);
            }
            std::string expected = step.value("expect_error", std::string());
            try {
                Bytes plain = decrypt_payload(sealed, key);
                if (!expected.empty()) {
                    emit_assert(false, "expect-error",
                                json{{"expected", expected}, {"actual", "success"}});
                }
                if (args.contains("expect_plaintext"))
                    emit_assert(plain == resolve_bytes(args.at("expect_plaintext")),
                                "decrypt-plaintext", json{{"ok_detail", "plaintext comparison"}});
            } catch (const ChainError& e) {
                emit_assert(expected == err_name(e.code()), "expect-error",
                            json{{"expected", expected}, {"actual", err_name(e.code())}});
            }
            return true;
        }
        return false;
    }

    const Bytes& key_of(const std::string& name)
    {
        auto it = keys_.find(name);
        if (it == keys_.end())
            throw ScriptError("unknown key: " + name);
        return it->second;
    }

    Bytes parse_action(const json& spec)
    {
        if (spec.contains("transfer"))
            return encode_transfer_action(resolve_address(spec.at("transfer").at("to")),
                                          resolve_amount(spec.at("transfer").at("amount")));
        if (spec.contains("update_owners")) {
            std::vector<Address> owners;
            for (const auto& o : spec.at("update_owners").at("owners"))
                owners.push_back(resolve_address(o));
            return encode_update_owners_action(owners,
                                               resolve_amount(spec.at("update_owners").at("threshold")));
        }
        if (spec.contains("call")) {
            const json& c = spec.at("call");
            std::vector<Bytes> call_args;
            if (c.contains("args"))
                for (const auto& a : c.at("args"))
                    call_args.push_back(resolve_bytes(a));
            return encode_call_action(resolve_address(c.at("target")),
                                      c.at("function").get<std::string>(), call_args,
                                      c.contains("value") ? resolve_amount(c.at("value")) : 0);
        }
        throw ScriptError("bad multisig action: " + spec.dump());
    }

    // ---- data pattern ops ----------------------------------------------------------

    bool dispatch_data(const std::string& op, const json& step, const json& args,
                       const std::string& actor_name)
    {
        if (op == "anchor_store") {
            Bytes raw = resolve_bytes(args.at("data"));
            std::string uri = args.at("uri").get<std::string>();
            std::string mode = args.value("anchor_mode", std::string("tx-embed"));
            Hash256 digest = hash_data(raw);
            std::optional<ExecutionReceipt> receipt;
            if (mode == "tx-embed") {
                Bytes data = enc_hash(digest);
                append(data, bytes_of(uri));
                if (data.size() > chain_.profile().max_embed_bytes)
                    throw ChainError(Err::EmbedTooLarge,
                                     std::to_string(data.size()) + " bytes");
                receipt = run_tx(step, actor_name, Payload(EmbedPayload{std::move(data)}));
            } else if (mode == "contract-storage") {
                CallPayload payload{resolve_address(args.at("store")),
                                    "put",
                                    {enc_hash(digest), bytes_of(uri)},
                                    0};
                receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            } else {
                throw ScriptError("unknown anchor mode: " + mode);
            }
            if (receipt && receipt->success && step.contains("save")) {
                std::string name = step.at("save").get<std::string>();
                vars_[name] = Bytes(receipt->tx.bytes.begin(), receipt->tx.bytes.end());
                vars_[name + ".digest"] = enc_hash(digest);
                if (args.contains("out_file")) {
                    // Anchor record for off-chain consumers: digest,
                    // locator and the transaction holding them.
                    json record{{"digest", to_hex(digest)},
                                {"uri", uri},
                                {"tx_id", to_hex(receipt->tx)}};
                    std::filesystem::path out =
                        options_.output_dir / args.at("out_file").get<std::string>();
                    std::filesystem::create_directories(out.parent_path());
                    std::ofstream f(out);
                    f << record.dump(2) << "\n";
                }
            }
            finish_tx_step(step, receipt);
            return true;
        }
        if (op == "anchor_verify") {
            Hash256 tx = dec_hash(var_bytes_of(args.at("anchor").get<std::string>()));
            Bytes candidate = resolve_bytes(args.at("data"));
            if (args.contains("flip_byte") && !candidate.empty())
                candidate[args.at("flip_byte").get<std::size_t>() % candidate.size()] ^= 0x01;
            AnchorCheck check = anchor_verify(chain_, tx, candidate);
            std::string expect = args.at("expect").get<std::string>();
            std::string actual = check == AnchorCheck::Intact ? "intact" : "tampered";
            emit_assert(actual == expect, "anchor-verify",
                        json{{"expected", expect}, {"actual", actual}});
            return true;
        }
        if (op == "channel_open") {
            run_channel_open(step, args, actor_name);
            return true;
        }
        if (op == "channel_update") {
            const ChannelState& prev = state_of(args.at("prev").get<std::string>());
            auto& info = channel_of(args.at("channel").get<std::string>());
            std::int64_t delta = args.at("delta").get<std::int64_t>();
            ChannelState next =
                channel_update_offchain(prev, delta, actor(info.actor_a).key, actor(info.actor_b).key);
            states_[args.at("save").get<std::string>()] = next;
            emit("offchain-message",
                 json{{"from", info.actor_a},
                      {"to", info.actor_b},
                      {"note", "channel-update"},
                      {"seq", next.seq},
                      {"balance_a", amount_str(next.balance_a)},
                      {"balance_b", amount_str(next.balance_b)}});
            return true;
        }
        if (op == "channel_forge_state") {
            auto& info = channel_of(args.at("channel").get<std::string>());
            ChannelState s;
            s.channel = info.address;
            s.seq = resolve_amount(args.at("seq"));
            s.balance_a = resolve_amount(args.at("balance_a"));
            s.balance_b = resolve_amount(args.at("balance_b"));
            s.signature_a = sign_channel_state(s, actor(args.at("signer_a").get<std::string>()).key);
            s.signature_b = sign_channel_state(s, actor(args.at("signer_b").get<std::string>()).key);
            states_[step.at("save").get<std::string>()] = s;
            return true;
        }
        if (op == "channel_close" || op == "channel_dispute" || op == "channel_challenge") {
            auto& info = channel_of(args.at("channel").get<std::string>());
            const ChannelState& s = state_of(args.at("state").get<std::string>());
            const char* function = op == "channel_close"       ? "close_cooperative"
                                   : op == "channel_dispute"   ? "dispute_open"
                                                               : "challenge";
            CallPayload payload{info.address, function, channel_state_args(s), 0};
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            finish_tx_step(step, receipt);
            return true;
        }
        if (op == "channel_finalize") {
            auto& info = channel_of(args.at("channel").get<std::string>());
            CallPayload payload{info.address, "finalize", {}, 0};
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            finish_tx_step(step, receipt);
            return true;
        }
        if (op == "pair_bind") {
            run_pair_bind(step, args, actor_name);
            return true;
        }
        if (op == "pair_verify") {
            Address pair = resolve_address(args.at("pair"));
            Bytes candidate = args.contains("document_var")
                                  ? var_bytes_of(args.at("document_var").get<std::string>())
                                  : resolve_bytes(args.at("document"));
            if (args.contains("flip_byte")) {
                std::size_t at = args.at("flip_byte").get<std::size_t>() % candidate.size();
                candidate[at] ^= 0x01;
            }
            PairCheck check = pair_verify(chain_, pair, candidate);
            std::string actual = check == PairCheck::Bound ? "bound" : "mismatch";
            std::string expect = args.at("expect").get<std::string>();
            emit_assert(actual == expect, "pair-verify",
                        json{{"expected", expect}, {"actual", actual}});
            return true;
        }
        return false;
    }

    struct ChannelInfo {
        Address address;
        std::string actor_a;
        std::string actor_b;
    };

    ChannelInfo& channel_of(const std::string& name)
    {
        auto it = channels_.find(name);
        if (it == channels_.end())
            throw ScriptError("unknown channel: " + name);
        return it->second;
    }

    const ChannelState& state_of(const std::string& name)
    {
        auto it = states_.find(name);
        if (it == states_.end())
            throw ScriptError("unknown channel state: " + name);
        return it->second;
    }

    void run_channel_open(const json& step, const json& args, const std::string& actor_name)
    {
        std::string b_name = args.at("party_b").get<std::string>();
        std::uint64_t deposit_a = resolve_amount(args.at("deposit_a"));
        std::uint64_t deposit_b = resolve_amount(args.at("deposit_b"));
        std::uint64_t window = args.value("window", std::uint64_t{20});

        DeployPayload deploy;
        deploy.code = ContractCode{"channel"};
        deploy.constructor_args = {enc_address(actor(b_name).address), enc_u64(deposit_b),
                                   enc_u64(window)};
        deploy.value = deposit_a;
        auto receipt = run_tx(step, actor_name, Payload(std::move(deploy)));
        finish_tx_step(step, receipt);
        if (!receipt || !receipt->success)
            return;
        Address channel = dec_address(receipt->return_value);

        CallPayload join{channel, "join", {}, deposit_b};
        auto join_receipt = run_tx(step, b_name, Payload(std::move(join)));
        if (!join_receipt || !join_receipt->success)
            emit_assert(false, "channel-join",
                        json{{"detail", "party B failed to join the channel"}});

        std::string name = step.at("save").get<std::string>();
        channels_[name] = ChannelInfo{channel, actor_name, b_name};
        vars_[name] = enc_address(channel);

        ChannelState s0;
        s0.channel = channel;
        s0.seq = 0;
        s0.balance_a = deposit_a;
        s0.balance_b = deposit_b;
        s0.signature_a = sign_channel_state(s0, actor(actor_name).key);
        s0.signature_b = sign_channel_state(s0, actor(b_name).key);
        states_[name + ".s0"] = s0;
        emit("offchain-message", json{{"from", actor_name},
                                      {"to", b_name},
                                      {"note", "channel-initial-state"},
                                      {"seq", 0}});
    }

    void run_pair_bind(const json& step, const json& args, const std::string& actor_name)
    {
        Bytes document = resolve_bytes(args.at("document"));

        DeployPayload deploy;
        deploy.code = ContractCode{"pair-anchor"};
        auto receipt = run_tx(step, actor_name, Payload(std::move(deploy)));
        finish_tx_step(step, receipt);
        if (!receipt || !receipt->success)
            return;
        Address pair = dec_address(receipt->return_value);

        Bytes finalized = document;
        append(finalized, bytes_of(render_pair_address(pair)));
        Hash256 digest = hash_data(finalized);

        CallPayload bind{pair, "bind", {enc_hash(digest)}, 0};
        auto bind_receipt = run_tx(step, actor_name, Payload(std::move(bind)));
        if (!bind_receipt || !bind_receipt->success)
            emit_assert(false, "pair-bind", json{{"detail", "bind call failed"}});

        std::string name = step.at("save").get<std::string>();
        vars_[name] = enc_address(pair);
        vars_[name + ".doc"] = finalized;

        if (args.contains("out_file")) {
            std::filesystem::path out = options_.output_dir / args.at("out_file").get<std::string>();
            std::filesystem::create_directories(out.parent_path());
            std::ofstream f(out, std::ios::binary);
            f.write(reinterpret_cast<const char*>(finalized.data()),
                    static_cast<std::streamsize>(finalized.size()));
        }
    }

    // ---- oracle pattern ops -----------------------------------------------------------

    bool dispatch_oracle(const std::string& op, const json& step, const json& args,
                         const std::string& actor_name)
    {
        if (op == "oracle_inject_from_world" || op == "committee_report_from_world") {
            std::string query = args.at("query").get<std::string>();
            Bytes value = world_.view(actor_name, query);
            const char* function = op == "oracle_inject_from_world" ? "inject" : "report";
            CallPayload payload{resolve_address(args.at("consumer")),
                                function,
                                {bytes_of(query), value},
                                0};
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            finish_tx_step(step, receipt);
            return true;
        }
        if (op == "committee_resolve") {
            CallPayload payload{resolve_address(args.at("consumer")),
                                "resolve",
                                {bytes_of(args.at("query").get<std::string>())},
                                0};
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            finish_tx_step(step, receipt);
            if (receipt && receipt->success && args.contains("expect_status")) {
                Decoder dec(receipt->return_value);
                std::uint8_t status = dec.u8();
                Bytes value = dec.var_bytes();
                static const char* names[] = {"pending", "resolved", "unresolved"};
                std::string actual = status < 3 ? names[status] : "?";
                bool ok = actual == args.at("expect_status").get<std::string>();
                if (ok && args.contains("expect_value"))
                    ok = value == resolve_bytes(args.at("expect_value"));
                emit_assert(ok, "committee-status",
                            json{{"expected", args.at("expect_status").get<std::string>()},
                                 {"actual", actual},
                                 {"value", to_hex(value)}});
            }
            return true;
        }
        if (op == "vote_tally") {
            CallPayload payload{resolve_address(args.at("voting")),
                                "tally",
                                {enc_u64(resolve_amount(args.at("proposal")))},
                                0};
            auto receipt = run_tx(step, actor_name, Payload(std::move(payload)));
            finish_tx_step(step, receipt);
            if (receipt && receipt->success && args.contains("expect_status")) {
                Decoder dec(receipt->return_value);
                std::uint8_t status = dec.u8();
                Bytes value = dec.var_bytes();
                static const char* names[] = {"open", "resolved", "tied"};
                std::string actual = status < 3 ? names[status] : "?";
                bool ok = actual == args.at("expect_status").get<std::string>();
                if (ok && args.contains("expect_value"))
                    ok = value == resolve_bytes(args.at("expect_value"));
                emit_assert(ok, "vote-tally",
                            json{{"expected", args.at("expect_status").get<std::string>()},
                                 {"actual", actual},
                                 {"value", to_hex(value)}});
            }
            return true;
        }
        if (op == "reverse_validate") {
            Hash256 tx{};
            bool fabricated = args.value("fabricated", false);
            if (fabricated)
                tx = hash_data(bytes_of("no-such-transaction"));
            else
                tx = dec_hash(var_bytes_of(args.at("tx").get<std::string>()));
            Bytes record = resolve_bytes(args.at("record"));
            ReverseStatus status = reverse_validate(chain_, tx, record);
            std::string actual = status == ReverseStatus::Match      ? "match"
                                 : status == ReverseStatus::Mismatch ? "mismatch"
                                                                     : "not-found";
            emit_assert(actual == args.at("expect").get<std::string>(), "reverse-validate",
                        json{{"expected", args.at("expect").get<std::string>()},
                             {"actual", actual}});
            return true;
        }
        return false;
    }

    // ---- queries and assertions -----------------------------------------------------------

    void run_query_expect(const json& step, const json& args)
    {
        Address contract = resolve_address(args.at("contract"));
        std::string view = args.at("view").get<std::string>();
        std::vector<Bytes> view_args;
        if (args.contains("args"))
            for (const auto& a : args.at("args"))
                view_args.push_back(resolve_bytes(a));

        std::string expected_error = step.value("expect_error", std::string());
        try {
            Bytes result = query_state(chain_, contract, view, view_args);
            if (!expected_error.empty()) {
                emit_assert(false, "expect-error",
                            json{{"expected", expected_error}, {"actual", "success"}});
                return;
            }
            bool ok = true;
            json detail{{"view", view}, {"value", to_hex(result)}};
            if (args.contains("expect"))
                ok = result == resolve_bytes(args.at("expect"));
            if (args.contains("expect_u64")) {
                ok = dec_u64(result) == resolve_amount(args.at("expect_u64"));
                detail["value_u64"] = dec_u64(result);
            }
            if (step.contains("save") && ok)
                vars_[step.at("save").get<std::string>()] = result;
            emit_assert(ok, "query", detail);
        } catch (const ChainError& e) {
            emit_assert(expected_error == err_name(e.code()), "expect-error",
                        json{{"expected", expected_error}, {"actual", err_name(e.code())}});
        }
    }

    static bool compare(const std::string& cmp, std::uint64_t lhs, std::uint64_t rhs)
    {
        if (cmp == "eq") return lhs == rhs;
        if (cmp == "ne") return lhs != rhs;
        if (cmp == "lt") return lhs < rhs;
        if (cmp == "le") return lhs <= rhs;
        if (cmp == "gt") return lhs > rhs;
        if (cmp == "ge") return lhs >= rhs;
        throw ScriptError("unknown comparison: " + cmp);
    }

    void run_assert(const json& args)
    {
        std::string kind = args.at("kind").get<std::string>();

        if (kind == "balance") {
            std::uint64_t actual = chain_.get_balance(resolve_address(args.at("who")));
            std::string cmp = args.value("cmp", std::string("eq"));
            std::uint64_t expected = resolve_amount(args.at("value"));
            emit_assert(compare(cmp, actual, expected), "balance",
                        json{{"actual", amount_str(actual)},
                             {"cmp", cmp},
                             {"expected", amount_str(expected)}});
            return;
        }
        if (kind == "token_balance") {
            std::uint64_t actual = token_balance(chain_, resolve_address(args.at("token")),
                                                 resolve_address(args.at("holder")));
            std::string cmp = args.value("cmp", std::string("eq"));
            std::uint64_t expected = resolve_amount(args.at("value"));
            emit_assert(compare(cmp, actual, expected), "token-balance",
                        json{{"actual", amount_str(actual)},
                             {"cmp", cmp},
                             {"expected", amount_str(expected)}});
            return;
        }
        if (kind == "token_supply") {
            std::uint64_t actual = token_supply(chain_, resolve_address(args.at("token")));
            emit_assert(compare(args.value("cmp", std::string("eq")), actual,
                                resolve_amount(args.at("value"))),
                        "token-supply", json{{"actual", amount_str(actual)}});
            return;
        }
        if (kind == "confirmations") {
            Hash256 id = dec_hash(var_bytes_of(args.at("tx").get<std::string>()));
            auto conf = chain_.confirmations_of(id);
            if (args.contains("found")) {
                emit_assert(conf.has_value() == args.at("found").get<bool>(), "confirmations",
                            json{{"found", conf.has_value()}});
                return;
            }
            if (!conf) {
                emit_assert(false, "confirmations", json{{"detail", "transaction not found"}});
                return;
            }
            bool ok = true;
            if (args.contains("committed"))
                ok = ok && conf->committed == args.at("committed").get<bool>();
            if (args.contains("count"))
                ok = ok && compare(args.value("cmp", std::string("eq")), conf->count,
                                   resolve_amount(args.at("count")));
            emit_assert(ok, "confirmations",
                        json{{"count", conf->count}, {"committed", conf->committed}});
            return;
        }
        if (kind == "tx_count") {
            std::optional<Address> target;
            if (args.contains("to"))
                target = resolve_address(args.at("to"));
            std::string function = args.value("function", std::string());
            std::uint64_t from_step = args.value("from_step", std::uint64_t{0});
            std::uint64_t count = 0;
            for (const auto& rec : submitted_) {
                if (rec.step < from_step)
                    continue;
                if (target && (!rec.target || *rec.target != *target))
                    continue;
                if (!function.empty() && rec.function != function)
                    continue;
                ++count;
            }
            emit_assert(compare(args.value("cmp", std::string("eq")), count,
                                resolve_amount(args.at("value"))),
                        "tx-count", json{{"actual", count}});
            return;
        }
        if (kind == "chain_digest") {
            Hash256 now = chain_.state_digest();
            Bytes saved = var_bytes_of(args.at("equals").get<std::string>());
            emit_assert(Bytes(now.bytes.begin(), now.bytes.end()) == saved, "chain-digest",
                        json{{"detail", "chain state digest comparison"}});
            return;
        }
        if (kind == "storage_excludes") {
            const ContractInstance* inst = chain_.contract(resolve_address(args.at("contract")));
            if (!inst) {
                emit_assert(false, "storage-excludes", json{{"detail", "no such contract"}});
                return;
            }
            Bytes needle = resolve_bytes(args.at("needle"));
            bool found = false;
            for (const auto& [k, v] : inst->storage)
                found = found || contains_subsequence(v, needle);
            emit_assert(!found, "storage-excludes", json{{"plaintext_on_chain", found}});
            return;
        }
        if (kind == "var_eq") {
            emit_assert(var_bytes_of(args.at("left").get<std::string>()) ==
                            resolve_bytes(args.at("right")),
                        "var-eq", json{{"var", args.at("left").get<std::string>()}});
            return;
        }
        throw ScriptError("unknown assert kind: " + kind);
    }

    // ---- members -------------------------------------------------------------

    json script_;
    std::filesystem::path script_dir_;
    RunnerOptions options_;
    Chain chain_;
    Trace trace_;
    std::uint64_t seed_ = 0;
    std::string default_mode_;
    std::size_t step_index_ = 0;
    std::mt19937_64 rng_;

    std::map<std::string, ActorInfo> actors_;
    std::map<std::string, Bytes> vars_;
    std::map<std::string, Bytes> keys_;
    std::map<std::string, SealedPayload> sealed_;
    std::map<std::string, ChannelState> states_;
    std::map<std::string, ChannelInfo> channels_;
    std::map<std::string, Bytes> documents_;
    ExternalWorld world_;
    std::vector<TxRecord> submitted_;
    std::optional<Hash256> last_tx_;
};

struct RunResult {
    int exit_code = 2;
    Trace trace;
};

/// Loads and runs a scenario script. Exit codes: 0 pass, 1 assertion
/// failure, 2 parse/usage error.
inline RunResult run_scenario(const std::filesystem::path& script_path, RunnerOptions options = {})
{
    RunResult result;
    json script;
    {
        std::ifstream in(script_path);
        if (!in) {
            result.trace.name = script_path.string();
            return result; // exit 2
        }
        try {
            in >> script;
        } catch (const json::exception&) {
            return result;
        }
    }
    try {
        Runner runner(std::move(script), script_path.parent_path(), std::move(options));
        result.exit_code = runner.run();
        result.trace = runner.trace();
    } catch (const ScriptError&) {
        result.exit_code = 2;
    }
    return result;
}

// ---- offline trace verification ---------------------------------------------

struct TraceProblems {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

inline bool is_lower_hex(const std::string& s)
{
    for (char c : s)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')))
            return false;
    return true;
}

/// Re-checks trace invariants offline: event kinds, monotone step/tick
/// ordering, the dapp confirmation discipline, custody separation,
/// lowercase hashes and assertion outcomes.
inline TraceProblems verify_trace(const json& trace)
{
    TraceProblems out;
    auto complain = [&out](const std::string& p) { out.problems.push_back(p); };

    if (!trace.is_object() || !trace.contains("events") || !trace.at("events").is_array()) {
        complain("trace has no events array");
        return out;
    }
    static const std::set<std::string> kinds = {"tx-prepared",      "tx-confirmed-by-user",
                                                "tx-submitted",     "receipt",
                                                "offchain-message", "assertion"};

    std::uint64_t last_step = 0;
    std::uint64_t last_tick = 0;
    std::map<std::string, std::set<std::string>> seen; // tx_id -> kinds
    bool first = true;

    for (const auto& ev : trace.at("events")) {
        if (!ev.contains("kind") || !kinds.count(ev.at("kind").get<std::string>())) {
            complain("bad event kind");
            continue;
        }
        std::string kind = ev.at("kind").get<std::string>();
        std::uint64_t step = ev.value("step", std::uint64_t{0});
        std::uint64_t tick = ev.value("tick", std::uint64_t{0});
        if (!first && (step < last_step))
            complain("step indices decrease at step " + std::to_string(step));
        if (!first && (tick < last_tick))
            complain("ticks decrease at step " + std::to_string(step));
        last_step = step;
        last_tick = tick;
        first = false;

        const json& payload = ev.value("payload", json::object());
        std::string tx_id = payload.value("tx_id", std::string());
        if (!tx_id.empty() && (tx_id.size() != 64 || !is_lower_hex(tx_id)))
            complain("tx id is not lowercase 64-digit hex: " + tx_id);

        if (kind == "tx-submitted") {
            std::string mode = payload.value("mode", std::string());
            if (mode == "dapp") {
                if (!seen[tx_id].count("tx-prepared") || !seen[tx_id].count("tx-confirmed-by-user"))
                    complain("dapp submission without prepare+confirm: " + tx_id);
                if (payload.value("signer_custody", std::string()) != "self")
                    complain("dapp submission not self-signed: " + tx_id);
            } else if (mode == "semidapp") {
                if (seen[tx_id].count("tx-confirmed-by-user"))
                    complain("semidapp submission had a user confirmation: " + tx_id);
                if (payload.value("signer_custody", std::string()) != "provider")
                    complain("semidapp submission not provider-signed: " + tx_id);
            }
        }
        if (kind == "assertion" && payload.value("ok", true) == false)
            complain("failed assertion at step " + std::to_string(step));
        if (!tx_id.empty())
            seen[tx_id].insert(kind);
    }

    for (const auto& [tx_id, kinds_seen] : seen)
        if (kinds_seen.count("tx-submitted") && !kinds_seen.count("receipt"))
            complain("submitted transaction without a receipt: " + tx_id);

    return out;
}

} // namespace chainsim::scenario
