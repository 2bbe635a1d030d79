// Copyright (c) 2026 The chainsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <stdexcept>
#include <string>

namespace chainsim {

/// Error codes shared by the ledger, the contract runtime and the built-in
/// contract behaviors. Codes that occur during on-chain execution travel in
/// receipts; codes raised while preparing or validating a transaction are
/// thrown as ChainError.
enum class Err {
    None = 0,

    // ledger
    EmptySeed,
    SenderKeyMismatch,
    BadSignature,
    BadNonce,
    OversizeTransaction,
    InsufficientBalance,
    EmbedTooLarge,

    // runtime
    UnknownCodeId,
    BehaviorNotAllowed,
    ConstructorRejected,
    InsufficientGas,
    NoSuchContract,
    ContractTerminated,
    DepthLimit,
    NotAuthorized,
    NoSuchKey,
    BadArguments,

    // multisig
    NotAnOwner,
    NoSuchProposal,
    AlreadyExecuted,

    // hashlock
    WrongPreimage,
    WrongClaimant,
    AlreadyClaimed,
    TimedOut,
    RefundUnavailable,

    // sealed payloads
    BadKeyLength,
    AuthFailure,

    // registry / kv-store
    NameTaken,
    NoSuchName,
    NoSuchVersion,

    // factory
    UnknownTemplate,

    // incentive job
    TooEarly,
    AlreadyDone,
    InsufficientReward,

    // deposit escrow
    AlreadyResolved,

    // token
    InsufficientAllowance,

    // channels
    Overdraft,
    MissingSignature,
    BadSignatures,
    SplitMismatch,
    NotOpen,
    StaleState,
    DeadlinePassed,

    // oracles / voting
    AlreadyRegistered,
    NotInCommittee,
    WindowClosed,
    NoSuchAlternative,

    // pair anchor
    AlreadyBound,

    // anchors
    NoSuchAnchor,

    // scenario driver
    UserRejected,
    ProviderUnavailable,
    ParseError,
    AssertionFailed,
};

inline const char* err_name(Err e)
{
    switch (e) {
    case Err::None: return "None";
    case Err::EmptySeed: return "EmptySeed";
    case Err::SenderKeyMismatch: return "SenderKeyMismatch";
    case Err::BadSignature: return "BadSignature";
    case Err::BadNonce: return "BadNonce";
    case Err::OversizeTransaction: return "OversizeTransaction";
    case Err::InsufficientBalance: return "InsufficientBalance";
    case Err::EmbedTooLarge: return "EmbedTooLarge";
    case Err::UnknownCodeId: return "UnknownCodeId";
    case Err::BehaviorNotAllowed: return "BehaviorNotAllowed";
    case Err::ConstructorRejected: return "ConstructorRejected";
    case Err::InsufficientGas: return "InsufficientGas";
    case Err::NoSuchContract: return "NoSuchContract";
    case Err::ContractTerminated: return "ContractTerminated";
    case Err::DepthLimit: return "DepthLimit";
    case Err::NotAuthorized: return "NotAuthorized";
    case Err::NoSuchKey: return "NoSuchKey";
    case Err::BadArguments: return "BadArguments";
    case Err::NotAnOwner: return "NotAnOwner";
    case Err::NoSuchProposal: return "NoSuchProposal";
    case Err::AlreadyExecuted: return "AlreadyExecuted";
    case Err::WrongPreimage: return "WrongPreimage";
    case Err::WrongClaimant: return "WrongClaimant";
    case Err::AlreadyClaimed: return "AlreadyClaimed";
    case Err::TimedOut: return "TimedOut";
    case Err::RefundUnavailable: return "RefundUnavailable";
    case Err::BadKeyLength: return "BadKeyLength";
    case Err::AuthFailure: return "AuthFailure";
    case Err::NameTaken: return "NameTaken";
    case Err::NoSuchName: return "NoSuchName";
    case Err::NoSuchVersion: return "NoSuchVersion";
    case Err::UnknownTemplate: return "UnknownTemplate";
    case Err::TooEarly: return "TooEarly";
    case Err::AlreadyDone: return "AlreadyDone";
    case Err::InsufficientReward: return "InsufficientReward";
    case Err::AlreadyResolved: return "AlreadyResolved";
    case Err::InsufficientAllowance: return "InsufficientAllowance";
    case Err::Overdraft: return "Overdraft";
    case Err::MissingSignature: return "MissingSignature";
    case Err::BadSignatures: return "BadSignatures";
    case Err::SplitMismatch: return "SplitMismatch";
    case Err::NotOpen: return "NotOpen";
    case Err::StaleState: return "StaleState";
    case Err::DeadlinePassed: return "DeadlinePassed";
    case Err::AlreadyRegistered: return "AlreadyRegistered";
    case Err::NotInCommittee: return "NotInCommittee";
    case Err::WindowClosed: return "WindowClosed";
    case Err::NoSuchAlternative: return "NoSuchAlternative";
    case Err::AlreadyBound: return "AlreadyBound";
    case Err::NoSuchAnchor: return "NoSuchAnchor";
    case Err::UserRejected: return "UserRejected";
    case Err::ProviderUnavailable: return "ProviderUnavailable";
    case Err::ParseError: return "ParseError";
    case Err::AssertionFailed: return "AssertionFailed";
    }
    return "Unknown";
}

/// Thrown for failures outside on-chain execution (invalid submissions,
/// bad queries, misuse of the API). On-chain failures are reported through
/// ExecutionReceipt::error instead.
class ChainError : public std::runtime_error {
public:
    ChainError(Err code, std::string detail = {})
        : std::runtime_error(detail.empty() ? std::string(err_name(code))
                                            : std::string(err_name(code)) + ": " + detail)
        , code_(code)
    {
    }

    Err code() const { return code_; }

private:
    Err code_;
};

} // namespace chainsim
