#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dosn {

enum class ErrorCode {
    InvalidArgument,
    InvalidEncoding,
    // crypto
    AuthenticationFailed,
    // secret sharing
    DivisionByZero,
    InvalidThreshold,
    InsufficientShares,
    MismatchedShares,
    // merkle
    EmptyContent,
    IndexOutOfRange,
    // ledger
    BadSignature,
    BadNonce,
    DuplicateContent,
    NotFound,
    ChainInvalid,
    // access contract
    NotAnchored,
    NotOwner,
    TooFewKeyHolders,
    DuplicateKeyHolder,
    LeafMismatch,
    UnknownPolicy,
    PolicyRevoked,
    ContractDeactivated,
    // storage
    NotEnoughMiners,
    UnknownMiner,
    DuplicateMiner,
    Unavailable,
    NotStored,
    BadAuthorization,
    // protocol
    UnknownContent,
    RollbackIncomplete,
    // workspace
    WorkspaceError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    explicit Error(ErrorCode code) : std::runtime_error(std::string(to_string(code))), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace dosn
