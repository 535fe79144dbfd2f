#include "dosn/error.hpp"

namespace dosn {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidEncoding: return "InvalidEncoding";
        case ErrorCode::AuthenticationFailed: return "AuthenticationFailed";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::InvalidThreshold: return "InvalidThreshold";
        case ErrorCode::InsufficientShares: return "InsufficientShares";
        case ErrorCode::MismatchedShares: return "MismatchedShares";
        case ErrorCode::EmptyContent: return "EmptyContent";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::BadSignature: return "BadSignature";
        case ErrorCode::BadNonce: return "BadNonce";
        case ErrorCode::DuplicateContent: return "DuplicateContent";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::ChainInvalid: return "ChainInvalid";
        case ErrorCode::NotAnchored: return "NotAnchored";
        case ErrorCode::NotOwner: return "NotOwner";
        case ErrorCode::TooFewKeyHolders: return "TooFewKeyHolders";
        case ErrorCode::DuplicateKeyHolder: return "DuplicateKeyHolder";
        case ErrorCode::LeafMismatch: return "LeafMismatch";
        case ErrorCode::UnknownPolicy: return "UnknownPolicy";
        case ErrorCode::PolicyRevoked: return "PolicyRevoked";
        case ErrorCode::ContractDeactivated: return "ContractDeactivated";
        case ErrorCode::NotEnoughMiners: return "NotEnoughMiners";
        case ErrorCode::UnknownMiner: return "UnknownMiner";
        case ErrorCode::DuplicateMiner: return "DuplicateMiner";
        case ErrorCode::Unavailable: return "Unavailable";
        case ErrorCode::NotStored: return "NotStored";
        case ErrorCode::BadAuthorization: return "BadAuthorization";
        case ErrorCode::UnknownContent: return "UnknownContent";
        case ErrorCode::RollbackIncomplete: return "RollbackIncomplete";
        case ErrorCode::WorkspaceError: return "WorkspaceError";
    }
    return "Unknown";
}

}  // namespace dosn
