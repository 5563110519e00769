#pragma once

#include <stdexcept>
#include <string>

namespace qa {

enum class ErrorCode {
    WrongDialect,
    InvalidOperator,
    UnknownVariable,
    UnknownColumn,
    UnknownTerm,
    NoAnswerSet,
    TypeMismatch,
    EngineError,
    DuplicateKind,
    TranscriptExhausted,
    HttpFailure,
    BadFixture,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::WrongDialect: return "WrongDialect";
        case ErrorCode::InvalidOperator: return "InvalidOperator";
        case ErrorCode::UnknownVariable: return "UnknownVariable";
        case ErrorCode::UnknownColumn: return "UnknownColumn";
        case ErrorCode::UnknownTerm: return "UnknownTerm";
        case ErrorCode::NoAnswerSet: return "NoAnswerSet";
        case ErrorCode::TypeMismatch: return "TypeMismatch";
        case ErrorCode::EngineError: return "EngineError";
        case ErrorCode::DuplicateKind: return "DuplicateKind";
        case ErrorCode::TranscriptExhausted: return "TranscriptExhausted";
        case ErrorCode::HttpFailure: return "HttpFailure";
        case ErrorCode::BadFixture: return "BadFixture";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable code; the agent loop converts
/// these into interpreter feedback strings instead of letting them escape.
class QueryError : public std::runtime_error {
public:
    QueryError(ErrorCode code, std::string message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace qa
