#pragma once

#include <stdexcept>
#include <string>

namespace pronmod {

// All toolkit errors derive from Error so callers can catch one base type.
// The `code()` string is stable and machine-readable; the CLI prints it as
// `ERR <code> <message>`.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct UnknownSymbolError : Error {
    explicit UnknownSymbolError(const std::string& msg) : Error("UnknownSymbol", msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("ParseError", msg) {}
};

struct NotFoundError : Error {
    explicit NotFoundError(const std::string& msg) : Error("NotFound", msg) {}
};

struct ConflictError : Error {
    explicit ConflictError(const std::string& msg) : Error("Conflict", msg) {}
};

struct SymbolOutsideModelError : Error {
    explicit SymbolOutsideModelError(const std::string& msg) : Error("SymbolOutsideModel", msg) {}
};

struct OverfullChunkError : Error {
    explicit OverfullChunkError(const std::string& msg) : Error("OverfullChunk", msg) {}
};

struct DimensionMismatchError : Error {
    explicit DimensionMismatchError(const std::string& msg) : Error("DimensionMismatch", msg) {}
};

struct NonFiniteLossError : Error {
    explicit NonFiniteLossError(const std::string& msg) : Error("NonFiniteLoss", msg) {}
};

struct TierMismatchError : Error {
    explicit TierMismatchError(const std::string& msg) : Error("TierMismatch", msg) {}
};

struct InsufficientDataError : Error {
    explicit InsufficientDataError(const std::string& msg) : Error("InsufficientData", msg) {}
};

struct IndexOutOfRangeError : Error {
    explicit IndexOutOfRangeError(const std::string& msg) : Error("IndexOutOfRange", msg) {}
};

struct RuleConflictError : Error {
    explicit RuleConflictError(const std::string& msg) : Error("RuleConflict", msg) {}
};

struct LengthMismatchError : Error {
    explicit LengthMismatchError(const std::string& msg) : Error("LengthMismatch", msg) {}
};

struct UnsupportedCharacterError : Error {
    explicit UnsupportedCharacterError(const std::string& msg) : Error("UnsupportedCharacter", msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("Io", msg) {}
};

} // namespace pronmod
