#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hapview {

enum class ErrorKind {
    InvalidBase,
    OutOfBounds,
    MalformedHeader,
    MalformedRecord,
    DimensionMismatch,
    DuplicateMeta,
    KindMismatch,
    InvalidRange,
    InvalidPattern,
    InvalidThreshold,
    UnknownReference,
    UnknownMeta,
    InvalidGrouping,
    InvalidStep,
    EmptyRender,
    InvalidFormat,
    IoError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure in the library is reported as an Error carrying a kind and,
/// for parser failures, the 1-based input line.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> line = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> line_;
    std::string detail_;
};

}  // namespace hapview
