#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ustlab {

enum class ErrorKind {
    DuplicateEdge,
    SelfLoop,
    VertexOutOfRange,
    InfeasibleSpec,
    GenerationRetriesExhausted,
    GraphFormat,
    CapExceeded,
    AttemptsExhausted,
    NotATree,
    InvalidArgument,
    UnknownFlag,
    InvalidSpec,
    MissingGraph,
    Usage,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DuplicateEdge: return "DuplicateEdge";
        case ErrorKind::SelfLoop: return "SelfLoop";
        case ErrorKind::VertexOutOfRange: return "VertexOutOfRange";
        case ErrorKind::InfeasibleSpec: return "InfeasibleSpec";
        case ErrorKind::GenerationRetriesExhausted: return "GenerationRetriesExhausted";
        case ErrorKind::GraphFormat: return "GraphFormat";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::AttemptsExhausted: return "AttemptsExhausted";
        case ErrorKind::NotATree: return "NotATree";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::UnknownFlag: return "UnknownFlag";
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::MissingGraph: return "MissingGraph";
        case ErrorKind::Usage: return "Usage";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can report it as structured output.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the leading "Kind: ".
    std::string_view message() const noexcept { return std::string_view(what()).substr(to_string(kind_).size() + 2); }

private:
    ErrorKind kind_;
};

} // namespace ustlab
