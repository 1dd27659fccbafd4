#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lrsp {

enum class Errc {
    UnbalancedParens,
    EmptyNode,
    MalformedLf,
    UnknownNonterminal,
    AlignmentMismatch,
    UnreachableStart,
    DepthExceeded,
    UnknownVariable,
    PoolTooSmall,
    DimensionMismatch,
    MissingScore,
    MissingEmbedding,
    BudgetExceedsPool,
    EmptyBuffer,
    CapacityExceedsClusters,
    SqlParseError,
    CorpusTooSmall,
    EmptyCorpus,
    ProfileMismatch,
    MissingTranslation,
    MissingMachineTranslation,
    MissingPrediction,
    InvalidConfig,
    InvalidArgument,
    Io,
};

constexpr std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::UnbalancedParens: return "UnbalancedParens";
        case Errc::EmptyNode: return "EmptyNode";
        case Errc::MalformedLf: return "MalformedLf";
        case Errc::UnknownNonterminal: return "UnknownNonterminal";
        case Errc::AlignmentMismatch: return "AlignmentMismatch";
        case Errc::UnreachableStart: return "UnreachableStart";
        case Errc::DepthExceeded: return "DepthExceeded";
        case Errc::UnknownVariable: return "UnknownVariable";
        case Errc::PoolTooSmall: return "PoolTooSmall";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::MissingScore: return "MissingScore";
        case Errc::MissingEmbedding: return "MissingEmbedding";
        case Errc::BudgetExceedsPool: return "BudgetExceedsPool";
        case Errc::EmptyBuffer: return "EmptyBuffer";
        case Errc::CapacityExceedsClusters: return "CapacityExceedsClusters";
        case Errc::SqlParseError: return "SqlParseError";
        case Errc::CorpusTooSmall: return "CorpusTooSmall";
        case Errc::EmptyCorpus: return "EmptyCorpus";
        case Errc::ProfileMismatch: return "ProfileMismatch";
        case Errc::MissingTranslation: return "MissingTranslation";
        case Errc::MissingMachineTranslation: return "MissingMachineTranslation";
        case Errc::MissingPrediction: return "MissingPrediction";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI's exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace lrsp
