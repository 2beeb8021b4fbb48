#ifndef SENSORNET_ERROR_HPP
#define SENSORNET_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sensornet {

/// Failure conditions surfaced by the library. Each code has a stable
/// diagnostic name so callers (and the CLI) can react per condition
/// instead of string-matching messages.
enum class ErrorCode {
    EmptyInput,
    NoIntersection,
    InvalidFaultBound,
    EmptyEstimate,
    IncompleteRule,
    InvalidInterval,
    InvalidTolerance,
    InvalidTreeSize,
    InvalidSize,
    InvalidTopology,
    InvalidDelay,
    NoEdges,
    InvalidDepth,
    TooLarge,
    IncompleteReadings,
    TypeMismatch,
    ParseError,
    IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const { return code_; }

    /// Message without the "<Code>: " prefix that what() carries.
    const std::string& message() const { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

}  // namespace sensornet

#endif
