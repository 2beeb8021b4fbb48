#include "sensornet/error.hpp"

namespace sensornet {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::NoIntersection: return "NoIntersection";
        case ErrorCode::InvalidFaultBound: return "InvalidFaultBound";
        case ErrorCode::EmptyEstimate: return "EmptyEstimate";
        case ErrorCode::IncompleteRule: return "IncompleteRule";
        case ErrorCode::InvalidInterval: return "InvalidInterval";
        case ErrorCode::InvalidTolerance: return "InvalidTolerance";
        case ErrorCode::InvalidTreeSize: return "InvalidTreeSize";
        case ErrorCode::InvalidSize: return "InvalidSize";
        case ErrorCode::InvalidTopology: return "InvalidTopology";
        case ErrorCode::InvalidDelay: return "InvalidDelay";
        case ErrorCode::NoEdges: return "NoEdges";
        case ErrorCode::InvalidDepth: return "InvalidDepth";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::IncompleteReadings: return "IncompleteReadings";
        case ErrorCode::TypeMismatch: return "TypeMismatch";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      message_(message) {}

}  // namespace sensornet
