#ifndef APPLINK_ERRORS_HPP
#define APPLINK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace applink {

enum class ErrorKind {
    // spec loading
    MalformedSpec,
    DanglingReference,
    MissingMain,
    // driver
    UnknownOperation,
    NoHandler,
    AmbiguousInstance,
    // graph / shortcut documents
    MalformedGraph,
    MalformedTable,
    EndpointMismatch,
    // synthesizer
    EmptyPath,
    UnboundLabel,
    MalformedUrl,
    // crawler / executor
    PathReplayFailed,
    RecoveryDiverged,
    UnknownActivity,
    NotFound,
    TargetMismatch,
    // repository
    CorruptStore,
    BindFailure,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace applink

#endif // APPLINK_ERRORS_HPP
