#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epv {

// Input errors map to CLI exit code 2, analysis errors to exit code 1.
enum class ErrorKind { input, analysis };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::size_t line = 0)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          kind_(kind),
          line_(line) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// 1-based source line, or 0 when the error is not tied to a file row.
    std::size_t line() const noexcept { return line_; }

private:
    ErrorKind kind_;
    std::size_t line_;
};

#define EPV_DEFINE_ERROR(Name, Kind)                                      \
    class Name : public Error {                                           \
    public:                                                               \
        explicit Name(const std::string& what, std::size_t line = 0)      \
            : Error(ErrorKind::Kind, what, line) {}                       \
    }

EPV_DEFINE_ERROR(ConfigError, input);
EPV_DEFINE_ERROR(ParseError, input);
EPV_DEFINE_ERROR(UnknownAction, input);
EPV_DEFINE_ERROR(InvalidCoordinate, input);
EPV_DEFINE_ERROR(OutOfModelArea, input);
EPV_DEFINE_ERROR(MissingDirection, input);
EPV_DEFINE_ERROR(MissingGeometry, input);
EPV_DEFINE_ERROR(SegmentationError, input);
EPV_DEFINE_ERROR(ContractViolation, analysis);
EPV_DEFINE_ERROR(InsufficientData, analysis);
EPV_DEFINE_ERROR(ZeroReturnMatch, analysis);
EPV_DEFINE_ERROR(InsufficientTeams, analysis);

#undef EPV_DEFINE_ERROR

}  // namespace epv
