#pragma once

#include <stdexcept>
#include <string>

namespace haven {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ingest / IO
struct MalformedRow : Error {
    MalformedRow(const std::string& path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};
struct DuplicateDate : Error { using Error::Error; };
struct NonPositivePrice : Error { using Error::Error; };
struct TooShort : Error { using Error::Error; };
struct InsufficientOverlap : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// Linear algebra / regression
struct SingularDesign : Error { using Error::Error; };
struct InvalidDesign : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// Estimation
struct DegenerateSeries : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };

// Crisis window / pipeline
struct WindowOutOfRange : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace haven
