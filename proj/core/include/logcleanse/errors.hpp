#pragma once

#include <stdexcept>
#include <string>

namespace logcleanse {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedEntry : Error {
    using Error::Error;
};
struct EmptyEntry : Error {
    using Error::Error;
};
struct PatternCompileError : Error {
    using Error::Error;
};
struct DuplicateRank : Error {
    using Error::Error;
};
struct SpanMismatch : Error {
    using Error::Error;
};
struct PolicyParseError : Error {
    using Error::Error;
};
struct SeverityOutOfRange : Error {
    using Error::Error;
};
struct UnsupportedLength : Error {
    using Error::Error;
};
struct TableCorrupt : Error {
    using Error::Error;
};
struct UnknownKey : Error {
    using Error::Error;
};
struct EmptyMatrix : Error {
    using Error::Error;
};

}  // namespace logcleanse
