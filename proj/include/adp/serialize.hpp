#pragma once

#include <stdexcept>
#include <string>

#include "adp/types.hpp"

namespace adp {

enum class ParseErrorCode {
    MalformedJson,
    UnknownStepKind,
    MissingField,
    WrongType,
};

const char* parse_error_code_name(ParseErrorCode c);

/// Thrown by parse_trajectory on any structural problem. `path` is a JSON
/// pointer into the offending document.
class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorCode code, std::string path, const std::string& message)
        : std::runtime_error(std::string(parse_error_code_name(code)) + " at '" + path +
                             "': " + message),
          code_(code),
          path_(std::move(path)) {}

    ParseErrorCode code() const { return code_; }
    const std::string& path() const { return path_; }

private:
    ParseErrorCode code_;
    std::string path_;
};

/// Parses one JSON document into a Trajectory. Unknown top-level or step-level
/// keys are rejected; unknown keys inside `details` are preserved verbatim.
Trajectory parse_trajectory(const std::string& text);

/// Canonical single-line UTF-8 serialization. Keys are emitted in a fixed
/// order (id, content, details; per step: kind first, then the variant's
/// fields in declaration order); object keys inside kwargs/details keep
/// insertion order. parse_trajectory(serialize_trajectory(t)) == t.
std::string serialize_trajectory(const Trajectory& t);

}  // namespace adp
