#pragma once

#include <string>
#include <vector>

#include "adp/types.hpp"

namespace adp {

enum class ValidationMode { Strict, Lenient };

struct Violation {
    std::string code;
    std::string path;  // JSON pointer into the serialized document
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::string trajectory_id;
    bool ok = true;
    std::vector<Violation> violations;
};

/// Checks every schema invariant. Strict mode additionally enforces
/// action/observation alternation and that an opening TextObservation has
/// source=user. Violations are data, never exceptions.
ValidationReport validate(const Trajectory& t, ValidationMode mode);

}  // namespace adp
