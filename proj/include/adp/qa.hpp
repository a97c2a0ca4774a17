#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adp/types.hpp"

namespace adp::qa {

struct QaConfig {
    double thought_threshold = 0.80;
    std::set<std::string> terminal_functions = {"finish", "stop", "submit", "send_msg_to_user"};
    double english_min_alpha_ratio = 0.5;
};

/// True when `name` matches the tool identifier rule: letters, digits and
/// underscore, starting with a letter.
bool is_valid_identifier(const std::string& name);

/// Cheap, deterministic English heuristic for function thoughts: ASCII
/// letters dominate the alphabetic content and at least one real word is
/// present.
bool is_english_thought(const std::string& text, double min_alpha_ratio);

struct Offender {
    std::string trajectory_id;
    std::size_t step_index = 0;
    std::string detail;
};

struct CheckResult {
    bool pass = true;
    std::vector<Offender> offenders;
};

CheckResult check_tool_call_format(const std::vector<Trajectory>& corpus, const QaConfig& cfg);

/// Fraction of API/Code actions carrying an English description. Defined as
/// 1.0 when the corpus has no such actions.
double thought_coverage(const std::vector<Trajectory>& corpus, const QaConfig& cfg);

CheckResult check_termination(const std::vector<Trajectory>& corpus, const QaConfig& cfg);

struct CheckEntry {
    bool pass = true;
    std::string detail;
    std::optional<double> value;
};

struct QaReport {
    std::map<std::string, CheckEntry> per_check;
    bool overall_pass = true;
    std::size_t trajectories_checked = 0;
};

/// Runs tool-call format, thought coverage, termination, and strict
/// validation over the corpus.
QaReport run_qa(const std::vector<Trajectory>& corpus, const QaConfig& cfg);

JsonValue qa_report_to_json(const QaReport& report);

}  // namespace adp::qa
