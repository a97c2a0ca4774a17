#include "adp/qa.hpp"

#include <cctype>

#include "adp/validate.hpp"

namespace adp::qa {
namespace {

bool is_ascii_alpha(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

const std::optional<std::string>* action_description(const Action& a) {
    if (const auto* api = std::get_if<ApiAction>(&a)) return &api->description;
    if (const auto* code = std::get_if<CodeAction>(&a)) return &code->description;
    return nullptr;
}

}  // namespace

bool is_valid_identifier(const std::string& name) {
    if (name.empty() || !is_ascii_alpha(static_cast<unsigned char>(name.front()))) return false;
    for (unsigned char c : name)
        if (!is_ascii_alpha(c) && !(c >= '0' && c <= '9') && c != '_') return false;
    return true;
}

bool is_english_thought(const std::string& text, double min_alpha_ratio) {
    std::size_t ascii_letters = 0;
    std::size_t non_ascii_codepoints = 0;
    std::size_t run = 0;
    bool has_word = false;
    for (unsigned char c : text) {
        if (is_ascii_alpha(c)) {
            ++ascii_letters;
            if (++run >= 2) has_word = true;
        } else {
            run = 0;
            // count non-ASCII codepoints, not continuation bytes
            if (c >= 0x80 && (c & 0xC0) != 0x80) ++non_ascii_codepoints;
        }
    }
    std::size_t alphabetic = ascii_letters + non_ascii_codepoints;
    if (alphabetic == 0 || !has_word) return false;
    return static_cast<double>(ascii_letters) >= min_alpha_ratio * static_cast<double>(alphabetic);
}

CheckResult check_tool_call_format(const std::vector<Trajectory>& corpus, const QaConfig&) {
    CheckResult result;
    for (const Trajectory& t : corpus) {
        for (std::size_t i = 0; i < t.content.size(); ++i) {
            const Step& s = t.content[i];
            if (!s.is_action()) continue;
            const auto* api = std::get_if<ApiAction>(&s.action());
            if (!api) continue;
            if (!is_valid_identifier(api->function)) {
                result.pass = false;
                result.offenders.push_back({t.id, i, "bad function name '" + api->function + "'"});
            }
            for (auto it = api->kwargs.begin(); it != api->kwargs.end(); ++it) {
                if (!is_valid_identifier(it.key())) {
                    result.pass = false;
                    result.offenders.push_back({t.id, i, "bad kwargs key '" + it.key() + "'"});
                }
            }
        }
    }
    return result;
}

double thought_coverage(const std::vector<Trajectory>& corpus, const QaConfig& cfg) {
    std::size_t total = 0;
    std::size_t thoughtful = 0;
    for (const Trajectory& t : corpus) {
        for (const Step& s : t.content) {
            if (!s.is_action()) continue;
            const auto* desc = action_description(s.action());
            if (!desc) continue;  // MessageActions are not counted
            ++total;
            if (desc->has_value() &&
                is_english_thought(**desc, cfg.english_min_alpha_ratio))
                ++thoughtful;
        }
    }
    if (total == 0) return 1.0;
    return static_cast<double>(thoughtful) / static_cast<double>(total);
}

CheckResult check_termination(const std::vector<Trajectory>& corpus, const QaConfig& cfg) {
    CheckResult result;
    for (const Trajectory& t : corpus) {
        if (t.content.empty()) {
            result.pass = false;
            result.offenders.push_back({t.id, 0, "empty trajectory"});
            continue;
        }
        const Step& last = t.content.back();
        bool proper = false;
        if (last.is_action()) {
            if (std::holds_alternative<MessageAction>(last.action())) {
                proper = true;
            } else if (const auto* api = std::get_if<ApiAction>(&last.action())) {
                proper = cfg.terminal_functions.count(api->function) > 0;
            }
        }
        if (!proper) {
            result.pass = false;
            result.offenders.push_back(
                {t.id, t.content.size() - 1, "improper final step"});
        }
    }
    return result;
}

QaReport run_qa(const std::vector<Trajectory>& corpus, const QaConfig& cfg) {
    QaReport report;
    report.trajectories_checked = corpus.size();

    CheckResult format = check_tool_call_format(corpus, cfg);
    report.per_check["tool_call_format"] = {
        format.pass, std::to_string(format.offenders.size()) + " offending tool calls",
        std::nullopt};

    double coverage = thought_coverage(corpus, cfg);
    report.per_check["thought_coverage"] = {
        coverage >= cfg.thought_threshold,
        "coverage vs threshold " + std::to_string(cfg.thought_threshold), coverage};

    CheckResult termination = check_termination(corpus, cfg);
    report.per_check["termination"] = {
        termination.pass,
        std::to_string(termination.offenders.size()) + " improperly terminated trajectories",
        std::nullopt};

    std::size_t invalid = 0;
    for (const Trajectory& t : corpus)
        if (!validate(t, ValidationMode::Strict).ok) ++invalid;
    report.per_check["strict_validation"] = {
        invalid == 0, std::to_string(invalid) + " trajectories with strict violations",
        std::nullopt};

    for (const auto& [_, entry] : report.per_check)
        report.overall_pass = report.overall_pass && entry.pass;
    return report;
}

JsonValue qa_report_to_json(const QaReport& report) {
    JsonValue doc = JsonValue::object();
    doc["overall_pass"] = report.overall_pass;
    doc["trajectories_checked"] = report.trajectories_checked;
    JsonValue checks = JsonValue::object();
    for (const auto& [name, entry] : report.per_check) {
        JsonValue e = JsonValue::object();
        e["pass"] = entry.pass;
        e["detail"] = entry.detail;
        if (entry.value) e["value"] = *entry.value;
        checks[name] = std::move(e);
    }
    doc["per_check"] = std::move(checks);
    return doc;
}

}  // namespace adp::qa
