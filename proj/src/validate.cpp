#include "adp/validate.hpp"

namespace adp {
namespace {

void add(ValidationReport& r, std::string code, std::string path, std::string message) {
    r.ok = false;
    r.violations.push_back({std::move(code), std::move(path), std::move(message)});
}

void check_step(ValidationReport& r, const Step& s, const std::string& path) {
    if (s.is_action()) {
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, ApiAction>) {
                    if (a.function.empty())
                        add(r, "API_FUNCTION_EMPTY", path + "/function", "function is empty");
                    for (auto it = a.kwargs.begin(); it != a.kwargs.end(); ++it)
                        if (it.key().empty())
                            add(r, "KWARGS_KEY_EMPTY", path + "/kwargs", "empty kwargs key");
                } else if constexpr (std::is_same_v<T, CodeAction>) {
                    if (a.language.empty())
                        add(r, "CODE_LANGUAGE_EMPTY", path + "/language", "language is empty");
                    if (a.content.empty())
                        add(r, "CODE_CONTENT_EMPTY", path + "/content", "content is empty");
                } else {
                    if (a.content.empty())
                        add(r, "MESSAGE_EMPTY", path + "/content", "content is empty");
                }
            },
            s.action());
    } else {
        std::visit(
            [&](const auto& o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, WebObservation>) {
                    if (!o.html && !o.axtree)
                        add(r, "WEBOBS_EMPTY", path, "web observation has neither html nor axtree");
                    if (o.viewport_size &&
                        (o.viewport_size->width <= 0 || o.viewport_size->height <= 0))
                        add(r, "VIEWPORT_NONPOSITIVE", path + "/viewport_size",
                            "viewport dimensions must be positive");
                } else {
                    (void)o;
                }
            },
            s.observation());
    }
}

}  // namespace

ValidationReport validate(const Trajectory& t, ValidationMode mode) {
    ValidationReport r;
    r.trajectory_id = t.id;

    if (t.id.empty()) add(r, "ID_EMPTY", "/id", "id is empty");
    for (unsigned char c : t.id)
        if (c < 0x20 || c == 0x7f) {
            add(r, "ID_CONTROL_CHAR", "/id", "id contains control characters");
            break;
        }

    if (t.content.empty()) {
        add(r, "CONTENT_EMPTY", "/content", "content is empty");
        return r;
    }

    bool has_action = false;
    for (std::size_t i = 0; i < t.content.size(); ++i) {
        const std::string path = "/content/" + std::to_string(i);
        const Step& s = t.content[i];
        has_action = has_action || s.is_action();
        check_step(r, s, path);
        if (mode == ValidationMode::Strict && i > 0 &&
            s.is_action() == t.content[i - 1].is_action())
            add(r, "ALTERNATION", path, "two consecutive steps of the same kind");
    }
    if (!has_action) add(r, "NO_ACTION", "/content", "trajectory contains no action");

    if (mode == ValidationMode::Strict && t.content.front().is_observation()) {
        const Observation& o = t.content.front().observation();
        if (const auto* text = std::get_if<TextObservation>(&o);
            text && text->source != TextSource::User)
            add(r, "FIRST_TEXTOBS_NOT_USER", "/content/0/source",
                "opening text observation must come from the user");
    }

    return r;
}

}  // namespace adp
