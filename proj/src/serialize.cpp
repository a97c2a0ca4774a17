#include "adp/serialize.hpp"

#include <set>

namespace adp {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void missing(const std::string& path, const std::string& key) {
    throw ParseError(ParseErrorCode::MissingField, path + "/" + key, "required field missing");
}

[[noreturn]] void wrong_type(const std::string& path, const std::string& expected) {
    throw ParseError(ParseErrorCode::WrongType, path, "expected " + expected);
}

const Json& require(const Json& obj, const std::string& path, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) missing(path, key);
    return *it;
}

std::string require_string(const Json& obj, const std::string& path, const std::string& key) {
    const Json& v = require(obj, path, key);
    if (!v.is_string()) wrong_type(path + "/" + key, "string");
    return v.get<std::string>();
}

std::optional<std::string> optional_string(const Json& obj, const std::string& path,
                                           const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) wrong_type(path + "/" + key, "string");
    return it->get<std::string>();
}

// Empty descriptions are normalized to absent.
std::optional<std::string> optional_description(const Json& obj, const std::string& path) {
    auto d = optional_string(obj, path, "description");
    if (d && d->empty()) return std::nullopt;
    return d;
}

void reject_unknown_keys(const Json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known)
            throw ParseError(ParseErrorCode::WrongType, path + "/" + it.key(),
                             "unknown key '" + it.key() + "'");
    }
}

std::string to_lower(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

Step parse_step(const Json& step, const std::string& path) {
    if (!step.is_object()) wrong_type(path, "object");
    std::string kind = require_string(step, path, "kind");

    if (kind == "api_action") {
        reject_unknown_keys(step, path, {"kind", "function", "kwargs", "description"});
        ApiAction a;
        a.function = require_string(step, path, "function");
        const Json& kwargs = require(step, path, "kwargs");
        if (!kwargs.is_object()) wrong_type(path + "/kwargs", "object");
        a.kwargs = kwargs;
        a.description = optional_description(step, path);
        return make_step(Action{std::move(a)});
    }
    if (kind == "code_action") {
        reject_unknown_keys(step, path, {"kind", "language", "content", "description"});
        CodeAction a;
        a.language = to_lower(require_string(step, path, "language"));
        a.content = require_string(step, path, "content");
        a.description = optional_description(step, path);
        return make_step(Action{std::move(a)});
    }
    if (kind == "message_action") {
        reject_unknown_keys(step, path, {"kind", "content"});
        MessageAction a;
        a.content = require_string(step, path, "content");
        return make_step(Action{std::move(a)});
    }
    if (kind == "text_observation") {
        reject_unknown_keys(step, path, {"kind", "source", "content"});
        TextObservation o;
        std::string source = require_string(step, path, "source");
        if (source == "user")
            o.source = TextSource::User;
        else if (source == "environment")
            o.source = TextSource::Environment;
        else
            wrong_type(path + "/source", "\"user\" or \"environment\"");
        o.content = require_string(step, path, "content");
        return make_step(Observation{std::move(o)});
    }
    if (kind == "web_observation") {
        reject_unknown_keys(step, path, {"kind", "html", "axtree", "url", "viewport_size",
                                         "image_observation"});
        WebObservation o;
        o.html = optional_string(step, path, "html");
        o.axtree = optional_string(step, path, "axtree");
        o.url = optional_string(step, path, "url");
        o.image_observation = optional_string(step, path, "image_observation");
        if (auto it = step.find("viewport_size"); it != step.end() && !it->is_null()) {
            const std::string vp = path + "/viewport_size";
            if (!it->is_object()) wrong_type(vp, "object");
            reject_unknown_keys(*it, vp, {"width", "height"});
            const Json& w = require(*it, vp, "width");
            const Json& h = require(*it, vp, "height");
            if (!w.is_number_integer() || !h.is_number_integer()) wrong_type(vp, "integer");
            o.viewport_size = ViewportSize{w.get<std::int64_t>(), h.get<std::int64_t>()};
        }
        return make_step(Observation{std::move(o)});
    }
    throw ParseError(ParseErrorCode::UnknownStepKind, path + "/kind",
                     "unknown step kind '" + kind + "'");
}

void write_json_compact(std::string& out, const Json& v) { out += v.dump(); }

void append_key(std::string& out, bool& first, const char* key) {
    if (!first) out += ',';
    first = false;
    out += '"';
    out += key;
    out += "\":";
}

void write_string(std::string& out, const std::string& s) { out += Json(s).dump(); }

void write_step(std::string& out, const Step& s) {
    out += '{';
    bool first = true;
    append_key(out, first, "kind");
    write_string(out, step_kind_name(s));
    if (s.is_action()) {
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, ApiAction>) {
                    append_key(out, first, "function");
                    write_string(out, a.function);
                    append_key(out, first, "kwargs");
                    write_json_compact(out, a.kwargs);
                    if (a.description && !a.description->empty()) {
                        append_key(out, first, "description");
                        write_string(out, *a.description);
                    }
                } else if constexpr (std::is_same_v<T, CodeAction>) {
                    append_key(out, first, "language");
                    write_string(out, to_lower(a.language));
                    append_key(out, first, "content");
                    write_string(out, a.content);
                    if (a.description && !a.description->empty()) {
                        append_key(out, first, "description");
                        write_string(out, *a.description);
                    }
                } else {
                    append_key(out, first, "content");
                    write_string(out, a.content);
                }
            },
            s.action());
    } else {
        std::visit(
            [&](const auto& o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, TextObservation>) {
                    append_key(out, first, "source");
                    write_string(out, text_source_name(o.source));
                    append_key(out, first, "content");
                    write_string(out, o.content);
                } else {
                    if (o.html) {
                        append_key(out, first, "html");
                        write_string(out, *o.html);
                    }
                    if (o.axtree) {
                        append_key(out, first, "axtree");
                        write_string(out, *o.axtree);
                    }
                    if (o.url) {
                        append_key(out, first, "url");
                        write_string(out, *o.url);
                    }
                    if (o.viewport_size) {
                        append_key(out, first, "viewport_size");
                        out += "{\"width\":" + std::to_string(o.viewport_size->width) +
                               ",\"height\":" + std::to_string(o.viewport_size->height) + "}";
                    }
                    if (o.image_observation) {
                        append_key(out, first, "image_observation");
                        write_string(out, *o.image_observation);
                    }
                }
            },
            s.observation());
    }
    out += '}';
}

}  // namespace

Step make_step(Action a) { return Step{std::move(a)}; }
Step make_step(Observation o) { return Step{std::move(o)}; }

const char* step_kind_name(const Step& s) {
    if (s.is_action()) {
        switch (s.action().index()) {
            case 0: return "api_action";
            case 1: return "code_action";
            default: return "message_action";
        }
    }
    return s.observation().index() == 0 ? "text_observation" : "web_observation";
}

const char* text_source_name(TextSource s) {
    return s == TextSource::User ? "user" : "environment";
}

const char* parse_error_code_name(ParseErrorCode c) {
    switch (c) {
        case ParseErrorCode::MalformedJson: return "MalformedJson";
        case ParseErrorCode::UnknownStepKind: return "UnknownStepKind";
        case ParseErrorCode::MissingField: return "MissingField";
        case ParseErrorCode::WrongType: return "WrongType";
    }
    return "?";
}

Trajectory parse_trajectory(const std::string& text) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw ParseError(ParseErrorCode::MalformedJson, "", "invalid JSON");
    if (!doc.is_object()) wrong_type("", "object");
    reject_unknown_keys(doc, "", {"id", "content", "details"});

    Trajectory t;
    t.id = require_string(doc, "", "id");
    const Json& content = require(doc, "", "content");
    if (!content.is_array()) wrong_type("/content", "array");
    t.content.reserve(content.size());
    for (std::size_t i = 0; i < content.size(); ++i)
        t.content.push_back(parse_step(content[i], "/content/" + std::to_string(i)));

    // `details` may be absent; it is always serialized as an object.
    if (auto it = doc.find("details"); it != doc.end() && !it->is_null()) {
        if (!it->is_object()) wrong_type("/details", "object");
        t.details = *it;
    }
    return t;
}

std::string serialize_trajectory(const Trajectory& t) {
    std::string out;
    out += "{\"id\":";
    write_string(out, t.id);
    out += ",\"content\":[";
    for (std::size_t i = 0; i < t.content.size(); ++i) {
        if (i) out += ',';
        write_step(out, t.content[i]);
    }
    out += "],\"details\":";
    write_json_compact(out, t.details.is_null() ? Json::object() : t.details);
    out += '}';
    return out;
}

}  // namespace adp
