#include "adp/ingest.hpp"

#include <sstream>

#include "adp/jsonl.hpp"
#include "adp/serialize.hpp"
#include "adp/validate.hpp"

namespace adp::ingest {
namespace {

using Json = nlohmann::ordered_json;

const Json& require(const Json& obj, const char* key) {
    if (!obj.is_object()) throw ConvertError("WrongType", "payload is not an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw ConvertError("MissingField", std::string("payload lacks '") + key + "'");
    return *it;
}

std::string require_string(const Json& obj, const char* key) {
    const Json& v = require(obj, key);
    if (!v.is_string())
        throw ConvertError("WrongType", std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

std::optional<std::string> optional_string(const Json& obj, const char* key) {
    if (!obj.is_object()) return std::nullopt;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string())
        throw ConvertError("WrongType", std::string("'") + key + "' must be a string");
    return it->get<std::string>();
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

// Splits an assistant message into CodeActions (one per ``` fence, with the
// immediately preceding prose as its description) and a trailing
// MessageAction for leftover prose.
void split_assistant_text(const std::string& text, std::vector<Step>& out) {
    std::vector<std::string> lines = split_lines(text);
    std::string prose;
    std::size_t i = 0;
    while (i < lines.size()) {
        const std::string& line = lines[i];
        if (line.rfind("```", 0) == 0) {
            std::string language = trim(line.substr(3));
            if (language.empty()) language = "text";
            std::string code;
            ++i;
            while (i < lines.size() && trim(lines[i]) != "```") {
                if (!code.empty()) code += '\n';
                code += lines[i];
                ++i;
            }
            if (i < lines.size()) ++i;  // closing fence
            CodeAction action;
            action.language = language;
            action.content = code;
            std::string description = trim(prose);
            if (!description.empty()) action.description = description;
            prose.clear();
            out.push_back(make_step(Action{std::move(action)}));
        } else {
            if (!prose.empty()) prose += '\n';
            prose += line;
            ++i;
        }
    }
    std::string rest = trim(prose);
    if (!rest.empty()) out.push_back(make_step(Action{MessageAction{std::move(rest)}}));
}

}  // namespace

const char* category_name(Category c) {
    switch (c) {
        case Category::Coding: return "coding";
        case Category::SoftwareEngineering: return "software_engineering";
        case Category::ToolUse: return "tool_use";
        case Category::WebBrowsing: return "web_browsing";
    }
    return "?";
}

std::optional<Category> category_from_name(const std::string& name) {
    if (name == "coding") return Category::Coding;
    if (name == "software_engineering") return Category::SoftwareEngineering;
    if (name == "tool_use") return Category::ToolUse;
    if (name == "web_browsing") return Category::WebBrowsing;
    return std::nullopt;
}

void AdapterRegistry::add(AdapterDescriptor descriptor, AdapterFn fn) {
    std::string name = descriptor.name;
    entries_[name] = Entry{std::move(descriptor), std::move(fn)};
}

const AdapterFn* AdapterRegistry::find(const std::string& name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second.fn;
}

const AdapterDescriptor* AdapterRegistry::descriptor(const std::string& name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second.descriptor;
}

std::vector<AdapterDescriptor> AdapterRegistry::list() const {
    std::vector<AdapterDescriptor> out;
    for (const auto& [_, e] : entries_) out.push_back(e.descriptor);
    return out;
}

const AdapterRegistry& builtin_registry() {
    static const AdapterRegistry registry = [] {
        AdapterRegistry r;
        r.add({"rf_chat", "{id, messages:[{role,text}]}", {Category::Coding, Category::ToolUse}},
              convert_chat);
        r.add({"rf_web", "{id, task, steps:[{action,args,thought?,url?,html?,axtree?}]}",
               {Category::WebBrowsing}},
              convert_webdemo);
        r.add({"rf_rollout", "{id, instruction, events:[{type,...}]}",
               {Category::Coding, Category::SoftwareEngineering}},
              convert_rollout);
        return r;
    }();
    return registry;
}

Trajectory convert_chat(const RawRecord& record) {
    const Json& payload = record.payload;
    Trajectory t;
    t.id = require_string(payload, "id");
    const Json& messages = require(payload, "messages");
    if (!messages.is_array() || messages.empty())
        throw ConvertError("EmptyMessages", "messages must be a non-empty array");

    for (std::size_t i = 0; i < messages.size(); ++i) {
        const Json& msg = messages[i];
        std::string role = require_string(msg, "role");
        std::string text = require_string(msg, "text");
        if (i == 0 && role != "user")
            throw ConvertError("FirstRoleNotUser", "first message role is '" + role + "'");
        if (role == "user") {
            t.content.push_back(make_step(Observation{TextObservation{TextSource::User, text}}));
        } else if (role == "tool") {
            t.content.push_back(
                make_step(Observation{TextObservation{TextSource::Environment, text}}));
        } else if (role == "assistant") {
            split_assistant_text(text, t.content);
        } else {
            throw ConvertError("UnknownRole", "role '" + role + "'");
        }
    }
    return t;
}

Trajectory convert_webdemo(const RawRecord& record) {
    const Json& payload = record.payload;
    Trajectory t;
    t.id = require_string(payload, "id");
    std::string task = require_string(payload, "task");
    if (trim(task).empty()) throw ConvertError("EmptyTask", "task is empty");
    const Json& steps = require(payload, "steps");
    if (!steps.is_array() || steps.empty())
        throw ConvertError("EmptySteps", "steps must be a non-empty array");

    t.content.push_back(make_step(Observation{TextObservation{TextSource::User, task}}));
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const Json& step = steps[i];
        auto html = optional_string(step, "html");
        auto axtree = optional_string(step, "axtree");
        const bool has_page = html.has_value() || axtree.has_value();
        const bool is_final = i + 1 == steps.size();
        if (!has_page && !is_final)
            throw ConvertError("StepMissingPage",
                               "step " + std::to_string(i) + " has neither html nor axtree");
        if (has_page) {
            WebObservation obs;
            obs.html = std::move(html);
            obs.axtree = std::move(axtree);
            obs.url = optional_string(step, "url");
            t.content.push_back(make_step(Observation{std::move(obs)}));
        }
        ApiAction action;
        action.function = require_string(step, "action");
        if (auto it = step.find("args"); it != step.end() && !it->is_null()) {
            if (!it->is_object()) throw ConvertError("WrongType", "'args' must be an object");
            action.kwargs = *it;
        }
        if (auto thought = optional_string(step, "thought"); thought && !thought->empty())
            action.description = std::move(thought);
        t.content.push_back(make_step(Action{std::move(action)}));
    }
    return t;
}

Trajectory convert_rollout(const RawRecord& record) {
    const Json& payload = record.payload;
    Trajectory t;
    t.id = require_string(payload, "id");
    std::string instruction = require_string(payload, "instruction");
    const Json& events = require(payload, "events");
    if (!events.is_array() || events.empty())
        throw ConvertError("EmptyEvents", "events must be a non-empty array");

    t.content.push_back(make_step(Observation{TextObservation{TextSource::User, instruction}}));
    for (const Json& event : events) {
        std::string type = require_string(event, "type");
        if (type == "command") {
            CodeAction action;
            action.language = require_string(event, "language");
            action.content = require_string(event, "content");
            if (auto thought = optional_string(event, "thought"); thought && !thought->empty())
                action.description = std::move(thought);
            t.content.push_back(make_step(Action{std::move(action)}));
        } else if (type == "edit") {
            ApiAction action;
            action.function = "write_file";
            action.kwargs = Json::object();
            action.kwargs["path"] = require_string(event, "path");
            action.kwargs["content"] = require_string(event, "content");
            if (auto thought = optional_string(event, "thought"); thought && !thought->empty())
                action.description = std::move(thought);
            t.content.push_back(make_step(Action{std::move(action)}));
        } else if (type == "message") {
            t.content.push_back(make_step(Action{MessageAction{require_string(event, "content")}}));
        } else if (type == "output") {
            t.content.push_back(make_step(
                Observation{TextObservation{TextSource::Environment, require_string(event, "content")}}));
        } else {
            throw ConvertError("UnknownEventType", "event type '" + type + "'");
        }
    }
    return t;
}

IngestStats run_ingest(const std::string& input_path, const std::string& adapter_name,
                       const std::string& output_path, const AdapterRegistry& registry,
                       const IngestOptions& options) {
    const AdapterFn* adapter = registry.find(adapter_name);
    if (!adapter) throw std::invalid_argument("AdapterNotFound: '" + adapter_name + "'");

    IngestStats stats;
    std::vector<std::string> out_lines;
    std::vector<std::string> reject_lines;

    auto reject = [&](std::size_t line_no, const std::string& reason) {
        ++stats.rejected;
        ++stats.rejection_reasons[reason];
        Json entry = Json::object();
        entry["line_no"] = line_no;
        entry["reason"] = reason;
        reject_lines.push_back(entry.dump());
    };

    for_each_jsonl_line(input_path, [&](std::size_t line_no, const std::string& line) {
        ++stats.read;
        Json payload = Json::parse(line, nullptr, false);
        if (payload.is_discarded() || payload.is_null()) {
            reject(line_no, "MalformedJson");
            return;
        }
        try {
            Trajectory t = (*adapter)(RawRecord{adapter_name, std::move(payload), line_no});
            ValidationReport report = validate(t, ValidationMode::Lenient);
            if (!report.ok) {
                reject(line_no, report.violations.front().code);
                return;
            }
            out_lines.push_back(serialize_trajectory(t));
            ++stats.converted;
        } catch (const ConvertError& e) {
            reject(line_no, e.reason());
        }
    });

    write_jsonl_lines(output_path, out_lines);
    if (options.reject_log_path) write_jsonl_lines(*options.reject_log_path, reject_lines);
    return stats;
}

}  // namespace adp::ingest
