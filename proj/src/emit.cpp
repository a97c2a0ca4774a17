#include "adp/emit.hpp"

#include <cmath>

#include "adp/jsonl.hpp"
#include "adp/serialize.hpp"
#include "adp/validate.hpp"

namespace adp::emit {
namespace {

constexpr const char* kCodeActPrompt =
    "You are a coding agent. Think step by step. Run code with "
    "<execute lang>...</execute> and call tools with <function=name>{...}</function>. "
    "Reply with a plain message when you are done.";

constexpr const char* kFunctionCallingPrompt =
    "You are a tool-using assistant. Invoke tools through structured tool calls "
    "and answer the user in plain text when the task is complete.";

constexpr const char* kWebAgentPrompt =
    "You are a web browsing agent. Observe the page state and respond with one "
    "action per turn as action: name(arg=value, ...).";

std::string render_kwargs_kv(const JsonValue& kwargs) {
    std::string out;
    for (auto it = kwargs.begin(); it != kwargs.end(); ++it) {
        if (!out.empty()) out += ", ";
        out += it.key();
        out += '=';
        if (it->is_string())
            out += it->get<std::string>();
        else
            out += it->dump();
    }
    return out;
}

std::string with_thought(const std::optional<std::string>& thought, std::string body) {
    if (thought && !thought->empty()) return *thought + "\n" + body;
    return body;
}

SftMessage assistant(std::string text) {
    SftMessage m;
    m.role = Role::Assistant;
    m.trainable = true;
    m.text = std::move(text);
    return m;
}

}  // namespace

const char* role_name(Role r) {
    switch (r) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
        case Role::Tool: return "tool";
    }
    return "?";
}

std::optional<ProfileName> profile_from_name(const std::string& name) {
    if (name == "codeact") return ProfileName::CodeAct;
    if (name == "function_calling") return ProfileName::FunctionCalling;
    if (name == "web_agent") return ProfileName::WebAgent;
    return std::nullopt;
}

const char* profile_name_string(ProfileName p) {
    switch (p) {
        case ProfileName::CodeAct: return "codeact";
        case ProfileName::FunctionCalling: return "function_calling";
        case ProfileName::WebAgent: return "web_agent";
    }
    return "?";
}

EmitterProfile make_profile(ProfileName name) {
    EmitterProfile p;
    p.name = name;
    switch (name) {
        case ProfileName::CodeAct: p.system_prompt = kCodeActPrompt; break;
        case ProfileName::FunctionCalling: p.system_prompt = kFunctionCallingPrompt; break;
        case ProfileName::WebAgent: p.system_prompt = kWebAgentPrompt; break;
    }
    return p;
}

std::string truncate_middle(const std::string& text, const ContextPolicy& policy) {
    const std::size_t budget = policy.max_observation_chars;
    if (text.size() <= budget) return text;

    const std::size_t removed = text.size() - budget;
    std::string marker = policy.truncation_marker;
    if (auto pos = marker.find('N'); pos != std::string::npos)
        marker.replace(pos, 1, std::to_string(removed));

    const auto head_len =
        static_cast<std::size_t>(std::floor(policy.keep_head_fraction * static_cast<double>(budget)));
    const std::size_t tail_len = budget - head_len;
    return text.substr(0, head_len) + marker + text.substr(text.size() - tail_len);
}

SftMessage render_action(const EmitterProfile& profile, const Action& action) {
    if (const auto* msg = std::get_if<MessageAction>(&action)) return assistant(msg->content);

    if (const auto* api = std::get_if<ApiAction>(&action)) {
        switch (profile.name) {
            case ProfileName::FunctionCalling: {
                SftMessage m = assistant(api->description.value_or(""));
                m.tool_calls.push_back({api->function, api->kwargs});
                return m;
            }
            case ProfileName::WebAgent:
                return assistant(with_thought(
                    api->description,
                    "action: " + api->function + "(" + render_kwargs_kv(api->kwargs) + ")"));
            case ProfileName::CodeAct:
            default:
                return assistant(with_thought(api->description, "<function=" + api->function +
                                                                    ">" + api->kwargs.dump() +
                                                                    "</function>"));
        }
    }

    const auto& code = std::get<CodeAction>(action);
    if (profile.name == ProfileName::FunctionCalling) {
        SftMessage m = assistant(code.description.value_or(""));
        JsonValue args = JsonValue::object();
        args["language"] = code.language;
        args["content"] = code.content;
        m.tool_calls.push_back({"execute_code", std::move(args)});
        return m;
    }
    // codeact rendering; web_agent has no code syntax of its own and reuses it
    return assistant(with_thought(code.description, "<execute " + code.language + ">\n" +
                                                        code.content + "\n</execute>"));
}

SftMessage render_observation(const EmitterProfile& profile, const Observation& obs,
                              const ContextPolicy& policy) {
    SftMessage m;
    if (const auto* text = std::get_if<TextObservation>(&obs)) {
        if (text->source == TextSource::User) {
            m.role = Role::User;
            m.text = text->content;
        } else if (profile.name == ProfileName::FunctionCalling) {
            m.role = Role::Tool;
            m.text = text->content;
        } else {
            m.role = Role::User;
            m.text = "OBSERVATION:\n" + text->content;
        }
        return m;
    }

    const auto& web = std::get<WebObservation>(obs);
    m.role = Role::User;
    std::string page = web.axtree ? *web.axtree : web.html.value_or("");
    m.text = truncate_middle(page, policy);
    if (web.url) m.text = "URL: " + *web.url + "\n" + m.text;
    if (web.image_observation) m.text += "\n[image_observation]";
    return m;
}

SftExample emit_trajectory(const Trajectory& t, const EmitterProfile& profile,
                           const ContextPolicy& policy, const std::string& dataset) {
    bool has_action = false;
    for (const Step& s : t.content) has_action = has_action || s.is_action();
    if (!has_action) throw NoActions(t.id);

    SftExample example;
    example.id = t.id;
    example.dataset = dataset;

    SftMessage system;
    system.role = Role::System;
    system.text = profile.system_prompt;
    example.messages.push_back(std::move(system));

    for (const Step& s : t.content) {
        SftMessage next = s.is_action() ? render_action(profile, s.action())
                                        : render_observation(profile, s.observation(), policy);
        if (example.messages.size() > 1) {
            SftMessage& prev = example.messages.back();
            const bool both_assistant = prev.role == Role::Assistant && next.role == Role::Assistant;
            const bool both_non_assistant =
                prev.role != Role::System && prev.role != Role::Assistant &&
                next.role != Role::Assistant;
            if (both_assistant || both_non_assistant) {
                if (!prev.text.empty() && !next.text.empty()) prev.text += "\n";
                prev.text += next.text;
                for (ToolCall& c : next.tool_calls) prev.tool_calls.push_back(std::move(c));
                if (both_non_assistant && (prev.role == Role::User || next.role == Role::User))
                    prev.role = Role::User;
                continue;
            }
        }
        example.messages.push_back(std::move(next));
    }
    return example;
}

std::string serialize_example(const SftExample& example) {
    JsonValue doc = JsonValue::object();
    doc["id"] = example.id;
    doc["dataset"] = example.dataset;
    JsonValue messages = JsonValue::array();
    for (const SftMessage& m : example.messages) {
        JsonValue msg = JsonValue::object();
        msg["role"] = role_name(m.role);
        msg["text"] = m.text;
        if (!m.tool_calls.empty()) {
            JsonValue calls = JsonValue::array();
            for (const ToolCall& c : m.tool_calls) {
                JsonValue call = JsonValue::object();
                call["name"] = c.name;
                call["arguments"] = c.arguments;
                calls.push_back(std::move(call));
            }
            msg["tool_calls"] = std::move(calls);
        }
        msg["trainable"] = m.trainable;
        messages.push_back(std::move(msg));
    }
    doc["messages"] = std::move(messages);
    return doc.dump();
}

EmitStats emit_corpus(const std::string& in_path, const EmitterProfile& profile,
                      const ContextPolicy& policy, const std::string& out_path, bool per_turn,
                      const std::string& dataset) {
    EmitStats stats;
    std::vector<std::string> out_lines;
    for_each_jsonl_line(in_path, [&](std::size_t, const std::string& line) {
        Trajectory t = parse_trajectory(line);
        try {
            SftExample full = emit_trajectory(t, profile, policy, dataset);
            if (!per_turn) {
                out_lines.push_back(serialize_example(full));
                ++stats.written;
                return;
            }
            std::size_t turn = 0;
            for (std::size_t i = 0; i < full.messages.size(); ++i) {
                if (full.messages[i].role != Role::Assistant) continue;
                ++turn;
                SftExample prefix;
                prefix.id = full.id + ":" + std::to_string(turn);
                prefix.dataset = full.dataset;
                prefix.messages.assign(full.messages.begin(), full.messages.begin() + i + 1);
                out_lines.push_back(serialize_example(prefix));
                ++stats.written;
            }
        } catch (const NoActions&) {
            ++stats.rejected;
        }
    });
    write_jsonl_lines(out_path, out_lines);
    return stats;
}

}  // namespace adp::emit
