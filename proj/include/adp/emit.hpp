#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adp/types.hpp"

namespace adp::emit {

enum class Role { System, User, Assistant, Tool };

const char* role_name(Role r);

struct ToolCall {
    std::string name;
    JsonValue arguments = JsonValue::object();

    bool operator==(const ToolCall&) const = default;
};

struct SftMessage {
    Role role = Role::User;
    std::string text;
    std::vector<ToolCall> tool_calls;  // assistant only
    bool trainable = false;            // assistant only

    bool operator==(const SftMessage&) const = default;
};

struct SftExample {
    std::string id;
    std::string dataset;
    std::vector<SftMessage> messages;
};

enum class ProfileName { CodeAct, FunctionCalling, WebAgent };

std::optional<ProfileName> profile_from_name(const std::string& name);
const char* profile_name_string(ProfileName p);

struct EmitterProfile {
    ProfileName name = ProfileName::CodeAct;
    std::string system_prompt;
};

/// Profile with its built-in default system prompt.
EmitterProfile make_profile(ProfileName name);

struct ContextPolicy {
    std::size_t max_observation_chars = 8192;
    std::string truncation_marker = "[... truncated N chars ...]";
    double keep_head_fraction = 0.5;
};

/// Middle truncation: keeps the head and tail of `text` within the policy
/// budget, with the marker ("N" replaced by the removed char count) between.
std::string truncate_middle(const std::string& text, const ContextPolicy& policy);

SftMessage render_action(const EmitterProfile& profile, const Action& action);
SftMessage render_observation(const EmitterProfile& profile, const Observation& obs,
                              const ContextPolicy& policy);

class NoActions : public std::runtime_error {
public:
    explicit NoActions(const std::string& id)
        : std::runtime_error("trajectory '" + id + "' has no actions") {}
};

/// Full conversation for one trajectory: system prompt, then rendered steps.
/// Consecutive same-side messages are merged (newline-joined text, tool_calls
/// concatenated); a merged non-assistant run is user when any member is user,
/// tool otherwise.
SftExample emit_trajectory(const Trajectory& t, const EmitterProfile& profile,
                           const ContextPolicy& policy, const std::string& dataset);

std::string serialize_example(const SftExample& example);

struct EmitStats {
    std::size_t written = 0;
    std::size_t rejected = 0;
};

/// Converts ADP-JSONL to SFT-JSONL. When per_turn is set, each trajectory
/// expands into one example per assistant message, containing the message
/// prefix up to and including it.
EmitStats emit_corpus(const std::string& in_path, const EmitterProfile& profile,
                      const ContextPolicy& policy, const std::string& out_path, bool per_turn,
                      const std::string& dataset = "");

}  // namespace adp::emit
