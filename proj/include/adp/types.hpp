#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace adp {

// JSON values used inside trajectories keep object-key insertion order so
// canonical serialization is stable.
using JsonValue = nlohmann::ordered_json;

/// Function call with structured parameters.
struct ApiAction {
    std::string function;
    JsonValue kwargs = JsonValue::object();
    std::optional<std::string> description;

    bool operator==(const ApiAction&) const = default;
};

/// Code to execute in some language. `language` is stored lowercase.
struct CodeAction {
    std::string language;
    std::string content;
    std::optional<std::string> description;

    bool operator==(const CodeAction&) const = default;
};

/// Natural-language message from the agent to the user.
struct MessageAction {
    std::string content;

    bool operator==(const MessageAction&) const = default;
};

enum class TextSource { User, Environment };

struct TextObservation {
    TextSource source = TextSource::User;
    std::string content;

    bool operator==(const TextObservation&) const = default;
};

struct ViewportSize {
    std::int64_t width = 0;
    std::int64_t height = 0;

    bool operator==(const ViewportSize&) const = default;
};

/// Webpage state. At least one of html/axtree must be present.
struct WebObservation {
    std::optional<std::string> html;
    std::optional<std::string> axtree;
    std::optional<std::string> url;
    std::optional<ViewportSize> viewport_size;
    std::optional<std::string> image_observation;  // opaque payload, never decoded

    bool operator==(const WebObservation&) const = default;
};

using Action = std::variant<ApiAction, CodeAction, MessageAction>;
using Observation = std::variant<TextObservation, WebObservation>;

/// One element of a trajectory: an agent action or an environment/user
/// observation. The wire discriminator is the `kind` field.
struct Step {
    std::variant<Action, Observation> value;

    bool is_action() const { return value.index() == 0; }
    bool is_observation() const { return value.index() == 1; }

    const Action& action() const { return std::get<Action>(value); }
    const Observation& observation() const { return std::get<Observation>(value); }

    bool operator==(const Step&) const = default;
};

Step make_step(Action a);
Step make_step(Observation o);

/// One complete agent episode.
struct Trajectory {
    std::string id;
    std::vector<Step> content;
    JsonValue details = JsonValue::object();

    bool operator==(const Trajectory&) const = default;
};

/// Wire names for the five step kinds.
const char* step_kind_name(const Step& s);

const char* text_source_name(TextSource s);

}  // namespace adp
