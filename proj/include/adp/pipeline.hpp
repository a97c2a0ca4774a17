#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adp/emit.hpp"
#include "adp/mixer.hpp"
#include "adp/qa.hpp"
#include "adp/types.hpp"

namespace adp::pipeline {

enum class Stage { Convert, Validate, Qa, Stats, Mix, Emit };

std::optional<Stage> stage_from_name(const std::string& name);
const char* stage_name(Stage s);

struct ConvertInput {
    std::string dataset;
    std::string adapter;
    std::string in_path;
};

struct PipelineConfig {
    std::string workdir;
    std::vector<Stage> stages;
    std::vector<ConvertInput> convert_inputs;
    qa::QaConfig qa_config;
    std::uint64_t mix_seed = 0;
    std::uint64_t mix_epoch = 0;
    std::vector<std::pair<std::string, double>> mix_weights;  // dataset -> w
    mixer::CategoryMap categories;
    std::optional<mixer::CategoryFilter> mix_filter;
    emit::EmitterProfile emit_profile = emit::make_profile(emit::ProfileName::CodeAct);
    emit::ContextPolicy emit_policy;
    bool emit_per_turn = false;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StageFailed : public std::runtime_error {
public:
    StageFailed(Stage stage, const std::string& detail)
        : std::runtime_error(std::string(stage_name(stage)) + " failed: " + detail),
          stage_(stage) {}

    Stage stage() const { return stage_; }

private:
    Stage stage_;
};

/// Parses the pipeline config document and checks stage ordering
/// (convert < validate < qa; mix < emit).
PipelineConfig parse_config(const JsonValue& doc);
PipelineConfig load_config(const std::string& path);

/// Runs the configured stages in order, materializing intermediate ADP-JSONL
/// under workdir. Throws StageFailed at the first failing gate; later stages
/// never touch the output directory.
JsonValue run_pipeline(const PipelineConfig& config);

}  // namespace adp::pipeline
