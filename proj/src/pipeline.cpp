#include "adp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>

#include "adp/analytics.hpp"
#include "adp/ingest.hpp"
#include "adp/jsonl.hpp"
#include "adp/serialize.hpp"
#include "adp/validate.hpp"

namespace adp::pipeline {
namespace {

namespace fs = std::filesystem;

std::string adp_path(const PipelineConfig& cfg, const std::string& dataset) {
    return (fs::path(cfg.workdir) / (dataset + ".adp.jsonl")).string();
}

std::string mixture_path(const PipelineConfig& cfg) {
    return (fs::path(cfg.workdir) / "mixture.adp.jsonl").string();
}

std::string sft_path(const PipelineConfig& cfg) {
    return (fs::path(cfg.workdir) /
            (std::string("sft.") + emit::profile_name_string(cfg.emit_profile.name) + ".jsonl"))
        .string();
}

std::vector<Trajectory> load_corpus(const std::string& path) {
    std::vector<Trajectory> corpus;
    for_each_jsonl_line(path, [&](std::size_t, const std::string& line) {
        corpus.push_back(parse_trajectory(line));
    });
    return corpus;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

void check_order(const std::vector<Stage>& stages, Stage before, Stage after) {
    auto b = std::find(stages.begin(), stages.end(), before);
    auto a = std::find(stages.begin(), stages.end(), after);
    if (a == stages.end()) return;
    if (b == stages.end() || b > a)
        throw ConfigError(std::string("stage '") + stage_name(after) + "' requires '" +
                          stage_name(before) + "' earlier in the pipeline");
}

}  // namespace

std::optional<Stage> stage_from_name(const std::string& name) {
    if (name == "convert") return Stage::Convert;
    if (name == "validate") return Stage::Validate;
    if (name == "qa") return Stage::Qa;
    if (name == "stats") return Stage::Stats;
    if (name == "mix") return Stage::Mix;
    if (name == "emit") return Stage::Emit;
    return std::nullopt;
}

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Convert: return "convert";
        case Stage::Validate: return "validate";
        case Stage::Qa: return "qa";
        case Stage::Stats: return "stats";
        case Stage::Mix: return "mix";
        case Stage::Emit: return "emit";
    }
    return "?";
}

PipelineConfig parse_config(const JsonValue& doc) {
    PipelineConfig cfg;
    cfg.workdir = doc.at("workdir").get<std::string>();

    for (const auto& name : doc.at("stages")) {
        auto stage = stage_from_name(name.get<std::string>());
        if (!stage) throw ConfigError("unknown stage '" + name.get<std::string>() + "'");
        if (std::find(cfg.stages.begin(), cfg.stages.end(), *stage) != cfg.stages.end())
            throw ConfigError(std::string("duplicate stage '") + stage_name(*stage) + "'");
        cfg.stages.push_back(*stage);
    }
    check_order(cfg.stages, Stage::Convert, Stage::Validate);
    check_order(cfg.stages, Stage::Convert, Stage::Qa);
    check_order(cfg.stages, Stage::Validate, Stage::Qa);
    check_order(cfg.stages, Stage::Convert, Stage::Stats);
    check_order(cfg.stages, Stage::Convert, Stage::Mix);
    check_order(cfg.stages, Stage::Mix, Stage::Emit);

    if (auto it = doc.find("convert"); it != doc.end()) {
        for (const auto& input : it->at("inputs")) {
            cfg.convert_inputs.push_back({input.at("dataset").get<std::string>(),
                                          input.at("adapter").get<std::string>(),
                                          input.at("in").get<std::string>()});
        }
    }
    if (auto it = doc.find("qa"); it != doc.end()) {
        cfg.qa_config.thought_threshold = it->value("threshold", cfg.qa_config.thought_threshold);
        if (auto t = it->find("terminal"); t != it->end()) {
            cfg.qa_config.terminal_functions.clear();
            for (const auto& fn : *t)
                cfg.qa_config.terminal_functions.insert(fn.get<std::string>());
        }
    }
    if (auto it = doc.find("mix"); it != doc.end()) {
        cfg.mix_seed = it->value("seed", std::uint64_t{0});
        cfg.mix_epoch = it->value("epoch", std::uint64_t{0});
        if (auto e = it->find("entries"); e != it->end()) {
            for (const auto& entry : *e)
                cfg.mix_weights.emplace_back(entry.at("dataset").get<std::string>(),
                                             entry.at("w").get<double>());
        }
        if (auto c = it->find("categories"); c != it->end()) {
            for (auto d = c->begin(); d != c->end(); ++d) {
                std::set<ingest::Category> cats;
                for (const auto& name : d.value()) {
                    auto cat = ingest::category_from_name(name.get<std::string>());
                    if (!cat)
                        throw ConfigError("unknown category '" + name.get<std::string>() + "'");
                    cats.insert(*cat);
                }
                cfg.categories[d.key()] = std::move(cats);
            }
        }
        if (auto f = it->find("filter"); f != it->end()) {
            std::string mode = f->get<std::string>();
            if (mode == "web_only")
                cfg.mix_filter = mixer::CategoryFilter::WebOnly;
            else if (mode == "non_web")
                cfg.mix_filter = mixer::CategoryFilter::NonWeb;
            else
                throw ConfigError("unknown filter '" + mode + "'");
        }
    }
    if (auto it = doc.find("emit"); it != doc.end()) {
        if (auto p = it->find("profile"); p != it->end()) {
            auto name = emit::profile_from_name(p->get<std::string>());
            if (!name) throw ConfigError("unknown profile '" + p->get<std::string>() + "'");
            cfg.emit_profile = emit::make_profile(*name);
        }
        if (auto sp = it->find("system_prompt"); sp != it->end())
            cfg.emit_profile.system_prompt = sp->get<std::string>();
        cfg.emit_policy.max_observation_chars =
            it->value("max_obs_chars", cfg.emit_policy.max_observation_chars);
        cfg.emit_per_turn = it->value("per_turn", false);
    }
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    JsonValue doc = JsonValue::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
    return parse_config(doc);
}

JsonValue run_pipeline(const PipelineConfig& cfg) {
    fs::create_directories(cfg.workdir);
    JsonValue summary = JsonValue::object();
    JsonValue stage_reports = JsonValue::array();

    for (Stage stage : cfg.stages) {
        auto start = std::chrono::steady_clock::now();
        JsonValue report = JsonValue::object();
        report["stage"] = stage_name(stage);

        switch (stage) {
            case Stage::Convert: {
                if (cfg.convert_inputs.empty())
                    throw ConfigError("convert stage configured without inputs");
                std::size_t converted = 0, rejected = 0;
                for (const ConvertInput& input : cfg.convert_inputs) {
                    ingest::IngestStats stats = ingest::run_ingest(
                        input.in_path, input.adapter, adp_path(cfg, input.dataset));
                    converted += stats.converted;
                    rejected += stats.rejected;
                }
                report["converted"] = converted;
                report["rejected"] = rejected;
                break;
            }
            case Stage::Validate: {
                std::size_t checked = 0, violations = 0;
                for (const ConvertInput& input : cfg.convert_inputs) {
                    for (const Trajectory& t : load_corpus(adp_path(cfg, input.dataset))) {
                        ++checked;
                        violations += validate(t, ValidationMode::Lenient).violations.size();
                    }
                }
                report["checked"] = checked;
                report["violations"] = violations;
                if (violations > 0) {
                    report["elapsed_ms"] = elapsed_ms(start);
                    stage_reports.push_back(std::move(report));
                    summary["stages"] = std::move(stage_reports);
                    summary["failed_stage"] = stage_name(stage);
                    throw StageFailed(stage, "validation violations found");
                }
                break;
            }
            case Stage::Qa: {
                std::vector<Trajectory> corpus;
                for (const ConvertInput& input : cfg.convert_inputs)
                    for (Trajectory& t : load_corpus(adp_path(cfg, input.dataset)))
                        corpus.push_back(std::move(t));
                qa::QaReport qa_report = qa::run_qa(corpus, cfg.qa_config);
                report["report"] = qa::qa_report_to_json(qa_report);
                if (!qa_report.overall_pass) {
                    report["elapsed_ms"] = elapsed_ms(start);
                    stage_reports.push_back(std::move(report));
                    summary["stages"] = std::move(stage_reports);
                    summary["failed_stage"] = stage_name(stage);
                    throw StageFailed(stage, "qa gate failed");
                }
                break;
            }
            case Stage::Stats: {
                JsonValue per_dataset = JsonValue::array();
                for (const ConvertInput& input : cfg.convert_inputs) {
                    std::vector<Trajectory> corpus = load_corpus(adp_path(cfg, input.dataset));
                    if (corpus.empty()) continue;
                    analytics::DatasetStats stats =
                        analytics::dataset_stats(corpus, input.dataset);
                    JsonValue row = JsonValue::object();
                    row["dataset"] = stats.dataset;
                    row["n_trajectories"] = stats.n_trajectories;
                    row["avg_rounds"] = stats.avg_rounds;
                    row["pct_actions"] = {stats.pct_api, stats.pct_code, stats.pct_msg};
                    row["pct_func_thought"] = stats.pct_func_thought;
                    per_dataset.push_back(std::move(row));
                }
                report["datasets"] = std::move(per_dataset);
                break;
            }
            case Stage::Mix: {
                mixer::MixturePlan plan;
                plan.seed = cfg.mix_seed;
                plan.epoch = cfg.mix_epoch;
                plan.categories = cfg.categories;
                for (const auto& [dataset, w] : cfg.mix_weights)
                    plan.entries.push_back({dataset, w, adp_path(cfg, dataset)});
                if (plan.entries.empty())
                    for (const ConvertInput& input : cfg.convert_inputs)
                        plan.entries.push_back({input.dataset, 1.0, adp_path(cfg, input.dataset)});
                mixer::MixStats stats = mixer::build_mixture(plan, mixture_path(cfg), cfg.mix_filter);
                report["mixed"] = stats.total;
                break;
            }
            case Stage::Emit: {
                emit::EmitStats stats =
                    emit::emit_corpus(mixture_path(cfg), cfg.emit_profile, cfg.emit_policy,
                                      sft_path(cfg), cfg.emit_per_turn, "mixture");
                report["emitted"] = stats.written;
                report["rejected"] = stats.rejected;
                report["out"] = sft_path(cfg);
                break;
            }
        }
        report["elapsed_ms"] = elapsed_ms(start);
        stage_reports.push_back(std::move(report));
    }

    summary["stages"] = std::move(stage_reports);
    summary["ok"] = true;
    return summary;
}

}  // namespace adp::pipeline
