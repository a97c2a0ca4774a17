// adp: convert heterogeneous agent trajectory data into a standardized
// schema, gate its quality, analyze it, resample mixtures, and emit
// SFT-ready conversation files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "adp/analytics.hpp"
#include "adp/emit.hpp"
#include "adp/ingest.hpp"
#include "adp/jsonl.hpp"
#include "adp/mixer.hpp"
#include "adp/pipeline.hpp"
#include "adp/qa.hpp"
#include "adp/serialize.hpp"
#include "adp/validate.hpp"

namespace {

constexpr const char* kVersion = "adp 1.0.0 (schema 1)";

constexpr int kExitOk = 0;
constexpr int kExitGateFailed = 1;
constexpr int kExitUsage = 2;

std::vector<adp::Trajectory> load_corpus(const std::string& path) {
    std::vector<adp::Trajectory> corpus;
    adp::for_each_jsonl_line(path, [&](std::size_t line_no, const std::string& line) {
        try {
            corpus.push_back(adp::parse_trajectory(line));
        } catch (const adp::ParseError& e) {
            throw adp::IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    });
    return corpus;
}

std::vector<std::int64_t> parse_int_list(const std::string& csv) {
    std::vector<std::int64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoll(item));
    }
    return out;
}

int cmd_convert(const std::string& adapter, const std::string& in, const std::string& out,
                const std::string& reject_log) {
    adp::ingest::IngestOptions options;
    if (!reject_log.empty()) options.reject_log_path = reject_log;
    adp::ingest::IngestStats stats =
        adp::ingest::run_ingest(in, adapter, out, adp::ingest::builtin_registry(), options);
    std::cerr << "read=" << stats.read << " converted=" << stats.converted
              << " rejected=" << stats.rejected << "\n";
    for (const auto& [reason, count] : stats.rejection_reasons)
        std::cerr << "  " << reason << ": " << count << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& in, const std::string& mode_name) {
    adp::ValidationMode mode =
        mode_name == "strict" ? adp::ValidationMode::Strict : adp::ValidationMode::Lenient;
    std::size_t checked = 0, bad = 0;
    adp::for_each_jsonl_line(in, [&](std::size_t line_no, const std::string& line) {
        ++checked;
        try {
            adp::Trajectory t = adp::parse_trajectory(line);
            adp::ValidationReport report = adp::validate(t, mode);
            if (!report.ok) {
                ++bad;
                for (const adp::Violation& v : report.violations)
                    std::cerr << in << ":" << line_no << " [" << v.code << "] " << v.path << " "
                              << v.message << "\n";
            }
        } catch (const adp::ParseError& e) {
            ++bad;
            std::cerr << in << ":" << line_no << " " << e.what() << "\n";
        }
    });
    std::cerr << "checked=" << checked << " invalid=" << bad << "\n";
    return bad == 0 ? kExitOk : kExitGateFailed;
}

int cmd_qa(const std::string& in, double threshold, const std::string& terminal_csv,
           const std::string& report_path) {
    adp::qa::QaConfig cfg;
    cfg.thought_threshold = threshold;
    if (!terminal_csv.empty()) {
        cfg.terminal_functions.clear();
        std::stringstream ss(terminal_csv);
        std::string fn;
        while (std::getline(ss, fn, ','))
            if (!fn.empty()) cfg.terminal_functions.insert(fn);
    }
    adp::qa::QaReport report = adp::qa::run_qa(load_corpus(in), cfg);
    adp::JsonValue doc = adp::qa::qa_report_to_json(report);
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
        if (!out) throw adp::IoError("cannot write report to '" + report_path + "'");
        out << doc.dump(2) << "\n";
    }
    std::cout << doc.dump(2) << "\n";
    return report.overall_pass ? kExitOk : kExitGateFailed;
}

void print_stats_row(const adp::analytics::DatasetStats& s, const std::string& format) {
    if (format == "json") {
        adp::JsonValue row = adp::JsonValue::object();
        row["dataset"] = s.dataset;
        row["n_trajectories"] = s.n_trajectories;
        row["avg_rounds"] = s.avg_rounds;
        row["pct_actions"] = {s.pct_api, s.pct_code, s.pct_msg};
        row["pct_func_thought"] = s.pct_func_thought;
        std::cout << row.dump() << "\n";
    } else {
        std::printf("%-24s %10zu %12.1f   %3d/%3d/%3d %15.1f\n", s.dataset.c_str(),
                    s.n_trajectories, s.avg_rounds, s.pct_api, s.pct_code, s.pct_msg,
                    s.pct_func_thought);
    }
}

int cmd_stats(const std::vector<std::string>& inputs, const std::string& dataset_name,
              const std::string& format, const std::string& overall) {
    if (format == "table")
        std::printf("%-24s %10s %12s %13s %15s\n", "Dataset", "#Trajs", "AVG. Rounds",
                    "% Actions (A/C/M)", "% Func Thought");
    std::vector<adp::analytics::DatasetStats> rows;
    std::vector<adp::Trajectory> pooled;
    for (const std::string& path : inputs) {
        std::vector<adp::Trajectory> corpus = load_corpus(path);
        std::string name = inputs.size() == 1 && !dataset_name.empty()
                               ? dataset_name
                               : std::filesystem::path(path).stem().string();
        rows.push_back(adp::analytics::dataset_stats(corpus, name));
        print_stats_row(rows.back(), format);
        for (adp::Trajectory& t : corpus) pooled.push_back(std::move(t));
    }
    if (rows.size() > 1) {
        if (overall == "pooled") {
            adp::analytics::DatasetStats all = adp::analytics::dataset_stats(pooled, "Overall");
            print_stats_row(all, format);
        } else {
            adp::analytics::DatasetStats mean;
            mean.dataset = "Overall";
            mean.n_trajectories = pooled.size();
            double api = 0, code = 0, msg = 0;
            for (const auto& r : rows) {
                mean.avg_rounds += r.avg_rounds;
                mean.pct_func_thought += r.pct_func_thought;
                api += r.pct_api;
                code += r.pct_code;
                msg += r.pct_msg;
            }
            const double n = static_cast<double>(rows.size());
            mean.avg_rounds /= n;
            mean.pct_func_thought /= n;
            mean.pct_api = static_cast<int>(api / n + 0.5);
            mean.pct_code = static_cast<int>(code / n + 0.5);
            mean.pct_msg = 100 - mean.pct_api - mean.pct_code;
            print_stats_row(mean, format);
        }
    }
    return kExitOk;
}

int cmd_cost(const std::string& dataset_csv, const std::string& harness_csv,
             std::int64_t avg_harness, std::int64_t harness_count) {
    adp::analytics::CostModelInput input;
    input.per_dataset_loc = parse_int_list(dataset_csv);
    input.per_harness_loc = parse_int_list(harness_csv);
    if (avg_harness >= 0) input.avg_harness_loc = avg_harness;
    input.harness_count = harness_count;
    adp::JsonValue doc = adp::JsonValue::object();
    doc["cost_without_adp"] = adp::analytics::cost_without_adp(input);
    doc["cost_with_adp"] = adp::analytics::cost_with_adp(input);
    std::cout << doc.dump() << "\n";
    return kExitOk;
}

int cmd_mix(const std::string& plan_path, const std::string& out, const std::string& filter) {
    adp::mixer::MixturePlan plan = adp::mixer::load_plan(plan_path);
    std::optional<adp::mixer::CategoryFilter> mode;
    if (filter == "web_only") mode = adp::mixer::CategoryFilter::WebOnly;
    if (filter == "non_web") mode = adp::mixer::CategoryFilter::NonWeb;
    adp::mixer::MixStats stats = adp::mixer::build_mixture(plan, out, mode);
    std::cerr << "mixed=" << stats.total << "\n";
    for (const auto& [dataset, count] : stats.per_dataset)
        std::cerr << "  " << dataset << ": " << count << "\n";
    return kExitOk;
}

int cmd_emit(const std::string& in, const std::string& profile_name, const std::string& out,
             bool per_turn, std::size_t max_obs_chars, const std::string& system_prompt_file,
             const std::string& dataset) {
    auto name = adp::emit::profile_from_name(profile_name);
    if (!name) {
        std::cerr << "unknown profile '" << profile_name << "'\n";
        return kExitUsage;
    }
    adp::emit::EmitterProfile profile = adp::emit::make_profile(*name);
    if (!system_prompt_file.empty()) {
        std::ifstream f(system_prompt_file, std::ios::binary);
        if (!f) throw adp::IoError("cannot read system prompt '" + system_prompt_file + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        profile.system_prompt = ss.str();
        while (!profile.system_prompt.empty() && profile.system_prompt.back() == '\n')
            profile.system_prompt.pop_back();
    }
    adp::emit::ContextPolicy policy;
    policy.max_observation_chars = max_obs_chars;
    std::string ds = dataset.empty() ? std::filesystem::path(in).stem().string() : dataset;
    adp::emit::EmitStats stats = adp::emit::emit_corpus(in, profile, policy, out, per_turn, ds);
    std::cerr << "emitted=" << stats.written << " rejected=" << stats.rejected << "\n";
    return kExitOk;
}

int cmd_pipeline(const std::string& config_path) {
    adp::pipeline::PipelineConfig config = adp::pipeline::load_config(config_path);
    try {
        adp::JsonValue summary = adp::pipeline::run_pipeline(config);
        std::cout << summary.dump(2) << "\n";
        return kExitOk;
    } catch (const adp::pipeline::StageFailed& e) {
        std::cerr << e.what() << "\n";
        return kExitGateFailed;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent trajectory data pipeline: convert, validate, gate, mix, emit"};
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", kVersion);

    // convert
    std::string adapter, in_path, out_path, reject_log;
    CLI::App* convert = app.add_subcommand("convert", "Raw JSONL -> ADP-JSONL via an adapter");
    convert->add_option("--adapter", adapter, "Adapter name (rf_chat, rf_web, rf_rollout)")
        ->required();
    convert->add_option("--in", in_path, "Input raw JSONL")->required();
    convert->add_option("--out", out_path, "Output ADP-JSONL")->required();
    convert->add_option("--reject-log", reject_log, "JSONL of {line_no, reason}");

    // validate
    std::string val_in, val_mode = "lenient";
    CLI::App* validate = app.add_subcommand("validate", "Validate an ADP-JSONL file");
    validate->add_option("--in", val_in)->required();
    validate->add_option("--mode", val_mode)->check(CLI::IsMember({"strict", "lenient"}));

    // qa
    std::string qa_in, qa_terminal, qa_report;
    double qa_threshold = 0.8;
    CLI::App* qa = app.add_subcommand("qa", "Quality gate over an ADP-JSONL corpus");
    qa->add_option("--in", qa_in)->required();
    qa->add_option("--threshold", qa_threshold, "Thought-coverage threshold");
    qa->add_option("--terminal", qa_terminal, "Comma-separated terminal function names");
    qa->add_option("--report", qa_report, "Write the JSON report here too");

    // stats
    std::vector<std::string> stats_in;
    std::string stats_dataset, stats_format = "table", stats_overall = "pooled";
    CLI::App* stats = app.add_subcommand("stats", "Cross-dataset statistics");
    stats->add_option("--in", stats_in, "ADP-JSONL file(s), one per dataset")->required();
    stats->add_option("--dataset", stats_dataset, "Dataset name (single input only)");
    stats->add_option("--format", stats_format)->check(CLI::IsMember({"table", "json"}));
    stats->add_option("--overall", stats_overall)->check(CLI::IsMember({"mean", "pooled"}));

    // cost
    std::string cost_dataset_loc, cost_harness_loc;
    std::int64_t cost_avg = -1, cost_a = 0;
    CLI::App* cost = app.add_subcommand("cost", "Conversion cost model");
    cost->add_option("--dataset-loc", cost_dataset_loc, "Comma-separated per-dataset LOC")
        ->required();
    cost->add_option("--harness-loc", cost_harness_loc, "Comma-separated per-harness LOC");
    cost->add_option("--avg-harness-loc", cost_avg, "Average per-harness LOC (used with --A)");
    cost->add_option("--A", cost_a, "Number of harnesses")->required();

    // mix
    std::string mix_plan, mix_out, mix_filter;
    CLI::App* mix = app.add_subcommand("mix", "Weighted mixture resampling");
    mix->add_option("--plan", mix_plan, "Plan JSON file")->required();
    mix->add_option("--out", mix_out)->required();
    mix->add_option("--filter", mix_filter)->check(CLI::IsMember({"web_only", "non_web"}));

    // emit
    std::string emit_in, emit_profile, emit_out, emit_prompt, emit_dataset;
    bool emit_per_turn = false;
    std::size_t emit_max_obs = 8192;
    CLI::App* emit = app.add_subcommand("emit", "ADP-JSONL -> SFT-JSONL for a harness profile");
    emit->add_option("--in", emit_in)->required();
    emit->add_option("--profile", emit_profile)
        ->required()
        ->check(CLI::IsMember({"codeact", "function_calling", "web_agent"}));
    emit->add_option("--out", emit_out)->required();
    emit->add_flag("--per-turn", emit_per_turn, "One example per assistant message");
    emit->add_option("--max-obs-chars", emit_max_obs, "Observation char budget");
    emit->add_option("--system-prompt", emit_prompt, "Override system prompt from a file");
    emit->add_option("--dataset", emit_dataset, "Dataset label for emitted records");

    // pipeline
    std::string pipe_config;
    CLI::App* pipeline = app.add_subcommand("pipeline", "Composed convert->...->emit run");
    pipeline->add_option("--config", pipe_config, "Pipeline config JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        std::cout << kVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (convert->parsed()) return cmd_convert(adapter, in_path, out_path, reject_log);
        if (validate->parsed()) return cmd_validate(val_in, val_mode);
        if (qa->parsed()) return cmd_qa(qa_in, qa_threshold, qa_terminal, qa_report);
        if (stats->parsed()) return cmd_stats(stats_in, stats_dataset, stats_format, stats_overall);
        if (cost->parsed()) return cmd_cost(cost_dataset_loc, cost_harness_loc, cost_avg, cost_a);
        if (mix->parsed()) return cmd_mix(mix_plan, mix_out, mix_filter);
        if (emit->parsed())
            return cmd_emit(emit_in, emit_profile, emit_out, emit_per_turn, emit_max_obs,
                            emit_prompt, emit_dataset);
        if (pipeline->parsed()) return cmd_pipeline(pipe_config);
    } catch (const adp::pipeline::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    std::cout << app.help();
    return kExitUsage;
}
