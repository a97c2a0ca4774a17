#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adp/qa.hpp"
#include "adp/types.hpp"

namespace adp::analytics {

struct DatasetStats {
    std::string dataset;
    std::size_t n_trajectories = 0;
    double avg_rounds = 0.0;          // report to 1 decimal
    int pct_api = 0;                  // the three sum to exactly 100
    int pct_code = 0;
    int pct_msg = 0;
    double pct_func_thought = 0.0;    // percentage, 1 decimal reporting
};

struct CostModelInput {
    std::vector<std::int64_t> per_dataset_loc;
    std::vector<std::int64_t> per_harness_loc;
    std::optional<std::int64_t> avg_harness_loc;  // summarized alternative
    std::int64_t harness_count = 0;               // A
};

class EmptyCorpus : public std::runtime_error {
public:
    EmptyCorpus() : std::runtime_error("corpus is empty") {}
};

class NoActions : public std::runtime_error {
public:
    NoActions() : std::runtime_error("corpus contains no actions") {}
};

/// Mean number of agent actions per trajectory (one round = one action).
double avg_rounds(const std::vector<Trajectory>& corpus);

/// Integer percentages of API/Code/Message actions, largest-remainder
/// rounded so they sum to exactly 100. Ties resolve in A, C, M order.
std::array<int, 3> action_distribution(const std::vector<Trajectory>& corpus);

/// 100 x thought coverage under the default QA config.
double func_thought_pct(const std::vector<Trajectory>& corpus);

DatasetStats dataset_stats(const std::vector<Trajectory>& corpus, const std::string& dataset_name);

/// Conversion cost without a shared schema: every harness pays the full
/// per-dataset converter cost.
std::int64_t cost_without_adp(const CostModelInput& input);

/// Conversion cost with a shared schema: one converter per dataset plus one
/// per harness (or avg_harness_loc x harness_count when summarized).
std::int64_t cost_with_adp(const CostModelInput& input);

}  // namespace adp::analytics
