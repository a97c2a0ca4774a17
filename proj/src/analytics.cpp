#include "adp/analytics.hpp"

#include <algorithm>
#include <numeric>

namespace adp::analytics {
namespace {

struct ActionCounts {
    std::size_t api = 0;
    std::size_t code = 0;
    std::size_t msg = 0;

    std::size_t total() const { return api + code + msg; }
};

ActionCounts count_actions(const std::vector<Trajectory>& corpus) {
    ActionCounts c;
    for (const Trajectory& t : corpus) {
        for (const Step& s : t.content) {
            if (!s.is_action()) continue;
            switch (s.action().index()) {
                case 0: ++c.api; break;
                case 1: ++c.code; break;
                default: ++c.msg; break;
            }
        }
    }
    return c;
}

}  // namespace

double avg_rounds(const std::vector<Trajectory>& corpus) {
    if (corpus.empty()) throw EmptyCorpus();
    std::size_t actions = 0;
    for (const Trajectory& t : corpus)
        for (const Step& s : t.content)
            if (s.is_action()) ++actions;
    return static_cast<double>(actions) / static_cast<double>(corpus.size());
}

std::array<int, 3> action_distribution(const std::vector<Trajectory>& corpus) {
    ActionCounts c = count_actions(corpus);
    const std::size_t total = c.total();
    if (total == 0) throw NoActions();

    const std::array<std::size_t, 3> counts = {c.api, c.code, c.msg};
    std::array<int, 3> pct{};
    std::array<std::size_t, 3> remainder{};  // numerator of the fractional part, /total
    int assigned = 0;
    for (int i = 0; i < 3; ++i) {
        pct[i] = static_cast<int>(counts[i] * 100 / total);
        remainder[i] = counts[i] * 100 % total;
        assigned += pct[i];
    }
    // Largest remainder; ties go to the earlier class (A > C > M).
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return remainder[a] > remainder[b]; });
    for (int k = 0; assigned < 100; ++k, ++assigned) pct[order[k % 3]] += 1;
    return pct;
}

double func_thought_pct(const std::vector<Trajectory>& corpus) {
    return 100.0 * qa::thought_coverage(corpus, qa::QaConfig{});
}

DatasetStats dataset_stats(const std::vector<Trajectory>& corpus,
                           const std::string& dataset_name) {
    if (corpus.empty()) throw EmptyCorpus();
    DatasetStats stats;
    stats.dataset = dataset_name;
    stats.n_trajectories = corpus.size();
    stats.avg_rounds = avg_rounds(corpus);
    ActionCounts c = count_actions(corpus);
    if (c.total() > 0) {
        auto pct = action_distribution(corpus);
        stats.pct_api = pct[0];
        stats.pct_code = pct[1];
        stats.pct_msg = pct[2];
    }
    stats.pct_func_thought = func_thought_pct(corpus);
    return stats;
}

std::int64_t cost_without_adp(const CostModelInput& input) {
    std::int64_t dataset_sum =
        std::accumulate(input.per_dataset_loc.begin(), input.per_dataset_loc.end(),
                        static_cast<std::int64_t>(0));
    return input.harness_count * dataset_sum;
}

std::int64_t cost_with_adp(const CostModelInput& input) {
    std::int64_t dataset_sum =
        std::accumulate(input.per_dataset_loc.begin(), input.per_dataset_loc.end(),
                        static_cast<std::int64_t>(0));
    std::int64_t harness_sum;
    if (input.avg_harness_loc) {
        harness_sum = *input.avg_harness_loc * input.harness_count;
    } else {
        harness_sum = std::accumulate(input.per_harness_loc.begin(), input.per_harness_loc.end(),
                                      static_cast<std::int64_t>(0));
    }
    return dataset_sum + harness_sum;
}

}  // namespace adp::analytics
