#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "adp/analytics.hpp"
#include "generators.hpp"

using namespace adp;
using namespace adp::analytics;

namespace {

// Independent recount used as the oracle; deliberately naive.
struct Oracle {
    std::size_t trajectories = 0;
    std::size_t api = 0, code = 0, msg = 0;
    std::size_t described = 0;  // api/code actions with an English-looking description

    static Oracle over(const std::vector<Trajectory>& corpus) {
        Oracle o;
        o.trajectories = corpus.size();
        for (const Trajectory& t : corpus) {
            for (const Step& s : t.content) {
                if (!s.is_action()) continue;
                if (const auto* a = std::get_if<ApiAction>(&s.action())) {
                    ++o.api;
                    if (a->description && qa::is_english_thought(*a->description, 0.5))
                        ++o.described;
                } else if (const auto* c = std::get_if<CodeAction>(&s.action())) {
                    ++o.code;
                    if (c->description && qa::is_english_thought(*c->description, 0.5))
                        ++o.described;
                } else {
                    ++o.msg;
                }
            }
        }
        return o;
    }

    std::size_t actions() const { return api + code + msg; }
};

Trajectory with_actions(const std::string& id, std::size_t n_api, std::size_t n_code,
                        std::size_t n_msg, bool described = true) {
    Trajectory t;
    t.id = id;
    t.content.push_back(make_step(Observation{TextObservation{TextSource::User, "go"}}));
    for (std::size_t i = 0; i < n_api; ++i) {
        ApiAction a;
        a.function = "goto";
        if (described) a.description = "open the page";
        t.content.push_back(make_step(Action{a}));
    }
    for (std::size_t i = 0; i < n_code; ++i) {
        CodeAction a;
        a.language = "python";
        a.content = "pass";
        if (described) a.description = "run the code";
        t.content.push_back(make_step(Action{a}));
    }
    for (std::size_t i = 0; i < n_msg; ++i)
        t.content.push_back(make_step(Action{MessageAction{"ok"}}));
    return t;
}

}  // namespace

TEST_CASE("avg_rounds: arithmetic mean of action counts") {
    std::vector<Trajectory> corpus = {with_actions("a", 1, 0, 0), with_actions("b", 1, 1, 1)};
    CHECK(avg_rounds(corpus) == doctest::Approx(2.0));

    std::vector<Trajectory> singles = {with_actions("a", 1, 0, 0), with_actions("b", 0, 1, 0),
                                       with_actions("c", 0, 0, 1)};
    CHECK(avg_rounds(singles) == doctest::Approx(1.0));

    CHECK_THROWS_AS(avg_rounds({}), EmptyCorpus);
}

TEST_CASE("action_distribution: pure corpora and error case") {
    CHECK(action_distribution({with_actions("a", 3, 0, 0)}) == std::array<int, 3>{100, 0, 0});
    CHECK(action_distribution({with_actions("a", 0, 2, 0)}) == std::array<int, 3>{0, 100, 0});
    CHECK_THROWS_AS(action_distribution({with_actions("a", 0, 0, 0)}), NoActions);
}

TEST_CASE("action_distribution: largest remainder, A-first tie break") {
    // 1/1/1 -> 33.3 each; the extra point goes to A
    CHECK(action_distribution({with_actions("a", 1, 1, 1)}) == std::array<int, 3>{34, 33, 33});
    // 1/1/0 -> 50/50/0 exactly
    CHECK(action_distribution({with_actions("a", 1, 1, 0)}) == std::array<int, 3>{50, 50, 0});
    // 2/1/1 -> 50/25/25 exactly
    CHECK(action_distribution({with_actions("a", 2, 1, 1)}) == std::array<int, 3>{50, 25, 25});
    // 1/1/5 -> 14.28/14.28/71.43: M holds the largest remainder
    auto pct = action_distribution({with_actions("a", 1, 1, 5)});
    CHECK(pct[0] + pct[1] + pct[2] == 100);
    CHECK(pct == std::array<int, 3>{14, 14, 72});
}

TEST_CASE("action_distribution: always sums to 100 on random corpora") {
    testgen::TrajectoryGen gen(5);
    for (int i = 0; i < 50; ++i) {
        std::vector<Trajectory> corpus = gen.corpus(1 + gen.below(20));
        auto pct = action_distribution(corpus);
        CHECK(pct[0] + pct[1] + pct[2] == 100);
    }
}

TEST_CASE("func_thought_pct: table corner cases") {
    CHECK(func_thought_pct({with_actions("a", 4, 0, 0, true)}) == doctest::Approx(100.0));
    CHECK(func_thought_pct({with_actions("a", 4, 0, 0, false)}) == doctest::Approx(0.0));
    // message-only corpus is vacuous
    CHECK(func_thought_pct({with_actions("a", 0, 0, 3)}) == doctest::Approx(100.0));
}

TEST_CASE("oracle equivalence on 200 generated trajectories") {
    testgen::TrajectoryGen gen(20260823);
    std::vector<Trajectory> corpus = gen.corpus(200);
    Oracle oracle = Oracle::over(corpus);

    CHECK(avg_rounds(corpus) ==
          doctest::Approx(static_cast<double>(oracle.actions()) /
                          static_cast<double>(oracle.trajectories))
              .epsilon(1e-12));

    auto pct = action_distribution(corpus);
    CHECK(pct[0] + pct[1] + pct[2] == 100);

    double expected_cov = (oracle.api + oracle.code) == 0
                              ? 100.0
                              : 100.0 * static_cast<double>(oracle.described) /
                                    static_cast<double>(oracle.api + oracle.code);
    CHECK(func_thought_pct(corpus) == doctest::Approx(expected_cov).epsilon(1e-12));

    // cross-module consistency
    CHECK(func_thought_pct(corpus) ==
          doctest::Approx(100.0 * qa::thought_coverage(corpus, qa::QaConfig{})));

    DatasetStats stats = dataset_stats(corpus, "generated");
    CHECK(stats.n_trajectories == 200);
    CHECK(stats.pct_api == pct[0]);
    CHECK(stats.pct_code == pct[1]);
    CHECK(stats.pct_msg == pct[2]);
    CHECK(stats.avg_rounds == doctest::Approx(avg_rounds(corpus)));
}

TEST_CASE("dataset_stats: permutation invariance and merge law") {
    testgen::TrajectoryGen gen(17);
    std::vector<Trajectory> a = gen.corpus(25);
    std::vector<Trajectory> b = gen.corpus(25);

    std::vector<Trajectory> merged = a;
    merged.insert(merged.end(), b.begin(), b.end());

    DatasetStats sa = dataset_stats(a, "a");
    DatasetStats sb = dataset_stats(b, "b");
    DatasetStats sm = dataset_stats(merged, "m");

    // trajectory-weighted merge of avg_rounds
    double expected_rounds = (sa.avg_rounds * 25 + sb.avg_rounds * 25) / 50.0;
    CHECK(sm.avg_rounds == doctest::Approx(expected_rounds).epsilon(1e-12));

    std::mt19937_64 rng(1);
    std::shuffle(merged.begin(), merged.end(), rng);
    DatasetStats shuffled = dataset_stats(merged, "m");
    CHECK(shuffled.avg_rounds == doctest::Approx(sm.avg_rounds));
    CHECK(shuffled.pct_api == sm.pct_api);
    CHECK(shuffled.pct_func_thought == doctest::Approx(sm.pct_func_thought));
}

TEST_CASE("cost model: reported arithmetic") {
    CostModelInput input;
    input.per_dataset_loc = {1500, 134, 269, 335, 476, 260, 290, 879, 155, 221, 228, 145};
    input.harness_count = 100;
    input.avg_harness_loc = 77;
    CHECK(cost_without_adp(input) == 489200);
    CHECK(cost_with_adp(input) == 12592);
    CHECK(cost_with_adp(input) <= cost_without_adp(input));

    input.harness_count = 0;
    CHECK(cost_without_adp(input) == 0);
    CHECK(cost_with_adp(input) == 4892);

    input.harness_count = 1;
    input.avg_harness_loc.reset();
    input.per_harness_loc = {};
    CHECK(cost_without_adp(input) == 4892);

    input.per_harness_loc = {150, 50, 30};
    CHECK(cost_with_adp(input) == 5122);
}
