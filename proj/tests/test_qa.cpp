#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "adp/qa.hpp"
#include "generators.hpp"

using namespace adp;
using namespace adp::qa;

namespace {

Trajectory single_api(const std::string& id, const std::string& function,
                      std::optional<std::string> description = std::nullopt,
                      JsonValue kwargs = JsonValue::object()) {
    Trajectory t;
    t.id = id;
    t.content.push_back(make_step(Observation{TextObservation{TextSource::User, "do it"}}));
    ApiAction a;
    a.function = function;
    a.kwargs = std::move(kwargs);
    a.description = std::move(description);
    t.content.push_back(make_step(Action{a}));
    return t;
}

// corpus with `thoughtful` described API actions out of `total`
std::vector<Trajectory> coverage_corpus(std::size_t thoughtful, std::size_t total) {
    std::vector<Trajectory> corpus;
    for (std::size_t i = 0; i < total; ++i) {
        std::optional<std::string> desc;
        if (i < thoughtful) desc = "click the button";
        corpus.push_back(single_api("t" + std::to_string(i), "stop", desc));
    }
    return corpus;
}

}  // namespace

TEST_CASE("identifier rule") {
    CHECK(is_valid_identifier("goto"));
    CHECK(is_valid_identifier("send_msg_to_user"));
    CHECK(is_valid_identifier("f2"));
    CHECK_FALSE(is_valid_identifier(""));
    CHECK_FALSE(is_valid_identifier("2fast"));
    CHECK_FALSE(is_valid_identifier("click element!"));
    CHECK_FALSE(is_valid_identifier("url-2"));
    CHECK_FALSE(is_valid_identifier("_hidden"));
}

TEST_CASE("english heuristic") {
    CHECK(is_english_thought("click the button", 0.5));
    CHECK(is_english_thought("run step 2 of 3", 0.5));
    CHECK_FALSE(is_english_thought("", 0.5));
    CHECK_FALSE(is_english_thought("12345 !!!", 0.5));
    CHECK_FALSE(is_english_thought("こちらをクリックしてください", 0.5));
    // mostly ASCII with a stray accent still counts
    CHECK(is_english_thought("click the café button", 0.5));
}

TEST_CASE("check_tool_call_format: offenders by id and step") {
    std::vector<Trajectory> corpus;
    corpus.push_back(single_api("good", "goto"));
    corpus.push_back(single_api("bad_fn", "click element!"));
    JsonValue kwargs = JsonValue::object();
    kwargs["url-2"] = "x";
    corpus.push_back(single_api("bad_key", "click", std::nullopt, kwargs));

    CheckResult result = check_tool_call_format(corpus, QaConfig{});
    CHECK_FALSE(result.pass);
    REQUIRE(result.offenders.size() == 2);
    CHECK(result.offenders[0].trajectory_id == "bad_fn");
    CHECK(result.offenders[0].step_index == 1);
    CHECK(result.offenders[1].trajectory_id == "bad_key");

    CHECK(check_tool_call_format({single_api("ok", "goto")}, QaConfig{}).pass);
}

TEST_CASE("thought_coverage: boundary is inclusive") {
    QaConfig cfg;
    CHECK(thought_coverage(coverage_corpus(4, 5), cfg) == doctest::Approx(0.8));
    CHECK(thought_coverage(coverage_corpus(4, 5), cfg) >= cfg.thought_threshold);
    CHECK(thought_coverage(coverage_corpus(7, 10), cfg) == doctest::Approx(0.7));
    CHECK(thought_coverage(coverage_corpus(7, 10), cfg) < cfg.thought_threshold);
}

TEST_CASE("thought_coverage: vacuous corpus of message actions") {
    Trajectory t;
    t.id = "m";
    t.content.push_back(make_step(Action{MessageAction{"hello"}}));
    CHECK(thought_coverage({t}, QaConfig{}) == 1.0);
}

TEST_CASE("thought_coverage: monotonicity and permutation invariance") {
    QaConfig cfg;
    std::vector<Trajectory> corpus = coverage_corpus(3, 7);
    double base = thought_coverage(corpus, cfg);

    std::vector<Trajectory> plus_thoughtful = corpus;
    plus_thoughtful.push_back(single_api("extra", "stop", "open the settings page"));
    CHECK(thought_coverage(plus_thoughtful, cfg) >= base);

    std::vector<Trajectory> plus_thoughtless = corpus;
    plus_thoughtless.push_back(single_api("extra", "stop"));
    CHECK(thought_coverage(plus_thoughtless, cfg) <= base);

    std::mt19937_64 rng(7);
    std::shuffle(corpus.begin(), corpus.end(), rng);
    CHECK(thought_coverage(corpus, cfg) == base);
}

TEST_CASE("check_termination: final step decides") {
    QaConfig cfg;
    Trajectory message_end;
    message_end.id = "m";
    message_end.content.push_back(make_step(Action{MessageAction{"Done."}}));
    CHECK(check_termination({message_end}, cfg).pass);

    CHECK(check_termination({single_api("s", "stop")}, cfg).pass);
    CHECK_FALSE(check_termination({single_api("g", "goto")}, cfg).pass);

    Trajectory obs_end = single_api("o", "stop");
    obs_end.content.push_back(
        make_step(Observation{TextObservation{TextSource::Environment, "..."}}));
    CheckResult result = check_termination({obs_end}, cfg);
    CHECK_FALSE(result.pass);
    REQUIRE(result.offenders.size() == 1);
    CHECK(result.offenders[0].trajectory_id == "o");

    cfg.terminal_functions = {"goto"};
    CHECK(check_termination({single_api("g", "goto")}, cfg).pass);
}

TEST_CASE("run_qa: aggregates four checks") {
    QaConfig cfg;
    QaReport report = run_qa(coverage_corpus(5, 5), cfg);
    CHECK(report.overall_pass);
    CHECK(report.per_check.size() == 4);
    CHECK(report.trajectories_checked == 5);

    // one alternation violation flips strict_validation and overall
    std::vector<Trajectory> corpus = coverage_corpus(5, 5);
    Trajectory bad;
    bad.id = "bad";
    bad.content.push_back(make_step(Action{MessageAction{"a"}}));
    bad.content.push_back(make_step(Action{MessageAction{"b"}}));
    corpus.push_back(bad);
    report = run_qa(corpus, cfg);
    CHECK_FALSE(report.overall_pass);
    CHECK_FALSE(report.per_check.at("strict_validation").pass);
}

TEST_CASE("run_qa: coverage just under the threshold fails and is reported") {
    // 79 thoughtful out of 100 sits one action below the boundary
    QaReport report = run_qa(coverage_corpus(79, 100), QaConfig{});
    CHECK_FALSE(report.overall_pass);
    const CheckEntry& entry = report.per_check.at("thought_coverage");
    CHECK_FALSE(entry.pass);
    REQUIRE(entry.value.has_value());
    CHECK(*entry.value == doctest::Approx(0.79));
}

TEST_CASE("run_qa: order-insensitive aggregate") {
    testgen::TrajectoryGen gen(41);
    std::vector<Trajectory> corpus = gen.corpus(40);
    QaConfig cfg;
    double before = thought_coverage(corpus, cfg);
    std::mt19937_64 rng(3);
    std::shuffle(corpus.begin(), corpus.end(), rng);
    CHECK(thought_coverage(corpus, cfg) == before);
}
