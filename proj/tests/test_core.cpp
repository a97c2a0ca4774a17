#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adp/serialize.hpp"
#include "adp/validate.hpp"
#include "generators.hpp"

using namespace adp;

TEST_CASE("parse: goto example") {
    const std::string line =
        R"({"id":"t1","content":[{"kind":"api_action","function":"goto","kwargs":{"url":"https://www.google.com"}}],"details":{}})";
    Trajectory t = parse_trajectory(line);
    CHECK(t.id == "t1");
    REQUIRE(t.content.size() == 1);
    const auto& api = std::get<ApiAction>(t.content[0].action());
    CHECK(api.function == "goto");
    CHECK(api.kwargs["url"] == "https://www.google.com");
    CHECK_FALSE(api.description.has_value());

    // byte-identical round trip of the canonical line
    CHECK(serialize_trajectory(t) == line);
}

TEST_CASE("parse: code action example") {
    const std::string line =
        R"json({"id":"t2","content":[{"kind":"code_action","language":"python","content":"print(\"Hello World\")"}],"details":{}})json";
    Trajectory t = parse_trajectory(line);
    const auto& code = std::get<CodeAction>(t.content[0].action());
    CHECK(code.language == "python");
    CHECK(code.content == "print(\"Hello World\")");
}

TEST_CASE("parse: empty content parses, fails validation") {
    Trajectory t = parse_trajectory(R"({"id":"t3","content":[],"details":{}})");
    CHECK(t.content.empty());
    ValidationReport report = validate(t, ValidationMode::Lenient);
    CHECK_FALSE(report.ok);
    CHECK(report.violations[0].code == "CONTENT_EMPTY");
}

TEST_CASE("parse: errors carry codes and paths") {
    CHECK_THROWS_AS(parse_trajectory("{nope"), ParseError);
    try {
        parse_trajectory("{nope");
    } catch (const ParseError& e) {
        CHECK(e.code() == ParseErrorCode::MalformedJson);
    }

    try {
        parse_trajectory(R"({"id":"x","content":[{"kind":"alien_action"}],"details":{}})");
        FAIL("expected UnknownStepKind");
    } catch (const ParseError& e) {
        CHECK(e.code() == ParseErrorCode::UnknownStepKind);
        CHECK(e.path() == "/content/0/kind");
    }

    try {
        parse_trajectory(R"({"id":"x","content":[{"kind":"api_action","kwargs":{}}],"details":{}})");
        FAIL("expected MissingField");
    } catch (const ParseError& e) {
        CHECK(e.code() == ParseErrorCode::MissingField);
        CHECK(e.path() == "/content/0/function");
    }

    try {
        parse_trajectory(R"({"id":1,"content":[],"details":{}})");
        FAIL("expected WrongType");
    } catch (const ParseError& e) {
        CHECK(e.code() == ParseErrorCode::WrongType);
    }
}

TEST_CASE("parse: unknown top-level keys rejected, details keys preserved") {
    CHECK_THROWS_AS(parse_trajectory(R"({"id":"x","content":[],"bogus":1})"), ParseError);

    Trajectory t = parse_trajectory(
        R"({"id":"x","content":[{"kind":"message_action","content":"hi"}],"details":{"b":1,"a":2}})");
    // insertion order of details keys survives the round trip
    std::string line = serialize_trajectory(t);
    CHECK(line.find(R"("details":{"b":1,"a":2})") != std::string::npos);
    CHECK(parse_trajectory(line) == t);
}

TEST_CASE("parse: details absent is accepted and serialized as {}") {
    Trajectory t =
        parse_trajectory(R"({"id":"x","content":[{"kind":"message_action","content":"hi"}]})");
    CHECK(serialize_trajectory(t).find("\"details\":{}") != std::string::npos);
}

TEST_CASE("parse: language lowercased, empty description dropped") {
    Trajectory t = parse_trajectory(
        R"({"id":"x","content":[{"kind":"code_action","language":"Python","content":"x=1","description":""}],"details":{}})");
    const auto& code = std::get<CodeAction>(t.content[0].action());
    CHECK(code.language == "python");
    CHECK_FALSE(code.description.has_value());
}

TEST_CASE("serialize: text observation keeps content verbatim") {
    Trajectory t;
    t.id = "t";
    t.content.push_back(
        make_step(Observation{TextObservation{TextSource::Environment, "Hello World"}}));
    t.content.push_back(make_step(Action{MessageAction{"done"}}));
    std::string line = serialize_trajectory(t);
    CHECK(line.find("\"source\":\"environment\"") != std::string::npos);
    CHECK(line.find("Hello World") != std::string::npos);
    CHECK(line.find('\n') == std::string::npos);
}

TEST_CASE("validate: strict minimal pair passes") {
    Trajectory t;
    t.id = "t";
    t.content.push_back(make_step(Observation{TextObservation{TextSource::User, "do X"}}));
    ApiAction a;
    a.function = "goto";
    a.kwargs["url"] = "https://www.google.com";
    t.content.push_back(make_step(Action{a}));
    CHECK(validate(t, ValidationMode::Strict).ok);
}

TEST_CASE("validate: consecutive actions flag ALTERNATION in strict only") {
    Trajectory t;
    t.id = "t";
    ApiAction a;
    a.function = "goto";
    t.content.push_back(make_step(Action{a}));
    t.content.push_back(make_step(Action{a}));
    ValidationReport strict = validate(t, ValidationMode::Strict);
    CHECK_FALSE(strict.ok);
    REQUIRE(strict.violations.size() == 1);
    CHECK(strict.violations[0].code == "ALTERNATION");
    CHECK(strict.violations[0].path == "/content/1");
    CHECK(validate(t, ValidationMode::Lenient).ok);
}

TEST_CASE("validate: web observation needs html or axtree") {
    Trajectory t;
    t.id = "t";
    t.content.push_back(make_step(Observation{WebObservation{}}));
    t.content.push_back(make_step(Action{MessageAction{"hi"}}));
    ValidationReport report = validate(t, ValidationMode::Lenient);
    CHECK_FALSE(report.ok);
    CHECK(report.violations[0].code == "WEBOBS_EMPTY");
}

TEST_CASE("validate: misc invariants") {
    Trajectory t;
    t.id = std::string("a\tb");
    t.content.push_back(make_step(Action{MessageAction{""}}));
    ValidationReport r = validate(t, ValidationMode::Lenient);
    CHECK_FALSE(r.ok);
    bool has_ctl = false, has_msg = false;
    for (const auto& v : r.violations) {
        if (v.code == "ID_CONTROL_CHAR") has_ctl = true;
        if (v.code == "MESSAGE_EMPTY") has_msg = true;
    }
    CHECK(has_ctl);
    CHECK(has_msg);

    Trajectory env_first;
    env_first.id = "e";
    env_first.content.push_back(
        make_step(Observation{TextObservation{TextSource::Environment, "x"}}));
    env_first.content.push_back(make_step(Action{MessageAction{"hi"}}));
    CHECK(validate(env_first, ValidationMode::Lenient).ok);
    CHECK_FALSE(validate(env_first, ValidationMode::Strict).ok);

    Trajectory vp;
    vp.id = "v";
    WebObservation web;
    web.axtree = "tree";
    web.viewport_size = ViewportSize{0, 100};
    vp.content.push_back(make_step(Observation{web}));
    vp.content.push_back(make_step(Action{MessageAction{"hi"}}));
    ValidationReport vr = validate(vp, ValidationMode::Lenient);
    CHECK_FALSE(vr.ok);
    CHECK(vr.violations[0].code == "VIEWPORT_NONPOSITIVE");
}

TEST_CASE("property: round trip and canonical determinism") {
    testgen::TrajectoryGen gen(20260823);
    for (int i = 0; i < 500; ++i) {
        Trajectory t = gen.trajectory("rt" + std::to_string(i));
        REQUIRE(validate(t, ValidationMode::Lenient).ok);
        std::string line = serialize_trajectory(t);
        CHECK(line.find('\n') == std::string::npos);
        Trajectory back = parse_trajectory(line);
        REQUIRE(back == t);
        CHECK(serialize_trajectory(back) == line);
    }
}

TEST_CASE("property: strict ok implies lenient ok") {
    testgen::TrajectoryGen gen(99);
    for (int i = 0; i < 200; ++i) {
        Trajectory t = gen.trajectory("s" + std::to_string(i));
        if (validate(t, ValidationMode::Strict).ok)
            CHECK(validate(t, ValidationMode::Lenient).ok);
    }
}
