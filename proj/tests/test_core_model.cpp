#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "pbs/beam.hpp"
#include "pbs/error.hpp"

using namespace pbs;
using pbs::testing::make_spec;

namespace {

std::vector<ErrorCode> codes_of(const ValidationOutcome& o) {
    std::vector<ErrorCode> out;
    for (const auto& e : o.errors) out.push_back(e.code);
    return out;
}

bool has_code(const ValidationOutcome& o, ErrorCode c) {
    const auto codes = codes_of(o);
    return std::find(codes.begin(), codes.end(), c) != codes.end();
}

ErrorCode parse_error_code(std::string_view text) {
    try {
        deserialize_beam(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("document was accepted");
    return ErrorCode::Io;
}

const char* kCanonical =
    R"({"length":10,"units":{"length":"m","force":"kN"},"supports":[{"kind":"simple","position":0},)"
    R"({"kind":"roller","position":10}],"point_loads":[{"magnitude":100,"position":5}],)"
    R"("distributed_loads":[],"moments":[]})";

}  // namespace

TEST_CASE("simply supported beam validates") {
    const auto o = validate_beam(make_spec(10, {{SupportKind::Simple, 0}, {SupportKind::Roller, 10}}, {{100, 5}}));
    CHECK(o.ok());
    CHECK(o.errors.empty());
    CHECK(o.beam->spec().point_loads.at(0).magnitude == 100);
}

TEST_CASE("single roller is unstable") {
    const auto o = validate_beam(make_spec(10, {{SupportKind::Roller, 5}}, {{10, 2}}));
    CHECK_FALSE(o.ok());
    CHECK(codes_of(o) == std::vector{ErrorCode::Unstable});
}

TEST_CASE("interior fixed support is rejected") {
    const auto o = validate_beam(make_spec(10, {{SupportKind::Fixed, 4}}, {{10, 2}}));
    CHECK(has_code(o, ErrorCode::FixedNotAtEnd));
    CHECK(o.errors.front().path == "supports[0].position");
}

TEST_CASE("a lone fixed support is stable") {
    CHECK(validate_beam(make_spec(2, {{SupportKind::Fixed, 0}}, {{10, 2}})).ok());
    CHECK(validate_beam(make_spec(2, {{SupportKind::Fixed, 2}}, {{10, 0}})).ok());
}

TEST_CASE("validation reports every violated invariant with a path") {
    BeamSpec s = make_spec(10, {{SupportKind::Simple, 3}, {SupportKind::Roller, 3}, {SupportKind::Simple, 12}},
                           {{100, -1}, {0, 5}}, {{6, 2, 1, 1}}, {{5, 11}});
    const auto o = validate_beam(s);
    CHECK_FALSE(o.ok());
    CHECK(has_code(o, ErrorCode::DuplicateSupport));
    CHECK(has_code(o, ErrorCode::OutOfRange));
    CHECK(has_code(o, ErrorCode::InvalidValue));
    std::vector<std::string> paths;
    for (const auto& e : o.errors) paths.push_back(e.path);
    CHECK(std::find(paths.begin(), paths.end(), "supports[2].position") != paths.end());
    CHECK(std::find(paths.begin(), paths.end(), "point_loads[0].position") != paths.end());
    CHECK(std::find(paths.begin(), paths.end(), "moments[0].position") != paths.end());
}

TEST_CASE("no supports and non-positive length") {
    CHECK(has_code(validate_beam(make_spec(5, {}, {{1, 1}})), ErrorCode::Unstable));
    CHECK(has_code(validate_beam(make_spec(-3, {{SupportKind::Fixed, 0}})), ErrorCode::NonPositiveLength));
    CHECK(has_code(validate_beam(make_spec(0, {{SupportKind::Fixed, 0}})), ErrorCode::NonPositiveLength));
}

TEST_CASE("section properties must be positive when present") {
    BeamSpec s = make_spec(4, {{SupportKind::Fixed, 0}}, {{1, 4}});
    s.section.youngs_modulus = -1;
    CHECK(has_code(validate_beam(s), ErrorCode::InvalidValue));
    s.section.youngs_modulus = 200e9;
    s.section.second_moment = 4e-6;
    REQUIRE(validate_beam(s).ok());
    CHECK(s.section.flexural_rigidity().value() == doctest::Approx(8e5));
}

TEST_CASE("validation is total over random specs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5, 15);
    for (int i = 0; i < 500; ++i) {
        BeamSpec s = make_spec(u(rng), {{SupportKind(i % 3), u(rng)}, {SupportKind((i + 1) % 3), u(rng)}},
                               {{u(rng), u(rng)}}, {{u(rng), u(rng), u(rng), u(rng)}}, {{u(rng), u(rng)}});
        ValidationOutcome o;
        CHECK_NOTHROW(o = validate_beam(s));
        CHECK(o.ok() != !o.errors.empty());
    }
}

TEST_CASE("require_valid throws the first issue") {
    try {
        require_valid(make_spec(10, {{SupportKind::Fixed, 4}}, {{10, 2}}));
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FixedNotAtEnd);
        CHECK(e.path() == "supports[0].position");
    }
}

TEST_CASE("round trip is exact for random valid specs") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        BeamSpec s = pbs::testing::random_beam(rng);
        if (i % 2) {
            s.section.youngs_modulus = 210e9;
            s.section.second_moment = 8.1e-6 + i;
        }
        const std::string text = serialize_beam(s);
        CHECK(deserialize_beam(text) == s);
        CHECK(serialize_beam(deserialize_beam(text)) == text);
    }
}

TEST_CASE("canonical text layout") {
    const BeamSpec s = deserialize_beam(kCanonical);
    CHECK(serialize_beam(s) ==
          R"({"length":10.0,"units":{"length":"m","force":"kN"},"supports":[{"kind":"simple","position":0.0},)"
          R"({"kind":"roller","position":10.0}],"point_loads":[{"magnitude":100.0,"position":5.0}],)"
          R"("distributed_loads":[],"moments":[]})");
    CHECK(serialize_beam(s) == serialize_beam(s));
    CHECK(serialize_beam(s).find("section") == std::string::npos);

    BeamSpec with = s;
    with.section.youngs_modulus = 2e11;
    with.section.second_moment = 4e-06;
    CHECK(serialize_beam(with).find(R"("section":{"youngs_modulus":200000000000.0,"second_moment":4e-06})") !=
          std::string::npos);
}

TEST_CASE("strict parsing") {
    CHECK(parse_error_code("{\"length\": 10,") == ErrorCode::Syntax);
    std::string extra = kCanonical;
    extra.insert(1, R"("color":"red",)");
    try {
        deserialize_beam(extra);
        FAIL("accepted unknown field");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownField);
        CHECK(e.path() == "color");
    }
    CHECK(parse_error_code(R"({"length":10,"units":{"length":"m","force":"kN"},"supports":[],"point_loads":[],)"
                           R"("distributed_loads":[]})") == ErrorCode::MissingField);
    CHECK(parse_error_code(R"({"length":"ten","units":{"length":"m","force":"kN"},"supports":[],"point_loads":[],)"
                           R"("distributed_loads":[],"moments":[]})") == ErrorCode::TypeMismatch);
    CHECK(parse_error_code(R"({"length":10,"units":{"length":"m","force":"kN"},"supports":[{"kind":"hinge",)"
                           R"("position":0}],"point_loads":[],"distributed_loads":[],"moments":[]})") ==
          ErrorCode::TypeMismatch);
    std::string nested = kCanonical;
    nested.replace(nested.find("\"position\":5"), 12, "\"position\":5,\"angle\":3");
    try {
        deserialize_beam(nested);
        FAIL("accepted nested unknown field");
    } catch (const Error& e) {
        CHECK(e.path() == "point_loads[0].angle");
    }
}

TEST_CASE("negative length parses and then fails validation") {
    std::string doc = kCanonical;
    doc.replace(doc.find("\"length\":10"), 11, "\"length\":-3");
    const BeamSpec s = deserialize_beam(doc);
    CHECK(s.length == -3);
    CHECK(has_code(validate_beam(s), ErrorCode::NonPositiveLength));
}

TEST_CASE("schema lists every field and forbids extras") {
    const std::string& schema = beam_schema();
    for (const char* field : {"length", "units", "supports", "point_loads", "distributed_loads", "moments",
                              "section", "start_intensity", "end_intensity", "youngs_modulus", "second_moment"}) {
        CHECK(schema.find(std::string("\"") + field + "\"") != std::string::npos);
    }
    CHECK(schema.find("\"additionalProperties\": false") != std::string::npos);
}

TEST_CASE("error code names are stable") {
    CHECK(code_name(ErrorCode::UnknownClass) == "unknown_class");
    CHECK(code_name(ErrorCode::NoSupports) == "no_supports");
    CHECK(code_name(ErrorCode::SchemaViolation) == "schema_violation");
    CHECK(code_name(ErrorCode::LlmDisabled) == "llm_disabled");
    CHECK(code_name(ErrorCode::FixedNotAtEnd) == "fixed_not_at_end");
}
