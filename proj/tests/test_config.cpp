#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "starfode/config.hpp"
#include "starfode/errors.hpp"

using namespace starfode;

TEST_CASE("defaults from an empty object") {
    const ProblemConfig cfg = parse_config("{}");
    CHECK(cfg.kind == ProblemKind::scalar);
    CHECK(cfg.alpha == 0.5);
    CHECK(cfg.T == 1.0);
    CHECK(cfg.m == 100);
    CHECK(cfg.cutoff.kind == CutoffPolicy::Kind::automatic);
    CHECK(cfg.solver == SolverKind::dense);
    CHECK(cfg.scalar.field == "const");
}

TEST_CASE("round trip through serialization") {
    ProblemConfig cfg;
    cfg.kind = ProblemKind::schrodinger;
    cfg.alpha = 0.3;
    cfg.T = 2.0;
    cfg.m = 120;
    cfg.cutoff = CutoffPolicy::fixed(80);
    cfg.solver = SolverKind::lowrank;
    cfg.tol = 1e-9;
    cfg.krylov_dim = 12;
    cfg.schrodinger.grid_n = 7;
    cfg.schrodinger.time_dependent = true;
    const std::string text = serialize_config(cfg);
    const ProblemConfig back = parse_config(text);
    CHECK(serialize_config(back) == text);
    CHECK(back.kind == ProblemKind::schrodinger);
    CHECK(back.alpha == 0.3);
    CHECK(back.cutoff.kind == CutoffPolicy::Kind::fixed);
    CHECK(back.cutoff.k == 80);
    CHECK(back.solver == SolverKind::lowrank);
    CHECK(back.schrodinger.grid_n == 7);
    CHECK(back.schrodinger.time_dependent);
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"alpa": 0.5})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"scalar": {"field": "const", "x": 1}})"),
                    config_error);
    CHECK_THROWS_AS(parse_config(R"({"schrodinger": {"gridn": 9}})"),
                    config_error);
    CHECK_THROWS_AS(parse_config(R"({"system": {"name": "pathsum2", "q": 2}})"),
                    config_error);
}

TEST_CASE("validation errors") {
    CHECK_THROWS_AS(parse_config("not json"), config_error);
    CHECK_THROWS_AS(parse_config("[1, 2]"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"alpha": 0.0})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"alpha": 1.2})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"T": -1.0})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"m": 4})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"m": 10.5})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"kind": "pde"})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"solver": "magic"})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"cutoff": "always"})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"cutoff": 0})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"dt": 0})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"tol": -1e-8})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"krylov_dim": 0})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"scalar": {"field": "quadratic"}})"),
                    config_error);
    CHECK_THROWS_AS(parse_config(R"({"system": {"name": "other"}})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"schrodinger": {"grid_n": 3}})"),
                    config_error);
}

TEST_CASE("cutoff spellings") {
    CHECK(parse_config(R"({"cutoff": "auto"})").cutoff.kind ==
          CutoffPolicy::Kind::automatic);
    const ProblemConfig cfg = parse_config(R"({"cutoff": 42})");
    CHECK(cfg.cutoff.kind == CutoffPolicy::Kind::fixed);
    CHECK(cfg.cutoff.k == 42);
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_config("/nonexistent/path/run.json"), config_error);
}
