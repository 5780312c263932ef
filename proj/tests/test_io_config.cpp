#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "nslab/config.hpp"
#include "nslab/io.hpp"
#include "nslab/taylor.hpp"

using namespace nslab;

namespace {

TaylorSolution small_solution(const Lattice& lat, std::uint64_t seed, int order) {
    InitialConditionSpec ic;
    ic.kind = InitialConditionSpec::Kind::RandomSolenoidal;
    ic.seed = seed;
    return solve_coefficients(make_initial(lat, ic), order);
}

} // namespace

TEST_CASE("solution json round trip") {
    Lattice lat(LatticeSpec{2, 1.0, 0.1});
    const TaylorSolution sol = small_solution(lat, 3, 3);
    const nlohmann::json j = solution_to_json(sol);

    SECTION("dump -> parse -> dump is byte identical") {
        const std::string first = j.dump(2);
        const LoadedSolution loaded = solution_from_json(nlohmann::json::parse(first));
        const std::string second = solution_to_json(*loaded.solution).dump(2);
        CHECK(first == second);
    }
    SECTION("fields survive exactly and operators are rebuilt") {
        const LoadedSolution loaded = solution_from_json(j);
        REQUIRE(loaded.solution->order() == 3);
        for (int n = 0; n <= 3; ++n) {
            CHECK(loaded.solution->field(n).data() == sol.field(n).data());
            CHECK(loaded.solution->op(n).matrix() == sol.op(n).matrix());
        }
    }
    SECTION("unsupported schema version is rejected") {
        nlohmann::json bad = j;
        bad["schema_version"] = 999;
        CHECK_THROWS_AS(solution_from_json(bad), ConfigError);
    }
    SECTION("linear-only flag restores linear-only operators") {
        const TaylorSolution lin = solve_coefficients(
            SpectralField(lat), 2, {.include_nonlinear = false});
        const LoadedSolution loaded = solution_from_json(solution_to_json(lin));
        CHECK(loaded.solution->op(1).matrix().isZero());
    }
}

TEST_CASE("norms serialization") {
    Lattice lat(LatticeSpec{2, 1.0, 0.1});
    const auto rows = coefficient_norms(small_solution(lat, 5, 2));
    const std::string csv = norms_to_csv(rows);
    CHECK(csv.starts_with("n,norm,radius_estimate\n"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4); // header + 3 rows
    const nlohmann::json j = norms_to_json(rows);
    CHECK(j.at("rows").size() == 3);
    CHECK(j.at("rows").at(0).at("radius_estimate").is_null());
}

TEST_CASE("trajectory csv layout") {
    Lattice lat(LatticeSpec{2, 1.0, 0.1});
    std::vector<TrajectoryPoint> traj{{0.0, SpectralField(lat)}};
    const std::string csv = trajectory_to_csv(traj);
    CHECK(csv.starts_with("t,l1,l2,l3,re_u1,im_u1,re_u2,im_u2,re_u3,im_u3\n"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 27);
}

TEST_CASE("run configuration") {
    SECTION("empty object yields the documented defaults") {
        const RunConfig cfg = config_from_json(nlohmann::json::object());
        CHECK(cfg.lattice.L == 2);
        CHECK(cfg.lattice.nu == 0.1);
        CHECK(cfg.order == 4);
        CHECK(cfg.include_nonlinear);
        CHECK(cfg.initial.kind == InitialConditionSpec::Kind::TaylorGreen);
        CHECK(cfg.compare.truncations == std::vector<int>{2, 3, 4});
    }
    SECTION("dkappa defaults to 2 pi / L when omitted") {
        const RunConfig cfg = config_from_json({{"lattice", {{"L", 4}}}});
        CHECK(cfg.lattice.dkappa == Catch::Approx(2.0 * std::numbers::pi / 4.0));
    }
    SECTION("unknown keys are rejected") {
        CHECK_THROWS_AS(config_from_json({{"latice", {{"L", 2}}}}), ConfigError);
        CHECK_THROWS_AS(config_from_json({{"lattice", {{"ell", 2}}}}), ConfigError);
        CHECK_THROWS_AS(config_from_json({{"compare", {{"step", 0.1}}}}), ConfigError);
    }
    SECTION("bad values are rejected") {
        CHECK_THROWS_AS(config_from_json({{"lattice", {{"L", 3}}}}), ConfigError);
        CHECK_THROWS_AS(config_from_json({{"order", -1}}), ConfigError);
        CHECK_THROWS_AS(config_from_json({{"compare", {{"dt", 0.0}}}}), ConfigError);
        CHECK_THROWS_AS(config_from_json({{"compare", {{"times", {0.1, 0.2}}}}}), ConfigError);
        CHECK_THROWS_AS(config_from_json({{"initial", {{"kind", "vortex-sheet"}}}}), ConfigError);
        CHECK_THROWS_AS(config_from_json({{"compare", {{"truncations", {-1}}}}}), ConfigError);
    }
    SECTION("truncations above the order are accepted at parse time") {
        // the compare command owns that range check
        CHECK_NOTHROW(config_from_json({{"order", 2}}));
        CHECK_NOTHROW(config_from_json({{"compare", {{"truncations", {9}}}}}));
    }
    SECTION("explicit modes parse into the spec") {
        const nlohmann::json j = {
            {"initial",
             {{"kind", "explicit"},
              {"modes",
               {{{"triple", {1, 0, 0}},
                 {"value", {{0.0, 0.0}, {0.5, 0.25}, {0.0, 0.0}}}}}}}}};
        const RunConfig cfg = config_from_json(j);
        REQUIRE(cfg.initial.explicit_modes.size() == 1);
        CHECK(cfg.initial.explicit_modes[0].first == Triple{1, 0, 0});
        CHECK(cfg.initial.explicit_modes[0].second[1] == std::complex<double>(0.5, 0.25));
    }
    SECTION("config serializes and reparses") {
        RunConfig cfg;
        cfg.lattice = LatticeSpec{4, 0.5, 0.05};
        cfg.order = 6;
        const RunConfig back = config_from_json(config_to_json(cfg));
        CHECK(back.lattice == cfg.lattice);
        CHECK(back.order == 6);
    }
}

TEST_CASE("text file io errors") {
    CHECK_THROWS_AS(read_text_file("/nonexistent/path/file.txt"), IoError);
    CHECK_THROWS_AS(write_text_file("/nonexistent/path/file.txt", "x"), IoError);
    CHECK_THROWS_AS(read_json_file("/nonexistent/path/file.json"), IoError);
}
