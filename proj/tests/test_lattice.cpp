#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <set>

#include "nslab/lattice.hpp"

using namespace nslab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("lattice size is (L+1)^3") {
    CHECK(Lattice(LatticeSpec{2, kPi, 1.0}).size() == 27);
    CHECK(Lattice(LatticeSpec{4, 1.0, 1.0}).size() == 125);
}

TEST_CASE("lattice spec validation") {
    CHECK_THROWS_AS(Lattice(LatticeSpec{3, 1.0, 1.0}), ConfigError); // odd
    CHECK_THROWS_AS(Lattice(LatticeSpec{0, 1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(Lattice(LatticeSpec{-2, 1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(Lattice(LatticeSpec{2, 0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(Lattice(LatticeSpec{2, 1.0, -0.5}), ConfigError);
    CHECK_NOTHROW(Lattice(LatticeSpec{2, 1.0, 1.0}));
}

TEST_CASE("default spacing is 2 pi / L") {
    const auto spec = LatticeSpec::with_default_spacing(4, 0.1);
    CHECK(spec.dkappa == Catch::Approx(2.0 * kPi / 4.0));
}

TEST_CASE("index/triple bijection") {
    for (const int L : {2, 4}) {
        Lattice lat(LatticeSpec{L, 1.0, 1.0});
        std::set<std::size_t> seen;
        for (std::size_t j = 0; j < lat.size(); ++j) {
            CHECK(lat.index_of(lat.triple(j)) == j);
            seen.insert(j);
        }
        CHECK(seen.size() == lat.size());
    }
}

TEST_CASE("wavenumber scaling") {
    Lattice lat(LatticeSpec{2, kPi, 1.0});
    CHECK(lat.wavenumber(lat.index_of({1, 0, 0})).isApprox(Eigen::Vector3d(kPi, 0, 0)));
    CHECK(lat.wavenumber(lat.index_of({0, 0, 0})).norm() == 0.0);
    CHECK(lat.wavenumber(lat.index_of({-1, 1, -1})).isApprox(Eigen::Vector3d(-kPi, kPi, -kPi)));
    CHECK_THROWS_AS(lat.wavenumber(27), std::out_of_range);
}

TEST_CASE("shift index implements truncated triple difference") {
    Lattice lat(LatticeSpec{2, 1.0, 1.0});
    const std::size_t zero = lat.index_of({0, 0, 0});
    for (std::size_t j = 0; j < lat.size(); ++j) {
        const auto s = lat.shift(j, j);
        REQUIRE(s.has_value());
        CHECK(*s == zero);
    }
    CHECK_FALSE(lat.shift(lat.index_of({1, 0, 0}), lat.index_of({-1, 0, 0})).has_value());
    const auto s = lat.shift(lat.index_of({1, 1, 0}), lat.index_of({0, 1, 0}));
    REQUIRE(s.has_value());
    CHECK(*s == lat.index_of({1, 0, 0}));
}

TEST_CASE("negation is an involution matching triple negation") {
    Lattice lat(LatticeSpec{2, 1.0, 1.0});
    CHECK(lat.negation(lat.index_of({0, 0, 0})) == lat.index_of({0, 0, 0}));
    CHECK(lat.negation(lat.index_of({1, 0, 0})) == lat.index_of({-1, 0, 0}));
    for (std::size_t j = 0; j < lat.size(); ++j) {
        CHECK(lat.negation(lat.negation(j)) == j);
        const Triple t = lat.triple(j);
        const Triple nt = lat.triple(lat.negation(j));
        CHECK(nt == Triple{-t[0], -t[1], -t[2]});
    }
}

TEST_CASE("shift commutes with negation") {
    Lattice lat(LatticeSpec{2, 1.0, 1.0});
    std::size_t present = 0;
    std::size_t present_negated = 0;
    for (std::size_t j = 0; j < lat.size(); ++j) {
        for (std::size_t k = 0; k < lat.size(); ++k) {
            const auto s = lat.shift(j, k);
            const auto sn = lat.shift(lat.negation(j), lat.negation(k));
            CHECK(s.has_value() == sn.has_value());
            if (s) {
                CHECK(*sn == lat.negation(*s));
                ++present;
            }
            if (sn) ++present_negated;
        }
    }
    CHECK(present == present_negated);
}
