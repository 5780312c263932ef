#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "nslab/operators.hpp"
#include "nslab/taylor.hpp"

using namespace nslab;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField random_symmetric_field(const Lattice& lat, std::uint64_t seed) {
    InitialConditionSpec ic;
    ic.kind = InitialConditionSpec::Kind::RandomSolenoidal;
    ic.seed = seed;
    return make_initial(lat, ic);
}

} // namespace

TEST_CASE("projection tensor") {
    SECTION("axis aligned") {
        const Eigen::Matrix3d p = projection_tensor({kPi, 0, 0});
        CHECK(p.isApprox(Eigen::Vector3d(0, 1, 1).asDiagonal().toDenseMatrix()));
    }
    SECTION("diagonal direction") {
        const double c = 0.7;
        Eigen::Matrix3d expected;
        expected << 0.5, -0.5, 0, -0.5, 0.5, 0, 0, 0, 1;
        CHECK(projection_tensor({c, c, 0}).isApprox(expected));
    }
    SECTION("zero mode convention") {
        CHECK(projection_tensor({0, 0, 0}).isZero());
    }
    SECTION("symmetric, idempotent, annihilates kappa") {
        std::mt19937_64 gen(3);
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        for (int trial = 0; trial < 25; ++trial) {
            const Eigen::Vector3d kappa(dist(gen), dist(gen), dist(gen));
            const Eigen::Matrix3d p = projection_tensor(kappa);
            CHECK((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
            CHECK((p * p - p).cwiseAbs().maxCoeff() <= 1e-14);
            CHECK((p * kappa).cwiseAbs().maxCoeff() <= 1e-14 * kappa.norm());
        }
    }
}

TEST_CASE("diffusion operator blocks") {
    Lattice lat(LatticeSpec{2, kPi, 1.0});
    const OperatorMatrix d = diffusion_matrix(lat);
    CHECK(d.block(lat.index_of({1, 0, 0}), lat.index_of({1, 0, 0}))
              .isApprox(-kPi * kPi * Eigen::Matrix3cd::Identity()));
    CHECK(d.block(lat.zero_index(), lat.zero_index()).isZero());

    Lattice thin(LatticeSpec{2, kPi, 0.01});
    const OperatorMatrix d2 = diffusion_matrix(thin);
    CHECK(d2.block(thin.index_of({1, 1, 1}), thin.index_of({1, 1, 1}))
              .isApprox(-0.03 * kPi * kPi * Eigen::Matrix3cd::Identity()));

    SECTION("off-diagonal blocks vanish") {
        for (std::size_t j = 0; j < lat.size(); ++j)
            for (std::size_t k = 0; k < lat.size(); ++k)
                if (j != k) CHECK(d.block(j, k).isZero());
    }
}

TEST_CASE("projection operator blocks") {
    Lattice lat(LatticeSpec{2, kPi, 1.0});
    const OperatorMatrix p = projection_matrix(lat);
    CHECK(p.block(lat.index_of({1, 0, 0}), lat.index_of({1, 0, 0}))
              .isApprox(-Eigen::Vector3cd(0, 1, 1).asDiagonal().toDenseMatrix()));
    CHECK(p.block(lat.zero_index(), lat.zero_index()).isZero());

    SECTION("sign-folded idempotency B*B = -B") {
        for (std::size_t j = 0; j < lat.size(); ++j) {
            const Eigen::Matrix3cd b = p.block(j, j);
            CHECK((b * b + b).cwiseAbs().maxCoeff() <= 1e-13);
        }
    }
    SECTION("commutes with diffusion") {
        const OperatorMatrix d = diffusion_matrix(lat);
        CHECK((d.matrix() * p.matrix() - p.matrix() * d.matrix()).cwiseAbs().maxCoeff() <= 1e-13);
    }
    SECTION("projects any stacked field onto divergence-free modes") {
        std::mt19937_64 gen(4);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Eigen::VectorXcd v(3 * lat.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = {dist(gen), dist(gen)};
        const SpectralField projected(lat, p.matrix() * v);
        CHECK(divergence_defect(projected) <= 1e-12);
    }
}

TEST_CASE("advection operator structure") {
    Lattice lat(LatticeSpec{2, 1.0, 1.0});

    SECTION("zero field gives the zero operator") {
        CHECK(advection_matrix(lat, SpectralField(lat)).matrix().isZero());
    }

    SECTION("single supported mode fills exactly the matching difference blocks") {
        const double a = 0.8;
        SpectralField u(lat);
        u.set_mode(lat.index_of({1, 0, 0}), Eigen::Vector3cd(0, a, 0));
        const OperatorMatrix j = advection_matrix(lat, u);
        const std::complex<double> iunit(0, 1);
        for (std::size_t jr = 0; jr < lat.size(); ++jr) {
            const Eigen::Vector3d kappa = lat.wavenumber(jr);
            for (std::size_t kc = 0; kc < lat.size(); ++kc) {
                const Triple tj = lat.triple(jr);
                const Triple tk = lat.triple(kc);
                const Triple diff{tj[0] - tk[0], tj[1] - tk[1], tj[2] - tk[2]};
                const Eigen::Matrix3cd blk = j.block(jr, kc);
                if (diff == Triple{1, 0, 0}) {
                    Eigen::Matrix3cd expected = Eigen::Matrix3cd::Zero();
                    expected.row(1) = iunit * a * kappa.transpose().cast<std::complex<double>>();
                    CHECK((blk - expected).cwiseAbs().maxCoeff() <= 1e-15);
                } else {
                    CHECK(blk.isZero());
                }
            }
        }
    }

    SECTION("lattice mismatch is rejected") {
        Lattice other(LatticeSpec{4, 1.0, 1.0});
        CHECK_THROWS_AS(advection_matrix(lat, SpectralField(other)), std::invalid_argument);
    }
}

TEST_CASE("operator conjugate symmetry") {
    Lattice lat(LatticeSpec{2, 1.0, 0.1});

    SECTION("diffusion operator is exactly symmetric") {
        CHECK(conjugate_symmetry_defect(diffusion_matrix(lat)) == 0.0);
    }

    SECTION("operators built from symmetric fields are symmetric") {
        const SpectralField u = random_symmetric_field(lat, 5);
        for (const int n : {0, 1, 2}) {
            const OperatorMatrix un = evolution_matrix(lat, n, u);
            CHECK(conjugate_symmetry_defect(un) <= 1e-13);
            // blockwise image of the advection operator under negation
            const OperatorMatrix j = advection_matrix(lat, u);
            for (std::size_t r = 0; r < lat.size(); ++r)
                for (std::size_t c = 0; c < lat.size(); ++c)
                    CHECK((j.block(lat.negation(r), lat.negation(c)) -
                           j.block(r, c).conjugate())
                              .cwiseAbs()
                              .maxCoeff() <= 1e-15);
        }
    }

    SECTION("a lone unpaired mode breaks the symmetry") {
        SpectralField u(lat);
        u.set_mode(lat.index_of({1, 0, 0}), Eigen::Vector3cd(0, 1.0, 0.5));
        CHECK(conjugate_symmetry_defect(advection_matrix(lat, u)) > 0.0);
    }
}

TEST_CASE("evolution operator assembly") {
    Lattice lat(LatticeSpec{2, 1.0, 0.1});

    SECTION("order zero with zero flow reduces to diffusion") {
        const OperatorMatrix u0 = evolution_matrix(lat, 0, SpectralField(lat));
        CHECK(u0.matrix() == diffusion_matrix(lat).matrix());
    }
    SECTION("higher order with zero coefficient vanishes") {
        CHECK(evolution_matrix(lat, 2, SpectralField(lat)).matrix().isZero());
    }
    SECTION("higher order equals projected advection") {
        const SpectralField u = random_symmetric_field(lat, 6);
        const Eigen::MatrixXcd expected =
            projection_matrix(lat).matrix() * advection_matrix(lat, u).matrix();
        CHECK((evolution_matrix(lat, 1, u).matrix() - expected).cwiseAbs().maxCoeff() <= 1e-13);
    }
    SECTION("negative order is rejected") {
        CHECK_THROWS_AS(evolution_matrix(lat, -1, SpectralField(lat)), std::invalid_argument);
    }
    SECTION("lattice mismatch is rejected") {
        Lattice other(LatticeSpec{4, 1.0, 0.1});
        CHECK_THROWS_AS(evolution_matrix(lat, 0, SpectralField(other)), std::invalid_argument);
    }
    SECTION("wrongly sized matrices cannot become operators") {
        CHECK_THROWS_AS(OperatorMatrix(lat, Eigen::MatrixXcd::Zero(5, 5)), std::invalid_argument);
        CHECK_THROWS_AS(SpectralField(lat, Eigen::VectorXcd::Zero(7)), std::invalid_argument);
    }
}

TEST_CASE("generic operators are neither Hermitian nor skew-Hermitian") {
    Lattice lat(LatticeSpec{2, 1.0, 0.1});
    const SpectralField u = random_symmetric_field(lat, 9);
    const OperatorMatrix un = evolution_matrix(lat, 1, u);
    const Eigen::MatrixXcd m = un.matrix();
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-6);
    CHECK((m + m.adjoint()).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("field validators") {
    Lattice lat(LatticeSpec{2, 1.0, 0.1});

    SECTION("zero field passes") {
        CHECK_NOTHROW(validate_field(SpectralField(lat)));
    }
    SECTION("compressible mode is flagged") {
        SpectralField u(lat);
        u.set_mode(lat.index_of({1, 0, 0}), Eigen::Vector3cd(1, 0, 0));
        u.set_mode(lat.index_of({-1, 0, 0}), Eigen::Vector3cd(1, 0, 0));
        CHECK(divergence_defect(u) > 0.1);
        CHECK_THROWS_AS(validate_field(u), ValidationError);
    }
    SECTION("asymmetric mode is flagged") {
        SpectralField u(lat);
        u.set_mode(lat.index_of({0, 1, 0}), Eigen::Vector3cd(1, 0, 0));
        CHECK(conjugate_symmetry_defect(u) > 0.1);
        CHECK_THROWS_AS(validate_field(u), ValidationError);
    }
    SECTION("nonzero mean is flagged") {
        SpectralField u(lat);
        u.set_mode(lat.zero_index(), Eigen::Vector3cd(1, 0, 0));
        CHECK(mean_mode_defect(u) > 0.1);
        CHECK_THROWS_AS(validate_field(u), ValidationError);
    }
}
