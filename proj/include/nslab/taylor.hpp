#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nslab/errors.hpp"
#include "nslab/field.hpp"
#include "nslab/lattice.hpp"
#include "nslab/operators.hpp"

namespace nslab {

struct InitialConditionSpec {
    enum class Kind { TaylorGreen, RandomSolenoidal, Explicit };

    Kind kind = Kind::TaylorGreen;
    double amplitude = 1.0;
    std::uint64_t seed = 1;         // random kind
    double decay_exponent = 1.0;    // random kind: mode kappa scaled by |kappa|^-decay
    std::vector<std::pair<Triple, Eigen::Vector3cd>> explicit_modes;
};

namespace detail {

/// Box-Muller gaussians from raw mt19937_64 draws; avoids the
/// implementation-defined std::normal_distribution so seeded output is
/// identical everywhere.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : gen_(seed) {}

    double operator()() {
        if (cached_) {
            cached_ = false;
            return cache_;
        }
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53; // (0,1]
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;         // [0,1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cache_ = r * std::sin(a);
        cached_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    double cache_ = 0.0;
    bool cached_ = false;
};

} // namespace detail

/// Builds a zero-mean, divergence-free, conjugate-symmetric initial field.
///
/// taylor-green: the 8 modes at (+-1,+-1,+-1) of the classical vortex
///   u = A (sin x cos y cos z, -cos x sin y cos z, 0).
/// random-solenoidal: seeded complex gaussians, scaled by |kappa|^-decay,
///   projected, symmetrized against the negated conjugate, then normalized
///   so ||u||_2 = amplitude.
/// explicit: caller-provided modes, validated (not repaired).
inline SpectralField make_initial(const Lattice& lat, const InitialConditionSpec& spec) {
    SpectralField u(lat);
    switch (spec.kind) {
    case InitialConditionSpec::Kind::TaylorGreen: {
        for (const int s1 : {-1, 1})
            for (const int s2 : {-1, 1})
                for (const int s3 : {-1, 1}) {
                    const std::size_t j = lat.index_of({s1, s2, s3});
                    const std::complex<double> i(0.0, 1.0);
                    u.set_mode(j, spec.amplitude / 8.0 *
                                      Eigen::Vector3cd(-i * double(s1), i * double(s2), 0.0));
                }
        break;
    }
    case InitialConditionSpec::Kind::RandomSolenoidal: {
        detail::GaussianSource gauss(spec.seed);
        for (std::size_t j = 0; j < lat.size(); ++j) {
            Eigen::Vector3cd v;
            for (int c = 0; c < 3; ++c) {
                const double re = gauss();
                const double im = gauss();
                v[c] = std::complex<double>(re, im);
            }
            const Eigen::Vector3d kappa = lat.wavenumber(j);
            const double k2 = kappa.squaredNorm();
            if (k2 == 0.0) continue; // mean mode stays zero
            v *= std::pow(k2, -0.5 * spec.decay_exponent);
            u.set_mode(j, projection_tensor(kappa).cast<std::complex<double>>() * v);
        }
        // average with the negated conjugate; preserves solenoidality since
        // the projector is real and even in kappa
        SpectralField sym(lat);
        for (std::size_t j = 0; j < lat.size(); ++j)
            sym.set_mode(j, 0.5 * (u.mode(j) + u.mode(lat.negation(j)).conjugate()));
        const double n = sym.norm();
        if (n > 0.0) sym.data() *= spec.amplitude / n;
        u = std::move(sym);
        break;
    }
    case InitialConditionSpec::Kind::Explicit: {
        std::string bad;
        const auto offend = [&bad](const Triple& t, const char* why) {
            bad += " (" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
                   std::to_string(t[2]) + "): " + why + ";";
        };
        for (const auto& [t, v] : spec.explicit_modes) {
            const auto j = lat.try_index_of(t);
            if (!j) {
                offend(t, "outside lattice");
                continue;
            }
            if (t[0] == 0 && t[1] == 0 && t[2] == 0 && v.norm() > 0.0) {
                offend(t, "nonzero mean mode");
                continue;
            }
            const Eigen::Vector3d kappa = lat.wavenumber(*j);
            if (std::abs(kappa.cast<std::complex<double>>().dot(v)) >
                1e-12 * std::max(1.0, kappa.norm() * v.norm()))
                offend(t, "not divergence-free");
            u.set_mode(*j, spec.amplitude * v);
        }
        for (const auto& [t, v] : spec.explicit_modes) {
            const auto j = lat.try_index_of(t);
            if (!j) continue;
            const Eigen::Vector3cd partner = u.mode(lat.negation(*j));
            if ((partner - (spec.amplitude * v).conjugate()).norm() >
                1e-12 * std::max(1.0, u.max_abs()))
                offend(t, "conjugate partner mode missing or mismatched");
        }
        if (!bad.empty())
            throw ValidationError("explicit initial condition rejected:" + bad);
        break;
    }
    }
    validate_field(u);
    return u;
}

struct SolveOptions {
    /// When false the advection term is dropped everywhere (U_0 = D and
    /// U_n = 0 for n > 0); exists for closed-form oracle testing only.
    bool include_nonlinear = true;
};

/// All Taylor coefficients u_0..u_N of the flow together with the operators
/// U_0..U_N built from them. Immutable after construction.
class TaylorSolution {
public:
    TaylorSolution(const Lattice& lattice, std::vector<SpectralField> fields,
                   std::vector<OperatorMatrix> operators, SolveOptions options)
        : lattice_(&lattice), fields_(std::move(fields)), operators_(std::move(operators)),
          options_(options) {}

    const Lattice& lattice() const { return *lattice_; }
    int order() const { return static_cast<int>(fields_.size()) - 1; }
    const SpectralField& field(int n) const { return fields_.at(static_cast<std::size_t>(n)); }
    const OperatorMatrix& op(int n) const { return operators_.at(static_cast<std::size_t>(n)); }
    const std::vector<SpectralField>& fields() const { return fields_; }
    const std::vector<OperatorMatrix>& operators() const { return operators_; }
    const SolveOptions& options() const { return options_; }

private:
    const Lattice* lattice_;
    std::vector<SpectralField> fields_;
    std::vector<OperatorMatrix> operators_;
    SolveOptions options_;
};

/// Recursively computes u_n = (1/n) sum_{p=0}^{n-1} U_p u_{n-1-p},
/// building U_n from u_n as soon as the coefficient is available (U_0..U_{n-1}
/// are all the recursion ever needs).
inline TaylorSolution solve_coefficients(const SpectralField& u0, int order,
                                         SolveOptions options = {}) {
    if (order < 0) throw std::invalid_argument("solve: order must be >= 0");
    validate_field(u0);
    const Lattice& lat = u0.lattice();

    std::vector<SpectralField> fields;
    std::vector<OperatorMatrix> ops;
    fields.reserve(order + 1);
    ops.reserve(order + 1);

    fields.push_back(u0);
    ops.push_back(options.include_nonlinear ? evolution_matrix(lat, 0, u0)
                                            : diffusion_matrix(lat));
    for (int n = 1; n <= order; ++n) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(3 * static_cast<Eigen::Index>(lat.size()));
        for (int p = 0; p < n; ++p) acc += ops[p].matrix() * fields[n - 1 - p].data();
        acc /= double(n);
        fields.emplace_back(lat, std::move(acc));
        ops.push_back(options.include_nonlinear ? evolution_matrix(lat, n, fields.back())
                                                : OperatorMatrix::zero(lat));
    }
    return TaylorSolution(lat, std::move(fields), std::move(ops), options);
}

/// Horner evaluation of sum_{n<=truncation} u_n t^n.
inline SpectralField evaluate_series(const TaylorSolution& sol, double t, int truncation) {
    if (truncation < 0 || truncation > sol.order())
        throw std::out_of_range("evaluate series: truncation outside 0..order");
    Eigen::VectorXcd acc = sol.field(truncation).data();
    for (int n = truncation - 1; n >= 0; --n) acc = sol.field(n).data() + t * acc;
    return SpectralField(sol.lattice(), std::move(acc));
}

struct CoefficientNorm {
    int n = 0;
    double norm = 0.0;
    /// Root-test estimate ||u_n||^(-1/n); absent for n = 0 and zero norms.
    std::optional<double> radius_estimate;
};

/// Per-order norms and radius estimates; purely observational.
inline std::vector<CoefficientNorm> coefficient_norms(const TaylorSolution& sol) {
    std::vector<CoefficientNorm> out;
    out.reserve(sol.order() + 1);
    for (int n = 0; n <= sol.order(); ++n) {
        CoefficientNorm row;
        row.n = n;
        row.norm = sol.field(n).norm();
        if (n >= 1 && row.norm > 0.0)
            row.radius_estimate = std::pow(row.norm, -1.0 / double(n));
        out.push_back(row);
    }
    return out;
}

} // namespace nslab
