#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nslab/errors.hpp"
#include "nslab/field.hpp"
#include "nslab/operators.hpp"
#include "nslab/taylor.hpp"

namespace nslab {

struct IntegratorConfig {
    double dt = 1e-4;
    int steps = 100;
    bool include_nonlinear = true;

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("integrator: dt must be positive");
        if (steps <= 0) throw ConfigError("integrator: steps must be positive");
    }
};

namespace detail {

/// Caches the flow-independent D and P blocks; the advection operator is
/// rebuilt densely at every evaluation.
class NavierStokesRhs {
public:
    NavierStokesRhs(const Lattice& lat, bool include_nonlinear)
        : lat_(&lat), diffusion_(diffusion_matrix(lat)), projection_(projection_matrix(lat)),
          include_nonlinear_(include_nonlinear) {}

    Eigen::VectorXcd operator()(const Eigen::VectorXcd& u) const {
        Eigen::VectorXcd out = diffusion_.matrix() * u;
        if (include_nonlinear_) {
            const OperatorMatrix j = advection_matrix(*lat_, SpectralField(*lat_, u));
            out += block_diagonal_product(projection_, j).matrix() * u;
        }
        return out;
    }

private:
    const Lattice* lat_;
    OperatorMatrix diffusion_;
    OperatorMatrix projection_;
    bool include_nonlinear_;
};

} // namespace detail

/// (D + P J(u)) u with J rebuilt from the current u; D u alone when the
/// nonlinearity is disabled.
inline SpectralField navier_stokes_rhs(const SpectralField& u, bool include_nonlinear = true) {
    const detail::NavierStokesRhs rhs(u.lattice(), include_nonlinear);
    return SpectralField(u.lattice(), rhs(u.data()));
}

struct TrajectoryPoint {
    double t = 0.0;
    SpectralField u;
};

namespace detail {

template <class OnStep>
Eigen::VectorXcd rk4_run(const Lattice& lat, const Eigen::VectorXcd& u0,
                         const IntegratorConfig& cfg, OnStep&& on_step) {
    const NavierStokesRhs rhs(lat, cfg.include_nonlinear);
    Eigen::VectorXcd u = u0;
    for (int i = 1; i <= cfg.steps; ++i) {
        const Eigen::VectorXcd k1 = rhs(u);
        const Eigen::VectorXcd k2 = rhs(u + 0.5 * cfg.dt * k1);
        const Eigen::VectorXcd k3 = rhs(u + 0.5 * cfg.dt * k2);
        const Eigen::VectorXcd k4 = rhs(u + cfg.dt * k3);
        u += cfg.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!u.allFinite())
            throw NumericError("rk4: non-finite state at step " + std::to_string(i) + ", t = " +
                               std::to_string(i * cfg.dt));
        on_step(i, u);
    }
    return u;
}

} // namespace detail

/// Classical fixed-step RK4 on du/dt = U(u) u. The returned trajectory
/// includes the initial point at t = 0.
inline std::vector<TrajectoryPoint> integrate(const SpectralField& u0,
                                              const IntegratorConfig& cfg) {
    cfg.validate();
    validate_field(u0);
    std::vector<TrajectoryPoint> traj;
    traj.reserve(cfg.steps + 1);
    traj.push_back({0.0, u0});
    detail::rk4_run(u0.lattice(), u0.data(), cfg, [&](int i, const Eigen::VectorXcd& u) {
        traj.push_back({i * cfg.dt, SpectralField(u0.lattice(), u)});
    });
    return traj;
}

/// Endpoint-only integration to time horizon, step count chosen so the
/// effective dt never exceeds the requested one.
inline SpectralField integrate_to(const SpectralField& u0, double horizon,
                                  const IntegratorConfig& cfg) {
    if (horizon == 0.0) return u0;
    IntegratorConfig local = cfg;
    local.steps = std::max(1, static_cast<int>(std::ceil(horizon / cfg.dt - 1e-12)));
    local.dt = horizon / local.steps;
    local.validate();
    const Eigen::VectorXcd end = detail::rk4_run(u0.lattice(), u0.data(), local,
                                                 [](int, const Eigen::VectorXcd&) {});
    return SpectralField(u0.lattice(), end);
}

struct CompareRow {
    double t = 0.0;
    int truncation = 0;
    double rel_error = 0.0;
};

struct SlopeFit {
    int truncation = 0;
    double slope = 0.0;
};

struct CompareResult {
    std::vector<CompareRow> rows;
    std::vector<SlopeFit> slopes;
};

namespace detail {

/// Least-squares slope of log(err) against log(t).
inline double loglog_slope(const std::vector<double>& ts, const std::vector<double>& errs) {
    const std::size_t n = ts.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(ts[i]);
        const double y = std::log(std::max(errs[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace detail

/// Per (time, truncation) relative error of the series against the RK4
/// reference, plus a log-log slope fit over the smallest three positive
/// times per truncation.
inline CompareResult compare_taylor_vs_reference(const TaylorSolution& sol,
                                                 const IntegratorConfig& cfg,
                                                 const std::vector<double>& times,
                                                 const std::vector<int>& truncations) {
    cfg.validate();
    for (const double t : times)
        if (t < 0.0) throw ConfigError("compare: times must be nonnegative");
    for (const int n : truncations)
        if (n < 0 || n > sol.order())
            throw std::out_of_range("compare: truncation outside solution order");

    std::vector<double> sorted_times = times;
    std::sort(sorted_times.begin(), sorted_times.end());

    CompareResult out;
    std::vector<SpectralField> refs;
    refs.reserve(sorted_times.size());
    for (const double t : sorted_times) {
        try {
            refs.push_back(integrate_to(sol.field(0), t, cfg));
        } catch (const NumericError& e) {
            throw NumericError("compare: reference integration diverged at t = " +
                               std::to_string(t) + " (" + e.what() + ")");
        }
    }

    for (const int trunc : truncations) {
        std::vector<double> fit_t, fit_e;
        for (std::size_t i = 0; i < sorted_times.size(); ++i) {
            const double t = sorted_times[i];
            const SpectralField approx = evaluate_series(sol, t, trunc);
            const double denom = std::max(refs[i].norm(), 1e-300);
            const double err = (approx.data() - refs[i].data()).norm() / denom;
            out.rows.push_back({t, trunc, err});
            if (t > 0.0 && fit_t.size() < 3) {
                fit_t.push_back(t);
                fit_e.push_back(err);
            }
        }
        if (fit_t.size() >= 2)
            out.slopes.push_back({trunc, detail::loglog_slope(fit_t, fit_e)});
    }
    return out;
}

} // namespace nslab
