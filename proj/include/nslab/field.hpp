#pragma once

#include <algorithm>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "nslab/errors.hpp"
#include "nslab/lattice.hpp"

namespace nslab {

/// One Fourier coefficient field: M complex 3-vectors stacked into a 3M
/// column vector, trio j holding the coefficient at kappa_j.
class SpectralField {
public:
    explicit SpectralField(const Lattice& lattice)
        : lattice_(&lattice), data_(Eigen::VectorXcd::Zero(3 * lattice.size())) {}

    SpectralField(const Lattice& lattice, Eigen::VectorXcd data)
        : lattice_(&lattice), data_(std::move(data)) {
        if (data_.size() != static_cast<Eigen::Index>(3 * lattice.size()))
            throw std::invalid_argument("spectral field: expected 3M entries");
    }

    const Lattice& lattice() const { return *lattice_; }
    const Eigen::VectorXcd& data() const { return data_; }
    Eigen::VectorXcd& data() { return data_; }

    Eigen::Vector3cd mode(std::size_t j) const { return data_.segment<3>(3 * static_cast<Eigen::Index>(j)); }
    void set_mode(std::size_t j, const Eigen::Vector3cd& v) {
        data_.segment<3>(3 * static_cast<Eigen::Index>(j)) = v;
    }

    double norm() const { return data_.norm(); }
    double max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : 0.0; }

private:
    const Lattice* lattice_;
    Eigen::VectorXcd data_;
};

/// max_j |khat_j . u_j| / ||u||_inf over kappa_j != 0; zero for the zero field.
inline double divergence_defect(const SpectralField& u) {
    const Lattice& lat = u.lattice();
    const double scale = u.max_abs();
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < lat.size(); ++j) {
        const Eigen::Vector3d kappa = lat.wavenumber(j);
        const double kn = kappa.norm();
        if (kn == 0.0) continue;
        const std::complex<double> dot =
            (kappa[0] * u.mode(j)[0] + kappa[1] * u.mode(j)[1] + kappa[2] * u.mode(j)[2]) / kn;
        worst = std::max(worst, std::abs(dot) / scale);
    }
    return worst;
}

/// max_j ||u(-kappa_j) - conj(u(kappa_j))||_inf / ||u||_inf.
inline double conjugate_symmetry_defect(const SpectralField& u) {
    const Lattice& lat = u.lattice();
    const double scale = u.max_abs();
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < lat.size(); ++j) {
        const Eigen::Vector3cd d = u.mode(lat.negation(j)) - u.mode(j).conjugate();
        worst = std::max(worst, d.cwiseAbs().maxCoeff() / scale);
    }
    return worst;
}

/// |u(0)| / ||u||_inf.
inline double mean_mode_defect(const SpectralField& u) {
    const double scale = u.max_abs();
    if (scale == 0.0) return 0.0;
    return u.mode(u.lattice().zero_index()).cwiseAbs().maxCoeff() / scale;
}

/// Checks zero mean, incompressibility and conjugate symmetry; throws
/// ValidationError naming the failed invariant.
inline void validate_field(const SpectralField& u, double tol = 1e-12) {
    if (!u.data().allFinite()) throw ValidationError("field: non-finite coefficients");
    if (const double d = mean_mode_defect(u); d > tol)
        throw ValidationError("field: zero-mean violated, defect " + std::to_string(d));
    if (const double d = divergence_defect(u); d > tol)
        throw ValidationError("field: divergence-free violated, defect " + std::to_string(d));
    if (const double d = conjugate_symmetry_defect(u); d > tol)
        throw ValidationError("field: conjugate symmetry violated, defect " + std::to_string(d));
}

} // namespace nslab
