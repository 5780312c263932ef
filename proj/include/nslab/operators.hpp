#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "nslab/errors.hpp"
#include "nslab/field.hpp"
#include "nslab/lattice.hpp"

namespace nslab {

/// Dense 3M x 3M complex operator addressed by (block-row j, block-col k)
/// trios of rows/columns, one trio per lattice point.
class OperatorMatrix {
public:
    OperatorMatrix(const Lattice& lattice, Eigen::MatrixXcd m)
        : lattice_(&lattice), m_(std::move(m)) {
        const auto n = static_cast<Eigen::Index>(3 * lattice.size());
        if (m_.rows() != n || m_.cols() != n)
            throw std::invalid_argument("operator matrix: expected 3M x 3M");
    }

    static OperatorMatrix zero(const Lattice& lattice) {
        const auto n = static_cast<Eigen::Index>(3 * lattice.size());
        return OperatorMatrix(lattice, Eigen::MatrixXcd::Zero(n, n));
    }

    const Lattice& lattice() const { return *lattice_; }
    const Eigen::MatrixXcd& matrix() const { return m_; }
    Eigen::MatrixXcd& matrix() { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

    Eigen::Matrix3cd block(std::size_t j, std::size_t k) const {
        return m_.block<3, 3>(3 * static_cast<Eigen::Index>(j), 3 * static_cast<Eigen::Index>(k));
    }
    void set_block(std::size_t j, std::size_t k, const Eigen::Matrix3cd& b) {
        m_.block<3, 3>(3 * static_cast<Eigen::Index>(j), 3 * static_cast<Eigen::Index>(k)) = b;
    }

    SpectralField apply(const SpectralField& u) const {
        if (!same_lattice(*lattice_, u.lattice()))
            throw std::invalid_argument("operator apply: lattice mismatch");
        return SpectralField(*lattice_, m_ * u.data());
    }

private:
    const Lattice* lattice_;
    Eigen::MatrixXcd m_;
};

/// I - kappa kappa^T / kappa^2; the zero matrix at kappa = 0 (frozen mean
/// mode). Symmetric, idempotent, annihilates kappa.
inline Eigen::Matrix3d projection_tensor(const Eigen::Vector3d& kappa) {
    const double k2 = kappa.squaredNorm();
    if (k2 == 0.0) return Eigen::Matrix3d::Zero();
    return Eigen::Matrix3d::Identity() - (kappa * kappa.transpose()) / k2;
}

/// Block-diagonal diffusion operator, block j = -nu*kappa_j^2 * I3.
inline OperatorMatrix diffusion_matrix(const Lattice& lat) {
    OperatorMatrix out = OperatorMatrix::zero(lat);
    for (std::size_t j = 0; j < lat.size(); ++j)
        out.set_block(j, j, -lat.viscosity() * lat.kappa_squared(j) * Eigen::Matrix3cd::Identity());
    return out;
}

/// Block-diagonal sign-folded projector, block j = -projection_tensor(kappa_j).
inline OperatorMatrix projection_matrix(const Lattice& lat) {
    OperatorMatrix out = OperatorMatrix::zero(lat);
    for (std::size_t j = 0; j < lat.size(); ++j)
        out.set_block(j, j, -projection_tensor(lat.wavenumber(j)).cast<std::complex<double>>());
    return out;
}

/// Advection operator built from a coefficient field: block (j,k) equals
/// i * u(kappa_j - kappa_k) * kappa_j^T when the difference lies on the
/// lattice, zero otherwise (Galerkin truncation).
inline OperatorMatrix advection_matrix(const Lattice& lat, const SpectralField& u) {
    if (!same_lattice(lat, u.lattice()))
        throw std::invalid_argument("advection operator: field lives on a different lattice");
    OperatorMatrix out = OperatorMatrix::zero(lat);
    const std::complex<double> iunit(0.0, 1.0);
    for (std::size_t j = 0; j < lat.size(); ++j) {
        const Eigen::Vector3d kappa = lat.wavenumber(j);
        const Eigen::RowVector3cd krow = kappa.transpose().cast<std::complex<double>>();
        for (std::size_t k = 0; k < lat.size(); ++k) {
            const auto s = lat.shift(j, k);
            if (!s) continue;
            out.set_block(j, k, iunit * (u.mode(*s) * krow));
        }
    }
    return out;
}

/// Multiplies a block-diagonal operator into a full one without forming the
/// general product: out block-row j = diag_j * m block-row j.
inline OperatorMatrix block_diagonal_product(const OperatorMatrix& diag, const OperatorMatrix& m) {
    if (!same_lattice(diag.lattice(), m.lattice()))
        throw std::invalid_argument("block product: lattice mismatch");
    OperatorMatrix out = OperatorMatrix::zero(m.lattice());
    for (std::size_t j = 0; j < m.lattice().size(); ++j) {
        const auto r = 3 * static_cast<Eigen::Index>(j);
        out.matrix().middleRows<3>(r) = diag.block(j, j) * m.matrix().middleRows<3>(r);
    }
    return out;
}

/// Time-independent operator of order n: D + P*J(u0) at n = 0, P*J(un)
/// for n > 0.
inline OperatorMatrix evolution_matrix(const Lattice& lat, int n, const SpectralField& un) {
    if (n < 0) throw std::invalid_argument("evolution operator: order must be nonnegative");
    if (!same_lattice(lat, un.lattice()))
        throw std::invalid_argument("evolution operator: field lives on a different lattice");
    const OperatorMatrix pj =
        block_diagonal_product(projection_matrix(lat), advection_matrix(lat, un));
    if (n > 0) return pj;
    OperatorMatrix out = diffusion_matrix(lat);
    out.matrix() += pj.matrix();
    return out;
}

/// max over (j,k) of || block(-j,-k) - conj(block(j,k)) ||_max; zero
/// certifies Fourier conjugate symmetry of the operator.
inline double conjugate_symmetry_defect(const OperatorMatrix& op) {
    const Lattice& lat = op.lattice();
    double worst = 0.0;
    for (std::size_t j = 0; j < lat.size(); ++j) {
        const std::size_t nj = lat.negation(j);
        for (std::size_t k = 0; k < lat.size(); ++k) {
            const std::size_t nk = lat.negation(k);
            const Eigen::Matrix3cd d = op.block(nj, nk) - op.block(j, k).conjugate();
            worst = std::max(worst, d.cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

} // namespace nslab
