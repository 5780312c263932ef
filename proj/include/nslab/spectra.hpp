#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "nslab/errors.hpp"
#include "nslab/operators.hpp"
#include "nslab/taylor.hpp"

namespace nslab {

/// Eigenvalue diagnostics for one operator order. max_real_part is reported,
/// never asserted: the purely-imaginary-spectrum hypothesis is under test.
struct SpectrumReport {
    int n = 0;
    std::vector<std::complex<double>> eigenvalues; // all 3M, with multiplicity
    double max_real_part = 0.0;
    double min_real_part = 0.0;
    /// Max greedy-matching distance between the spectrum and its conjugate,
    /// as multisets.
    double conjugate_pair_defect = 0.0;
    /// (lambda_min, lambda_max) of the Hermitian part.
    std::pair<double, double> hermitian_extremes{0.0, 0.0};
    double hermitian_defect = 0.0; // ||U - U^H||_max
    double skew_defect = 0.0;      // ||U + U^H||_max
    /// Eigensolver sanity: max_m ||U x_m - lambda_m x_m||_2 / ||U||_F.
    double max_residual = 0.0;
    /// Eigenvectors numerically proportional to their own Fourier-conjugate
    /// image (diagnostic for the conjugate-pair eigenvector argument).
    int self_conjugate_eigenvector_count = 0;
};

/// H = (U + U^H) / 2.
inline OperatorMatrix hermitian_part(const OperatorMatrix& u) {
    return OperatorMatrix(u.lattice(), 0.5 * (u.matrix() + u.matrix().adjoint()));
}

/// All eigenvalues of a dense complex matrix, with multiplicity.
inline std::vector<std::complex<double>> eigen_spectrum(const OperatorMatrix& u) {
    if (!u.matrix().allFinite())
        throw NumericError("eigen spectrum: matrix has non-finite entries");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u.matrix(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigen spectrum: dense eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

namespace detail {

inline bool complex_before(const std::complex<double>& a, const std::complex<double>& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

/// Greedy nearest-neighbor matching after sorting by (Re, Im); returns the
/// max matched distance. Deterministic, adequate at desk scale.
inline double greedy_pair_defect(std::vector<std::complex<double>> a) {
    std::vector<std::complex<double>> b(a.size());
    std::transform(a.begin(), a.end(), b.begin(), [](auto z) { return std::conj(z); });
    std::sort(a.begin(), a.end(), complex_before);
    std::sort(b.begin(), b.end(), complex_before);
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const auto& za : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t pick = 0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (used[i]) continue;
            const double d = std::abs(za - b[i]);
            if (d < best) {
                best = d;
                pick = i;
            }
        }
        used[pick] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

/// Permutation-conjugation image: (Sx*)(kappa_j) = x*(-kappa_j).
inline Eigen::VectorXcd fourier_conjugate_image(const Lattice& lat, const Eigen::VectorXcd& x) {
    Eigen::VectorXcd out(x.size());
    for (std::size_t j = 0; j < lat.size(); ++j)
        out.segment<3>(3 * static_cast<Eigen::Index>(j)) =
            x.segment<3>(3 * static_cast<Eigen::Index>(lat.negation(j))).conjugate();
    return out;
}

} // namespace detail

/// Full spectrum report for one operator order.
inline SpectrumReport analyze_operator(const OperatorMatrix& u, int n) {
    if (!u.matrix().allFinite())
        throw NumericError("spectrum analysis: matrix has non-finite entries");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u.matrix(), /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw NumericError("spectrum analysis: dense eigensolver did not converge at order " +
                           std::to_string(n));

    SpectrumReport rep;
    rep.n = n;
    const auto& ev = solver.eigenvalues();
    rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    rep.max_real_part = -std::numeric_limits<double>::infinity();
    rep.min_real_part = std::numeric_limits<double>::infinity();
    for (const auto& z : rep.eigenvalues) {
        rep.max_real_part = std::max(rep.max_real_part, z.real());
        rep.min_real_part = std::min(rep.min_real_part, z.real());
    }
    rep.conjugate_pair_defect = detail::greedy_pair_defect(rep.eigenvalues);

    const OperatorMatrix h = hermitian_part(u);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hsolver(h.matrix(),
                                                            Eigen::EigenvaluesOnly);
    rep.hermitian_extremes = {hsolver.eigenvalues().minCoeff(), hsolver.eigenvalues().maxCoeff()};
    rep.hermitian_defect = (u.matrix() - u.matrix().adjoint()).cwiseAbs().maxCoeff();
    rep.skew_defect = (u.matrix() + u.matrix().adjoint()).cwiseAbs().maxCoeff();

    const double unorm = u.matrix().norm();
    for (Eigen::Index m = 0; m < ev.size(); ++m) {
        const Eigen::VectorXcd x = solver.eigenvectors().col(m);
        if (unorm > 0.0) {
            const double res = (u.matrix() * x - ev[m] * x).norm() / unorm;
            rep.max_residual = std::max(rep.max_residual, res);
        }
        const Eigen::VectorXcd img = detail::fourier_conjugate_image(u.lattice(), x);
        const double denom = x.norm() * img.norm();
        if (denom > 0.0 && std::abs(x.dot(img)) / denom >= 1.0 - 1e-8)
            ++rep.self_conjugate_eigenvector_count;
    }
    return rep;
}

struct SweepEntry {
    SpectrumReport report;     // for U_n
    double pj_max_real_part = 0.0; // spectral abscissa of the advective part P*J_n
    double pj_max_abs_real = 0.0;  // max |Re lambda(P*J_n)|
};

/// Spectrum reports for every stored order, plus the advective part analyzed
/// separately (at n = 0 that is U_0 - D).
inline std::vector<SweepEntry> stability_sweep(const TaylorSolution& sol) {
    std::vector<SweepEntry> out;
    out.reserve(sol.order() + 1);
    const OperatorMatrix d = diffusion_matrix(sol.lattice());
    for (int n = 0; n <= sol.order(); ++n) {
        SweepEntry entry;
        entry.report = analyze_operator(sol.op(n), n);
        std::vector<std::complex<double>> pj_spectrum;
        if (n == 0) {
            OperatorMatrix pj(sol.lattice(), sol.op(0).matrix() - d.matrix());
            pj_spectrum = eigen_spectrum(pj);
        } else {
            pj_spectrum = entry.report.eigenvalues;
        }
        entry.pj_max_real_part = -std::numeric_limits<double>::infinity();
        for (const auto& z : pj_spectrum) {
            entry.pj_max_real_part = std::max(entry.pj_max_real_part, z.real());
            entry.pj_max_abs_real = std::max(entry.pj_max_abs_real, std::abs(z.real()));
        }
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace nslab
