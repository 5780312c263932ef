#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "nslab/config.hpp"
#include "nslab/io.hpp"
#include "nslab/ncalg.hpp"
#include "nslab/refint.hpp"
#include "nslab/spectra.hpp"
#include "nslab/taylor.hpp"

namespace nslab {

// Process exit codes, one per failure class.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNumeric = 4;
inline constexpr int kExitIo = 5;

struct OutputOptions {
    std::filesystem::path out_dir = "out";
    std::string format = "json"; // json | csv for summary tables

    void validate() const {
        if (format != "json" && format != "csv")
            throw ConfigError("output format must be json or csv, got \"" + format + "\"");
    }

    std::filesystem::path prepare() const {
        validate();
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create output directory " + out_dir.string());
        return out_dir;
    }
};

namespace detail {

inline std::string exact_rational_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

} // namespace detail

/// Writes the recursion, exponential-product and difference polynomials up
/// to the requested order plus a term-count / coefficient-sum summary.
/// Exits zero only when every difference coefficient sum is exactly zero.
inline int cmd_symbolic(int order, const OutputOptions& out) {
    if (order < 1) throw ConfigError("symbolic: order must be >= 1");
    const auto dir = out.prepare();

    const auto s = recursion_polynomials(order);
    const auto b = exponential_product_polynomials(order);
    const auto d = difference_polynomials(order);

    const auto dump = [&](const char* name, const std::vector<NcPolynomial>& polys) {
        std::string text;
        for (int n = 1; n <= order; ++n)
            text += std::string(name) + "_" + std::to_string(n) + " = " +
                    format_polynomial(polys[static_cast<std::size_t>(n)]) + "\n";
        write_text_file(dir / (std::string(name) + ".txt"), text);
    };
    dump("S", s);
    dump("B", b);
    dump("D", d);

    bool all_zero = true;
    if (out.format == "csv") {
        std::string csv = "n,s_terms,b_terms,d_coefficient_sum\n";
        for (int n = 1; n <= order; ++n) {
            const Rational sum = coefficient_sum(d[static_cast<std::size_t>(n)]);
            all_zero = all_zero && sum == 0;
            csv += std::to_string(n) + "," + std::to_string(term_count(s[n])) + "," +
                   std::to_string(term_count(b[n])) + "," + detail::exact_rational_string(sum) +
                   "\n";
        }
        write_text_file(dir / "summary.csv", csv);
    } else {
        nlohmann::json rows = nlohmann::json::array();
        for (int n = 1; n <= order; ++n) {
            const Rational sum = coefficient_sum(d[static_cast<std::size_t>(n)]);
            all_zero = all_zero && sum == 0;
            rows.push_back({{"n", n},
                            {"s_terms", term_count(s[n])},
                            {"b_terms", term_count(b[n])},
                            {"d_coefficient_sum", detail::exact_rational_string(sum)}});
        }
        write_json_file(dir / "summary.json",
                        {{"schema_version", kSchemaVersion}, {"rows", std::move(rows)}});
    }

    std::cout << "symbolic: wrote S.txt B.txt D.txt and summary to " << dir.string() << "\n";
    std::cout << "symbolic: difference coefficient sums all zero: " << (all_zero ? "yes" : "NO")
              << "\n";
    return all_zero ? kExitOk : kExitNumeric;
}

/// Runs the full coefficient recursion and writes the solution plus
/// per-order norms.
inline int cmd_solve(const RunConfig& cfg, const OutputOptions& out) {
    const auto dir = out.prepare();
    const Lattice lattice(cfg.lattice);
    const SpectralField u0 = make_initial(lattice, cfg.initial);
    const TaylorSolution sol = solve_coefficients(u0, cfg.order, {cfg.include_nonlinear});

    write_json_file(dir / "solution.json", solution_to_json(sol));
    const auto norms = coefficient_norms(sol);
    if (out.format == "csv")
        write_text_file(dir / "norms.csv", norms_to_csv(norms));
    else
        write_json_file(dir / "norms.json", norms_to_json(norms));

    std::cout << "solve: order " << cfg.order << " on M = " << lattice.size()
              << " modes; wrote solution and norms to " << dir.string() << "\n";
    for (const auto& row : norms)
        std::cout << "  n=" << row.n << " ||u_n|| = " << row.norm
                  << (row.radius_estimate
                          ? ", radius estimate " + std::to_string(*row.radius_estimate)
                          : "")
                  << "\n";
    return kExitOk;
}

/// Eigenvalue sweep over all solved orders with hypothesis-style reporting:
/// the advective spectral abscissa is published, never asserted.
inline int cmd_spectra(const RunConfig& cfg, const OutputOptions& out) {
    const auto dir = out.prepare();
    const Lattice lattice(cfg.lattice);
    const SpectralField u0 = make_initial(lattice, cfg.initial);
    const TaylorSolution sol = solve_coefficients(u0, cfg.order, {cfg.include_nonlinear});
    const auto sweep = stability_sweep(sol);

    // eigensolver cross-check: the diffusion spectrum is known in closed form
    const OperatorMatrix d = diffusion_matrix(lattice);
    auto computed = eigen_spectrum(d);
    std::vector<double> analytic;
    analytic.reserve(computed.size());
    for (std::size_t j = 0; j < lattice.size(); ++j)
        for (int c = 0; c < 3; ++c) analytic.push_back(-lattice.viscosity() * lattice.kappa_squared(j));
    std::sort(analytic.begin(), analytic.end());
    std::sort(computed.begin(), computed.end(),
              [](auto a, auto b) { return a.real() < b.real(); });
    double d_check = 0.0;
    const double d_scale = std::max(1.0, lattice.viscosity() * lattice.max_kappa_squared());
    for (std::size_t i = 0; i < computed.size(); ++i)
        d_check = std::max(d_check, std::abs(computed[i] - analytic[i]) / d_scale);
    const bool d_ok = d_check <= 1e-10;

    nlohmann::json summary_rows = nlohmann::json::array();
    std::string csv = "n,max_real_part,pj_max_real_part,pj_max_abs_real,conjugate_pair_defect,"
                      "hermitian_min,hermitian_max,self_conjugate_eigenvectors\n";
    for (const auto& entry : sweep) {
        const auto& rep = entry.report;
        write_json_file(dir / ("spectrum_" + std::to_string(rep.n) + ".json"),
                        report_to_json(rep, cfg.spectra.store_eigenvalues));
        std::cout << "order " << rep.n << ": max|Re lambda(PJ_" << rep.n
                  << ")| = " << entry.pj_max_abs_real
                  << ", conjugate pair defect = " << rep.conjugate_pair_defect << "\n";
        summary_rows.push_back({{"n", rep.n},
                                {"max_real_part", rep.max_real_part},
                                {"pj_max_real_part", entry.pj_max_real_part},
                                {"pj_max_abs_real", entry.pj_max_abs_real},
                                {"conjugate_pair_defect", rep.conjugate_pair_defect},
                                {"hermitian_extremes",
                                 {rep.hermitian_extremes.first, rep.hermitian_extremes.second}},
                                {"self_conjugate_eigenvectors",
                                 rep.self_conjugate_eigenvector_count}});
        csv += std::to_string(rep.n) + "," + detail::fmt_double(rep.max_real_part) + "," +
               detail::fmt_double(entry.pj_max_real_part) + "," +
               detail::fmt_double(entry.pj_max_abs_real) + "," +
               detail::fmt_double(rep.conjugate_pair_defect) + "," +
               detail::fmt_double(rep.hermitian_extremes.first) + "," +
               detail::fmt_double(rep.hermitian_extremes.second) + "," +
               std::to_string(rep.self_conjugate_eigenvector_count) + "\n";
    }
    if (out.format == "csv") {
        write_text_file(dir / "spectra_summary.csv", csv);
        write_text_file(dir / "diffusion_check.csv",
                        "max_rel_error,pass\n" + detail::fmt_double(d_check) + "," +
                            (d_ok ? "1" : "0") + "\n");
    } else {
        write_json_file(dir / "spectra_summary.json",
                        {{"schema_version", kSchemaVersion},
                         {"diffusion_spectrum_check",
                          {{"max_rel_error", d_check}, {"pass", d_ok}}},
                         {"rows", std::move(summary_rows)}});
    }
    std::cout << "spectra: diffusion-spectrum cross-check max rel error = " << d_check
              << (d_ok ? " (ok)" : " (FAILED)") << "\n";
    std::cout << "spectra: wrote per-order reports to " << dir.string() << "\n";
    return d_ok ? kExitOk : kExitNumeric;
}

/// Series-vs-integrator error table with slope fits; exits zero only when
/// every fitted slope is within the configured tolerance of truncation + 1.
inline int cmd_compare(const RunConfig& cfg, const OutputOptions& out) {
    for (const int n : cfg.compare.truncations)
        if (n > cfg.order)
            throw ConfigError("compare: truncation " + std::to_string(n) +
                              " exceeds the solved order " + std::to_string(cfg.order));
    const auto dir = out.prepare();
    const Lattice lattice(cfg.lattice);
    const SpectralField u0 = make_initial(lattice, cfg.initial);
    const TaylorSolution sol = solve_coefficients(u0, cfg.order, {cfg.include_nonlinear});

    IntegratorConfig icfg;
    icfg.dt = cfg.compare.dt;
    icfg.steps = 1; // per-time step counts are derived from the horizon
    icfg.include_nonlinear = cfg.include_nonlinear;
    const CompareResult res =
        compare_taylor_vs_reference(sol, icfg, cfg.compare.times, cfg.compare.truncations);

    if (out.format == "csv") {
        write_text_file(dir / "errors.csv", compare_rows_to_csv(res));
        write_text_file(dir / "slopes.csv", slopes_to_csv(res));
    } else {
        write_json_file(dir / "compare.json", compare_to_json(res));
    }

    bool ok = true;
    for (const auto& fit : res.slopes) {
        const double expected = fit.truncation + 1;
        const bool within = std::abs(fit.slope - expected) <= cfg.compare.slope_tolerance;
        ok = ok && within;
        std::cout << "truncation " << fit.truncation << ": slope " << fit.slope << " (expected "
                  << expected << " +- " << cfg.compare.slope_tolerance << ")"
                  << (within ? "" : " OUT OF TOLERANCE") << "\n";
    }
    std::cout << "compare: wrote error table to " << dir.string() << "\n";
    return ok ? kExitOk : kExitNumeric;
}

/// Prints lattice bookkeeping: mode count, spacing, the |kappa|^2 shells and
/// a suggested integrator step bound.
inline int cmd_lattice_info(const RunConfig& cfg, const OutputOptions& out) {
    const auto dir = out.prepare();
    const Lattice lattice(cfg.lattice);

    std::map<long, int> shells; // squared integer norm -> triple count
    for (std::size_t j = 0; j < lattice.size(); ++j) {
        const Triple t = lattice.triple(j);
        shells[t[0] * t[0] + t[1] * t[1] + t[2] * t[2]] += 1;
    }

    const double k2max = lattice.max_kappa_squared();
    const double dt_bound = 0.1 / (lattice.viscosity() * k2max);
    std::cout << "lattice: L = " << lattice.modes_per_axis() << ", M = " << lattice.size()
              << ", dkappa = " << lattice.spacing() << ", nu = " << lattice.viscosity() << "\n";
    std::cout << "kappa^2 max = " << k2max << "; suggested rk4 dt <= " << dt_bound
              << " (keeps nu*kappa^2*dt <= 0.1)\n";
    nlohmann::json jshells = nlohmann::json::array();
    for (const auto& [n2, count] : shells) {
        std::cout << "  |l|^2 = " << n2 << ": " << count << " triples, kappa^2 = "
                  << n2 * lattice.spacing() * lattice.spacing() << "\n";
        jshells.push_back({{"integer_norm_squared", n2},
                           {"kappa_squared", n2 * lattice.spacing() * lattice.spacing()},
                           {"triples", count}});
    }
    write_json_file(dir / "lattice.json", {{"schema_version", kSchemaVersion},
                                           {"L", lattice.modes_per_axis()},
                                           {"M", lattice.size()},
                                           {"dkappa", lattice.spacing()},
                                           {"nu", lattice.viscosity()},
                                           {"kappa_squared_max", k2max},
                                           {"suggested_dt_max", dt_bound},
                                           {"shells", std::move(jshells)}});
    return kExitOk;
}

} // namespace nslab
