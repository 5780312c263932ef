#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "nslab/errors.hpp"
#include "nslab/refint.hpp"
#include "nslab/spectra.hpp"
#include "nslab/taylor.hpp"

namespace nslab {

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline nlohmann::json complex_pair(const std::complex<double>& z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

} // namespace detail

inline nlohmann::json lattice_to_json(const LatticeSpec& spec) {
    return {{"L", spec.L}, {"dkappa", spec.dkappa}, {"nu", spec.nu}};
}

inline LatticeSpec lattice_from_json(const nlohmann::json& j) {
    LatticeSpec spec;
    spec.L = j.at("L").get<int>();
    spec.dkappa = j.at("dkappa").get<double>();
    spec.nu = j.at("nu").get<double>();
    return spec;
}

/// Documented solution layout: lattice spec, order, include_nonlinear flag,
/// and per-order coefficient arrays as M entries of three [re, im] pairs.
inline nlohmann::json solution_to_json(const TaylorSolution& sol) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int n = 0; n <= sol.order(); ++n) {
        nlohmann::json field = nlohmann::json::array();
        for (std::size_t j = 0; j < sol.lattice().size(); ++j) {
            const Eigen::Vector3cd v = sol.field(n).mode(j);
            field.push_back(nlohmann::json::array(
                {detail::complex_pair(v[0]), detail::complex_pair(v[1]),
                 detail::complex_pair(v[2])}));
        }
        coeffs.push_back(std::move(field));
    }
    return {{"schema_version", kSchemaVersion},
            {"kind", "taylor_solution"},
            {"lattice", lattice_to_json(sol.lattice().spec())},
            {"order", sol.order()},
            {"include_nonlinear", sol.options().include_nonlinear},
            {"coefficients", std::move(coeffs)}};
}

/// A deserialized solution bundled with the lattice it lives on.
struct LoadedSolution {
    std::unique_ptr<Lattice> lattice;
    std::unique_ptr<TaylorSolution> solution;
};

/// Rebuilds a solution from its JSON layout; operators are regenerated from
/// the stored coefficient fields.
inline LoadedSolution solution_from_json(const nlohmann::json& j) {
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion)
        throw ConfigError("solution json: unsupported schema_version");
    if (j.at("kind").get<std::string>() != "taylor_solution")
        throw ConfigError("solution json: unexpected kind");
    const LatticeSpec spec = lattice_from_json(j.at("lattice"));
    auto lattice = std::make_unique<Lattice>(spec);

    const int order = j.at("order").get<int>();
    SolveOptions options{j.at("include_nonlinear").get<bool>()};
    const auto& coeffs = j.at("coefficients");
    if (static_cast<int>(coeffs.size()) != order + 1)
        throw ConfigError("solution json: coefficient count does not match order");

    std::vector<SpectralField> fields;
    std::vector<OperatorMatrix> ops;
    for (int n = 0; n <= order; ++n) {
        SpectralField f(*lattice);
        const auto& modes = coeffs.at(n);
        if (modes.size() != lattice->size())
            throw ConfigError("solution json: mode count does not match lattice");
        for (std::size_t m = 0; m < lattice->size(); ++m) {
            Eigen::Vector3cd v;
            for (int c = 0; c < 3; ++c) {
                const auto& pair = modes.at(m).at(c);
                v[c] = {pair.at(0).get<double>(), pair.at(1).get<double>()};
            }
            f.set_mode(m, v);
        }
        ops.push_back(options.include_nonlinear
                          ? evolution_matrix(*lattice, n, f)
                          : (n == 0 ? diffusion_matrix(*lattice) : OperatorMatrix::zero(*lattice)));
        fields.push_back(std::move(f));
    }
    LoadedSolution out;
    out.solution = std::make_unique<TaylorSolution>(*lattice, std::move(fields), std::move(ops),
                                                    options);
    out.lattice = std::move(lattice);
    return out;
}

inline nlohmann::json report_to_json(const SpectrumReport& rep, bool include_eigenvalues = true) {
    nlohmann::json j{{"n", rep.n},
                     {"max_real_part", rep.max_real_part},
                     {"min_real_part", rep.min_real_part},
                     {"conjugate_pair_defect", rep.conjugate_pair_defect},
                     {"hermitian_extremes",
                      nlohmann::json::array({rep.hermitian_extremes.first,
                                             rep.hermitian_extremes.second})},
                     {"defects",
                      {{"hermitian", rep.hermitian_defect},
                       {"skew", rep.skew_defect},
                       {"eigensolver_residual", rep.max_residual}}},
                     {"self_conjugate_eigenvectors", rep.self_conjugate_eigenvector_count}};
    if (include_eigenvalues) {
        nlohmann::json ev = nlohmann::json::array();
        for (const auto& z : rep.eigenvalues) ev.push_back(detail::complex_pair(z));
        j["eigenvalues"] = std::move(ev);
    }
    return j;
}

inline std::string norms_to_csv(const std::vector<CoefficientNorm>& rows) {
    std::string out = "n,norm,radius_estimate\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + "," + detail::fmt_double(r.norm) + ",";
        if (r.radius_estimate) out += detail::fmt_double(*r.radius_estimate);
        out += "\n";
    }
    return out;
}

inline nlohmann::json norms_to_json(const std::vector<CoefficientNorm>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row{{"n", r.n}, {"norm", r.norm}};
        if (r.radius_estimate)
            row["radius_estimate"] = *r.radius_estimate;
        else
            row["radius_estimate"] = nullptr;
        arr.push_back(std::move(row));
    }
    return {{"schema_version", kSchemaVersion}, {"rows", std::move(arr)}};
}

/// Trajectory CSV: one row per (time, mode), re/im per velocity component.
inline std::string trajectory_to_csv(const std::vector<TrajectoryPoint>& traj) {
    std::string out = "t,l1,l2,l3,re_u1,im_u1,re_u2,im_u2,re_u3,im_u3\n";
    for (const auto& pt : traj) {
        const Lattice& lat = pt.u.lattice();
        for (std::size_t j = 0; j < lat.size(); ++j) {
            const Triple trip = lat.triple(j);
            const Eigen::Vector3cd v = pt.u.mode(j);
            out += detail::fmt_double(pt.t);
            for (const int c : trip) out += "," + std::to_string(c);
            for (int c = 0; c < 3; ++c)
                out += "," + detail::fmt_double(v[c].real()) + "," +
                       detail::fmt_double(v[c].imag());
            out += "\n";
        }
    }
    return out;
}

inline std::string compare_rows_to_csv(const CompareResult& res) {
    std::string out = "t,truncation,rel_error\n";
    for (const auto& r : res.rows)
        out += detail::fmt_double(r.t) + "," + std::to_string(r.truncation) + "," +
               detail::fmt_double(r.rel_error) + "\n";
    return out;
}

inline std::string slopes_to_csv(const CompareResult& res) {
    std::string out = "truncation,slope\n";
    for (const auto& s : res.slopes)
        out += std::to_string(s.truncation) + "," + detail::fmt_double(s.slope) + "\n";
    return out;
}

inline nlohmann::json compare_to_json(const CompareResult& res) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : res.rows)
        rows.push_back({{"t", r.t}, {"truncation", r.truncation}, {"rel_error", r.rel_error}});
    nlohmann::json slopes = nlohmann::json::array();
    for (const auto& s : res.slopes)
        slopes.push_back({{"truncation", s.truncation}, {"slope", s.slope}});
    return {{"schema_version", kSchemaVersion},
            {"rows", std::move(rows)},
            {"slopes", std::move(slopes)}};
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("invalid json in " + path.string() + ": " + e.what());
    }
}

} // namespace nslab
