#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "nslab/errors.hpp"
#include "nslab/io.hpp"
#include "nslab/lattice.hpp"
#include "nslab/taylor.hpp"

namespace nslab {

/// Single-file run configuration; every field has a default so an empty
/// object {} is a valid config. Unknown keys are rejected.
struct RunConfig {
    LatticeSpec lattice = LatticeSpec::with_default_spacing(2, 0.1);
    InitialConditionSpec initial{};
    int order = 4;
    bool include_nonlinear = true;

    struct Compare {
        std::vector<double> times{1.0 / 240.0, 1.0 / 120.0, 1.0 / 60.0};
        double dt = 1e-4;
        std::vector<int> truncations{2, 3, 4};
        double slope_tolerance = 0.3;
    } compare;

    struct Spectra {
        bool store_eigenvalues = true;
    } spectra;

    void validate() const {
        lattice.validate();
        if (order < 0) throw ConfigError("config: order must be >= 0");
        if (!(compare.dt > 0.0)) throw ConfigError("config: compare.dt must be positive");
        if (!(compare.slope_tolerance > 0.0))
            throw ConfigError("config: compare.slope_tolerance must be positive");
        int positive_times = 0;
        for (const double t : compare.times) {
            if (t < 0.0) throw ConfigError("config: compare.times must be nonnegative");
            if (t > 0.0) ++positive_times;
        }
        if (positive_times < 3)
            throw ConfigError("config: compare.times needs at least three positive entries "
                              "for the slope fit");
        for (const int n : compare.truncations)
            if (n < 0) throw ConfigError("config: compare.truncations must be nonnegative");
        if (initial.amplitude < 0.0)
            throw ConfigError("config: initial.amplitude must be nonnegative");
    }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                                const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!known.contains(key))
            throw ConfigError("config: unknown key \"" + key + "\" in " + where);
}

inline InitialConditionSpec::Kind initial_kind_from_string(const std::string& s) {
    if (s == "taylor-green") return InitialConditionSpec::Kind::TaylorGreen;
    if (s == "random-solenoidal") return InitialConditionSpec::Kind::RandomSolenoidal;
    if (s == "explicit") return InitialConditionSpec::Kind::Explicit;
    throw ConfigError("config: initial.kind must be one of taylor-green, random-solenoidal, "
                      "explicit; got \"" + s + "\"");
}

inline std::string initial_kind_to_string(InitialConditionSpec::Kind k) {
    switch (k) {
    case InitialConditionSpec::Kind::TaylorGreen: return "taylor-green";
    case InitialConditionSpec::Kind::RandomSolenoidal: return "random-solenoidal";
    case InitialConditionSpec::Kind::Explicit: return "explicit";
    }
    return "taylor-green";
}

} // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be a json object");
    detail::reject_unknown_keys(
        j, {"schema_version", "lattice", "initial", "order", "include_nonlinear", "compare",
            "spectra"},
        "top level");
    RunConfig cfg;
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion)
        throw ConfigError("config: unsupported schema_version");

    if (j.contains("lattice")) {
        const auto& jl = j.at("lattice");
        detail::reject_unknown_keys(jl, {"L", "dkappa", "nu"}, "lattice");
        if (jl.contains("L")) cfg.lattice.L = jl.at("L").get<int>();
        if (jl.contains("nu")) cfg.lattice.nu = jl.at("nu").get<double>();
        cfg.lattice.dkappa = jl.contains("dkappa") ? jl.at("dkappa").get<double>()
                                                   : LatticeSpec::default_spacing(cfg.lattice.L);
    }
    if (j.contains("initial")) {
        const auto& ji = j.at("initial");
        detail::reject_unknown_keys(
            ji, {"kind", "amplitude", "seed", "decay_exponent", "modes"}, "initial");
        if (ji.contains("kind"))
            cfg.initial.kind = detail::initial_kind_from_string(ji.at("kind").get<std::string>());
        if (ji.contains("amplitude")) cfg.initial.amplitude = ji.at("amplitude").get<double>();
        if (ji.contains("seed")) cfg.initial.seed = ji.at("seed").get<std::uint64_t>();
        if (ji.contains("decay_exponent"))
            cfg.initial.decay_exponent = ji.at("decay_exponent").get<double>();
        if (ji.contains("modes")) {
            for (const auto& m : ji.at("modes")) {
                detail::reject_unknown_keys(m, {"triple", "value"}, "initial.modes entry");
                const auto& t = m.at("triple");
                const auto& v = m.at("value");
                if (t.size() != 3 || v.size() != 3)
                    throw ConfigError("config: initial.modes entries need a 3-int triple and "
                                      "three [re, im] pairs");
                Triple trip{t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()};
                Eigen::Vector3cd val;
                for (int c = 0; c < 3; ++c)
                    val[c] = {v.at(c).at(0).get<double>(), v.at(c).at(1).get<double>()};
                cfg.initial.explicit_modes.emplace_back(trip, val);
            }
        }
    }
    if (j.contains("order")) cfg.order = j.at("order").get<int>();
    if (j.contains("include_nonlinear"))
        cfg.include_nonlinear = j.at("include_nonlinear").get<bool>();
    if (j.contains("compare")) {
        const auto& jc = j.at("compare");
        detail::reject_unknown_keys(jc, {"times", "dt", "truncations", "slope_tolerance"},
                                    "compare");
        if (jc.contains("times")) cfg.compare.times = jc.at("times").get<std::vector<double>>();
        if (jc.contains("dt")) cfg.compare.dt = jc.at("dt").get<double>();
        if (jc.contains("truncations"))
            cfg.compare.truncations = jc.at("truncations").get<std::vector<int>>();
        if (jc.contains("slope_tolerance"))
            cfg.compare.slope_tolerance = jc.at("slope_tolerance").get<double>();
    }
    if (j.contains("spectra")) {
        const auto& js = j.at("spectra");
        detail::reject_unknown_keys(js, {"store_eigenvalues"}, "spectra");
        if (js.contains("store_eigenvalues"))
            cfg.spectra.store_eigenvalues = js.at("store_eigenvalues").get<bool>();
    }
    cfg.validate();
    return cfg;
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json ji{{"kind", detail::initial_kind_to_string(cfg.initial.kind)},
                      {"amplitude", cfg.initial.amplitude},
                      {"seed", cfg.initial.seed},
                      {"decay_exponent", cfg.initial.decay_exponent}};
    if (!cfg.initial.explicit_modes.empty()) {
        nlohmann::json modes = nlohmann::json::array();
        for (const auto& [t, v] : cfg.initial.explicit_modes)
            modes.push_back(
                {{"triple", {t[0], t[1], t[2]}},
                 {"value",
                  {{v[0].real(), v[0].imag()}, {v[1].real(), v[1].imag()},
                   {v[2].real(), v[2].imag()}}}});
        ji["modes"] = std::move(modes);
    }
    return {{"schema_version", kSchemaVersion},
            {"lattice", lattice_to_json(cfg.lattice)},
            {"initial", std::move(ji)},
            {"order", cfg.order},
            {"include_nonlinear", cfg.include_nonlinear},
            {"compare",
             {{"times", cfg.compare.times},
              {"dt", cfg.compare.dt},
              {"truncations", cfg.compare.truncations},
              {"slope_tolerance", cfg.compare.slope_tolerance}}},
            {"spectra", {{"store_eigenvalues", cfg.spectra.store_eigenvalues}}}};
}

} // namespace nslab
