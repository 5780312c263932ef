#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nslab/errors.hpp"

namespace nslab {

using Triple = std::array<int, 3>;

/// Parameters of the discrete wavenumber lattice: modes per axis span
/// -L/2..L/2, wavenumber spacing dkappa, viscosity nu.
struct LatticeSpec {
    int L = 2;
    double dkappa = std::numbers::pi; // 2*pi/L for L = 2
    double nu = 0.1;

    static double default_spacing(int L) { return 2.0 * std::numbers::pi / L; }

    static LatticeSpec with_default_spacing(int L, double nu) {
        return LatticeSpec{L, default_spacing(L), nu};
    }

    void validate() const {
        if (L < 2 || L % 2 != 0)
            throw ConfigError("lattice: L must be an even integer >= 2, got " + std::to_string(L));
        if (!(dkappa > 0.0))
            throw ConfigError("lattice: dkappa must be positive, got " + std::to_string(dkappa));
        if (!(nu > 0.0))
            throw ConfigError("lattice: nu must be positive, got " + std::to_string(nu));
    }

    friend bool operator==(const LatticeSpec& a, const LatticeSpec& b) = default;
};

/// Bijection between flat 0-based indices and the (L+1)^3 integer triples
/// (l1,l2,l3) in {-L/2..L/2}^3, ordered lexicographically with l1 slowest.
/// Immutable after construction; safe for concurrent reads.
class Lattice {
public:
    explicit Lattice(LatticeSpec spec) : spec_(spec) {
        spec_.validate();
        side_ = spec_.L + 1;
        size_ = static_cast<std::size_t>(side_) * side_ * side_;
        negation_.resize(size_);
        for (std::size_t j = 0; j < size_; ++j) {
            const Triple t = triple(j);
            negation_[j] = index_of({-t[0], -t[1], -t[2]});
        }
    }

    const LatticeSpec& spec() const { return spec_; }
    int modes_per_axis() const { return spec_.L; }
    double spacing() const { return spec_.dkappa; }
    double viscosity() const { return spec_.nu; }

    /// M = (L+1)^3
    std::size_t size() const { return size_; }

    Triple triple(std::size_t j) const {
        check_index(j);
        const int half = spec_.L / 2;
        const int s = side_;
        const int l3 = static_cast<int>(j % s) - half;
        const int l2 = static_cast<int>((j / s) % s) - half;
        const int l1 = static_cast<int>(j / (s * s)) - half;
        return {l1, l2, l3};
    }

    /// kappa_j = (l1, l2, l3) * dkappa
    Eigen::Vector3d wavenumber(std::size_t j) const {
        const Triple t = triple(j);
        return spec_.dkappa * Eigen::Vector3d(t[0], t[1], t[2]);
    }

    double kappa_squared(std::size_t j) const {
        const Triple t = triple(j);
        const double n2 = static_cast<double>(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
        return spec_.dkappa * spec_.dkappa * n2;
    }

    double max_kappa_squared() const {
        const double h = spec_.L / 2;
        return 3.0 * h * h * spec_.dkappa * spec_.dkappa;
    }

    bool contains(const Triple& t) const {
        const int half = spec_.L / 2;
        return t[0] >= -half && t[0] <= half && t[1] >= -half && t[1] <= half &&
               t[2] >= -half && t[2] <= half;
    }

    std::size_t index_of(const Triple& t) const {
        if (!contains(t))
            throw std::out_of_range("lattice: triple (" + std::to_string(t[0]) + "," +
                                    std::to_string(t[1]) + "," + std::to_string(t[2]) +
                                    ") outside -L/2..L/2");
        const int half = spec_.L / 2;
        return (static_cast<std::size_t>(t[0] + half) * side_ + (t[1] + half)) * side_ +
               (t[2] + half);
    }

    std::optional<std::size_t> try_index_of(const Triple& t) const {
        if (!contains(t)) return std::nullopt;
        return index_of(t);
    }

    /// Index of triple_j - triple_k, absent when the difference leaves the
    /// lattice (Galerkin truncation).
    std::optional<std::size_t> shift(std::size_t j, std::size_t k) const {
        const Triple a = triple(j);
        const Triple b = triple(k);
        return try_index_of({a[0] - b[0], a[1] - b[1], a[2] - b[2]});
    }

    /// Index of -triple_j; always present, involutive.
    std::size_t negation(std::size_t j) const {
        check_index(j);
        return negation_[j];
    }

    std::size_t zero_index() const { return index_of({0, 0, 0}); }

private:
    void check_index(std::size_t j) const {
        if (j >= size_) throw std::out_of_range("lattice: index " + std::to_string(j));
    }

    LatticeSpec spec_;
    int side_ = 0;
    std::size_t size_ = 0;
    std::vector<std::size_t> negation_;
};

inline bool same_lattice(const Lattice& a, const Lattice& b) {
    return &a == &b || a.spec() == b.spec();
}

} // namespace nslab
