#pragma once

#include <algorithm>
#include <cctype>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "nslab/errors.hpp"

namespace nslab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// A word over the abstract generators U_0, U_1, ...: the letter sequence
/// (g1, g2, ...) stands for the left-to-right product U_g1 * U_g2 * ...
/// applied to a column vector on the right. The empty word is the identity.
struct Word {
    std::vector<std::uint32_t> letters;

    /// Graded weight: each letter g contributes g + 1, so the weight tracks
    /// the power of t the word carries in the time series. Additive under
    /// concatenation.
    std::size_t weight() const {
        std::size_t w = 0;
        for (const auto g : letters) w += g + 1;
        return w;
    }

    std::size_t length() const { return letters.size(); }
    bool empty() const { return letters.empty(); }

    Word concat(const Word& other) const {
        Word out{letters};
        out.letters.insert(out.letters.end(), other.letters.begin(), other.letters.end());
        return out;
    }

    friend bool operator==(const Word& a, const Word& b) = default;
};

/// Canonical term order: graded weight ascending, then lexicographically
/// descending letters within a weight (so U1*U0 prints before U0*U1).
struct WordOrder {
    bool operator()(const Word& a, const Word& b) const {
        const std::size_t wa = a.weight();
        const std::size_t wb = b.weight();
        if (wa != wb) return wa < wb;
        return std::lexicographical_compare(b.letters.begin(), b.letters.end(),
                                            a.letters.begin(), a.letters.end());
    }
};

/// Exact-rational linear combination of words; canonical form (no zero
/// coefficients, deterministic term order) is maintained after every
/// operation. Immutable value semantics; all arithmetic is exact.
class NcPolynomial {
public:
    using TermMap = std::map<Word, Rational, WordOrder>;

    NcPolynomial() = default;

    static NcPolynomial zero() { return NcPolynomial(); }

    static NcPolynomial identity() { return term(Word{}, 1); }

    static NcPolynomial generator(std::uint32_t g) { return term(Word{{g}}, 1); }

    static NcPolynomial term(Word w, Rational c) {
        NcPolynomial p;
        if (c != 0) p.terms_.emplace(std::move(w), std::move(c));
        return p;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    Rational coefficient(const Word& w) const {
        const auto it = terms_.find(w);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const Word& w, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    NcPolynomial& operator+=(const NcPolynomial& other) {
        for (const auto& [w, c] : other.terms_) add_term(w, c);
        return *this;
    }
    NcPolynomial& operator-=(const NcPolynomial& other) {
        for (const auto& [w, c] : other.terms_) add_term(w, -c);
        return *this;
    }
    NcPolynomial& operator*=(const Rational& s) {
        if (s == 0) { terms_.clear(); return *this; }
        for (auto& [w, c] : terms_) c *= s;
        return *this;
    }

    friend NcPolynomial operator+(NcPolynomial a, const NcPolynomial& b) { return a += b; }
    friend NcPolynomial operator-(NcPolynomial a, const NcPolynomial& b) { return a -= b; }
    friend NcPolynomial operator*(NcPolynomial a, const Rational& s) { return a *= s; }
    friend NcPolynomial operator*(const Rational& s, NcPolynomial a) { return a *= s; }

    /// Bilinear extension of word concatenation (noncommutative product).
    friend NcPolynomial operator*(const NcPolynomial& a, const NcPolynomial& b) {
        NcPolynomial out;
        for (const auto& [wa, ca] : a.terms_)
            for (const auto& [wb, cb] : b.terms_) out.add_term(wa.concat(wb), ca * cb);
        return out;
    }

    /// Product with all words of weight above max_weight discarded.
    NcPolynomial multiply_truncated(const NcPolynomial& b, std::size_t max_weight) const {
        NcPolynomial out;
        for (const auto& [wa, ca] : terms_) {
            const std::size_t wwa = wa.weight();
            if (wwa > max_weight) continue;
            for (const auto& [wb, cb] : b.terms_) {
                if (wwa + wb.weight() > max_weight) continue;
                out.add_term(wa.concat(wb), ca * cb);
            }
        }
        return out;
    }

    /// Homogeneous part of graded weight n.
    NcPolynomial graded_part(std::size_t n) const {
        NcPolynomial out;
        for (const auto& [w, c] : terms_)
            if (w.weight() == n) out.terms_.emplace(w, c);
        return out;
    }

    friend bool operator==(const NcPolynomial& a, const NcPolynomial& b) = default;

private:
    TermMap terms_;
};

inline std::size_t term_count(const NcPolynomial& p) { return p.term_count(); }

/// Sum of all stored coefficients: the image of p under "every generator
/// maps to the scalar 1". Exact.
inline Rational coefficient_sum(const NcPolynomial& p) {
    Rational s = 0;
    for (const auto& [w, c] : p.terms()) s += c;
    return s;
}

/// Polynomials of the recursion u_n = (1/n) sum_p U_p u_{n-1-p}, expanded
/// over noncommuting generators. Returned vector holds index n -> S_n with
/// S_0 = identity; every word of S_n has graded weight exactly n and the
/// term count is 2^(n-1).
inline std::vector<NcPolynomial> recursion_polynomials(int order) {
    if (order < 0) throw std::invalid_argument("recursion polynomials: order must be >= 0");
    std::vector<NcPolynomial> s;
    s.reserve(order + 1);
    s.push_back(NcPolynomial::identity());
    for (int n = 1; n <= order; ++n) {
        NcPolynomial acc;
        for (int p = 0; p < n; ++p)
            acc += NcPolynomial::generator(static_cast<std::uint32_t>(p)) * s[n - 1 - p];
        acc *= Rational(1, n);
        s.push_back(std::move(acc));
    }
    return s;
}

/// Taylor coefficients of the ordered product of matrix exponentials
/// prod_{g>=0} exp(U_g t^(g+1) / (g+1)), with the g = 0 factor leftmost.
/// Truncation is by graded weight, so B_n collects exactly the weight-n
/// words. Returned vector holds index n -> B_n with B_0 = identity.
inline std::vector<NcPolynomial> exponential_product_polynomials(int order) {
    if (order < 0)
        throw std::invalid_argument("exponential product polynomials: order must be >= 0");
    const auto max_weight = static_cast<std::size_t>(order);
    NcPolynomial prod = NcPolynomial::identity();
    for (std::uint32_t g = 0; g + 1 <= max_weight; ++g) {
        // exp(U_g/(g+1) t^(g+1)) expanded to the needed weight
        NcPolynomial factor = NcPolynomial::identity();
        Word w;
        BigInt pfact = 1;
        BigInt gpow = 1;
        for (std::size_t p = 1; p * (g + 1) <= max_weight; ++p) {
            w.letters.push_back(g);
            pfact *= static_cast<unsigned>(p);
            gpow *= (g + 1);
            factor.add_term(w, Rational(1, pfact * gpow));
        }
        prod = prod.multiply_truncated(factor, max_weight);
    }
    std::vector<NcPolynomial> b;
    b.reserve(order + 1);
    for (int n = 0; n <= order; ++n) b.push_back(prod.graded_part(static_cast<std::size_t>(n)));
    return b;
}

/// S_n - B_n for n = 0..order. The coefficients of each difference sum to
/// zero exactly, and the difference vanishes under commuting substitution.
inline std::vector<NcPolynomial> difference_polynomials(int order) {
    std::vector<NcPolynomial> s = recursion_polynomials(order);
    const std::vector<NcPolynomial> b = exponential_product_polynomials(order);
    for (std::size_t n = 0; n < s.size(); ++n) s[n] -= b[n];
    return s;
}

/// Substitutes concrete matrices for the generators and applies the result
/// to v using matrix-vector products only, words evaluated right to left.
/// Summation follows the canonical term order so the floating-point result
/// is reproducible.
inline Eigen::VectorXcd evaluate_words(const NcPolynomial& p,
                                       std::span<const Eigen::MatrixXcd> generators,
                                       const Eigen::VectorXcd& v) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(v.size());
    for (const auto& [w, c] : p.terms()) {
        Eigen::VectorXcd cur = v;
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
            if (*it >= generators.size())
                throw std::invalid_argument("evaluate words: no matrix supplied for generator U" +
                                            std::to_string(*it));
            if (generators[*it].cols() != cur.size())
                throw std::invalid_argument("evaluate words: dimension mismatch at generator U" +
                                            std::to_string(*it));
            cur = generators[*it] * cur;
        }
        acc += c.convert_to<double>() * cur;
    }
    return acc;
}

/// Canonical text form: terms in canonical order, each `num[/den]*U<g>*...`,
/// joined by ` + ` / ` - `; the identity word prints as a bare rational and
/// the zero polynomial as `0`. Losslessly parseable by parse_polynomial.
inline std::string format_polynomial(const NcPolynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : p.terms()) {
        const bool negative = c < 0;
        if (first) {
            if (negative) out += "-";
            first = false;
        } else {
            out += negative ? " - " : " + ";
        }
        const Rational mag = negative ? Rational(-c) : c;
        out += numerator(mag).str();
        if (denominator(mag) != 1) out += "/" + denominator(mag).str();
        for (const auto g : w.letters) out += "*U" + std::to_string(g);
    }
    return out;
}

inline NcPolynomial parse_polynomial(std::string_view text) {
    std::string compact;
    compact.reserve(text.size());
    for (const char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
    if (compact.empty()) throw std::invalid_argument("parse polynomial: empty input");
    if (compact == "0") return NcPolynomial::zero();

    NcPolynomial out;
    std::size_t pos = 0;
    const auto digits = [&](const char* what) {
        const std::size_t start = pos;
        while (pos < compact.size() && std::isdigit(static_cast<unsigned char>(compact[pos]))) ++pos;
        if (pos == start)
            throw std::invalid_argument(std::string("parse polynomial: expected ") + what +
                                        " at offset " + std::to_string(start));
        return compact.substr(start, pos - start);
    };

    while (pos < compact.size()) {
        int sign = 1;
        if (compact[pos] == '+' || compact[pos] == '-') {
            sign = compact[pos] == '-' ? -1 : 1;
            ++pos;
        }
        const BigInt num(digits("numerator"));
        BigInt den = 1;
        if (pos < compact.size() && compact[pos] == '/') {
            ++pos;
            den = BigInt(digits("denominator"));
            if (den == 0) throw std::invalid_argument("parse polynomial: zero denominator");
        }
        Word w;
        while (pos < compact.size() && compact[pos] == '*') {
            ++pos;
            if (pos >= compact.size() || compact[pos] != 'U')
                throw std::invalid_argument("parse polynomial: expected generator after '*'");
            ++pos;
            w.letters.push_back(static_cast<std::uint32_t>(std::stoul(digits("generator index"))));
        }
        out.add_term(w, Rational(sign * num, den));
    }
    return out;
}

} // namespace nslab
