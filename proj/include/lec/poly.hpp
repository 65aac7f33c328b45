#pragma once

// poly.hpp: sparse multivariate polynomials with exact rational coefficients
// in the fixed variable set z0..z6 (z0 = initial block, z1..z5 = gate
// parameters, z6 = penultimate block).

#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>

#include <gmpxx.h>

#include "errors.hpp"
#include "numtheory.hpp"

namespace lec {

inline constexpr int kPolyVars = 7;

using Monomial = std::array<uint8_t, kPolyVars>;

struct MultiPoly {
    // canonical: no zero coefficients; map keeps terms sorted.
    std::map<Monomial, Rat> terms;

    static MultiPoly constant(const Rat& c) {
        MultiPoly p;
        if (c != 0) p.terms[Monomial{}] = c;
        return p;
    }

    static MultiPoly variable(int i) {
        if (i < 0 || i >= kPolyVars) throw precondition_error("MultiPoly::variable: index out of range");
        MultiPoly p;
        Monomial m{};
        m[static_cast<size_t>(i)] = 1;
        p.terms[m] = 1;
        return p;
    }

    bool is_zero() const { return terms.empty(); }

    bool operator==(const MultiPoly& o) const { return terms == o.terms; }

    MultiPoly& operator+=(const MultiPoly& o) {
        for (const auto& [m, c] : o.terms) {
            Rat& slot = terms[m];
            slot += c;
            if (slot == 0) terms.erase(m);
        }
        return *this;
    }

    MultiPoly operator+(const MultiPoly& o) const {
        MultiPoly r = *this;
        r += o;
        return r;
    }

    MultiPoly operator-() const {
        MultiPoly r;
        for (const auto& [m, c] : terms) r.terms[m] = -c;
        return r;
    }

    MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }
    MultiPoly& operator-=(const MultiPoly& o) { return *this += -o; }

    MultiPoly operator*(const MultiPoly& o) const {
        MultiPoly r;
        for (const auto& [m1, c1] : terms)
            for (const auto& [m2, c2] : o.terms) {
                Monomial m{};
                for (int i = 0; i < kPolyVars; ++i) {
                    int e = m1[static_cast<size_t>(i)] + m2[static_cast<size_t>(i)];
                    if (e > 255) throw precondition_error("MultiPoly: exponent overflow");
                    m[static_cast<size_t>(i)] = static_cast<uint8_t>(e);
                }
                Rat& slot = r.terms[m];
                slot += c1 * c2;
                if (slot == 0) r.terms.erase(m);
            }
        return r;
    }

    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    MultiPoly operator*(const Rat& c) const {
        MultiPoly r;
        if (c == 0) return r;
        for (const auto& [m, co] : terms) r.terms[m] = co * c;
        return r;
    }

    Rat eval(const std::array<Rat, kPolyVars>& point) const {
        Rat total = 0;
        for (const auto& [m, c] : terms) {
            Rat t = c;
            for (int i = 0; i < kPolyVars; ++i)
                for (int e = 0; e < m[static_cast<size_t>(i)]; ++e) t *= point[static_cast<size_t>(i)];
            total += t;
        }
        return total;
    }

    // Evaluation mod p; every coefficient denominator must be coprime to p.
    long eval_mod(const std::array<long, kPolyVars>& point, long p) const {
        long total = 0;
        for (const auto& [m, c] : terms) {
            long t = rational_mod(c, p);
            for (int i = 0; i < kPolyVars; ++i)
                for (int e = 0; e < m[static_cast<size_t>(i)]; ++e) {
                    long x = point[static_cast<size_t>(i)] % p;
                    if (x < 0) x += p;
                    t = static_cast<long>((static_cast<__int128>(t) * x) % p);
                }
            total = (total + t) % p;
        }
        return total;
    }

    // Substitute variable i by a constant, eliminating it.
    MultiPoly substitute(int i, const Rat& value) const {
        MultiPoly r;
        for (const auto& [m, c] : terms) {
            Rat coeff = c;
            for (int e = 0; e < m[static_cast<size_t>(i)]; ++e) coeff *= value;
            if (coeff == 0) continue;
            Monomial m2 = m;
            m2[static_cast<size_t>(i)] = 0;
            Rat& slot = r.terms[m2];
            slot += coeff;
            if (slot == 0) r.terms.erase(m2);
        }
        return r;
    }

    // Canonical text form for golden-file comparison: terms in map order,
    // "c * z0^a0 z1^a1 ..." joined by " + "; "0" for the zero polynomial.
    std::string to_string() const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms) {
            if (!first) os << " + ";
            first = false;
            os << c.get_str();
            for (int i = 0; i < kPolyVars; ++i) {
                if (m[static_cast<size_t>(i)] == 0) continue;
                os << " * z" << i;
                if (m[static_cast<size_t>(i)] > 1) os << "^" << int(m[static_cast<size_t>(i)]);
            }
        }
        return os.str();
    }
};

inline MultiPoly operator*(const Rat& c, const MultiPoly& p) { return p * c; }

// C(var + shift, depth) as a polynomial: prod_{t=0}^{depth-1}(var+shift-t)/depth!.
inline MultiPoly falling_binomial_poly(int var, long shift, long depth) {
    if (depth < 0) throw precondition_error("falling_binomial_poly: negative depth");
    MultiPoly r = MultiPoly::constant(1);
    for (long t = 0; t < depth; ++t)
        r *= MultiPoly::variable(var) + MultiPoly::constant(Rat(shift - t));
    Rat inv(Int(1), factorial(depth));
    inv.canonicalize();
    return r * inv;
}

}  // namespace lec
