// Dense univariate polynomials with exact rational coefficients, plus the
// integer-coefficient subresultant PRS used for gcd computations.
#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rat.hpp"

namespace curvsieve {

class UPoly {
  public:
    UPoly() = default;
    explicit UPoly(const Rat& c) {
        if (c != 0) c_.push_back(c);
    }
    explicit UPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

    // coefficients low to high, e.g. from_coeffs({-1, 0, 1}) = x^2 - 1
    static UPoly from_coeffs(std::vector<Rat> coeffs) { return UPoly(std::move(coeffs)); }
    static UPoly x() { return UPoly(std::vector<Rat>{0, 1}); }
    static UPoly monomial(const Rat& c, int k) {
        std::vector<Rat> v(k + 1);
        v[k] = c;
        return UPoly(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    const Rat& operator[](int k) const {
        static const Rat zero = 0;
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : zero;
    }
    const std::vector<Rat>& coeffs() const { return c_; }
    const Rat& leading() const {
        static const Rat zero = 0;
        return c_.empty() ? zero : c_.back();
    }

    UPoly operator-() const {
        UPoly r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }
    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        std::vector<Rat> v(std::max(a.c_.size(), b.c_.size()));
        for (size_t k = 0; k < v.size(); ++k) v[k] = a[static_cast<int>(k)] + b[static_cast<int>(k)];
        return UPoly(std::move(v));
    }
    friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return UPoly();
        std::vector<Rat> v(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        return UPoly(std::move(v));
    }
    friend UPoly operator*(const Rat& s, const UPoly& p) {
        if (s == 0) return UPoly();
        UPoly r = p;
        for (auto& c : r.c_) c *= s;
        return r;
    }

    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

    UPoly derivative() const {
        if (c_.size() <= 1) return UPoly();
        std::vector<Rat> v(c_.size() - 1);
        for (size_t k = 1; k < c_.size(); ++k) v[k - 1] = c_[k] * static_cast<long>(k);
        return UPoly(std::move(v));
    }

    Rat eval(const Rat& x) const {
        Rat acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    double eval_double(double x) const {
        double acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
        return acc;
    }

    std::string to_string(const std::string& var = "x") const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int k = degree(); k >= 0; --k) {
            Rat a = c_[k];
            if (a == 0) continue;
            if (first) {
                if (sign_of(a) < 0) {
                    os << "-";
                    a = -a;
                }
                first = false;
            } else if (sign_of(a) < 0) {
                os << " - ";
                a = -a;
            } else {
                os << " + ";
            }
            bool one = (a == 1) && k > 0;
            if (!one) os << curvsieve::to_string(a);
            if (k > 0) {
                if (!one) os << "*";
                os << var;
                if (k > 1) os << "^" << k;
            }
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const UPoly& p) { return os << p.to_string(); }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;  // c_[k] * x^k, trailing entry nonzero
};

// Quotient and remainder over the rationals.
inline std::pair<UPoly, UPoly> divrem(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw ZeroDenominator("univariate division by zero");
    std::vector<Rat> rem(a.coeffs());
    int db = b.degree();
    if (a.degree() < db) return {UPoly(), a};
    std::vector<Rat> quot(a.degree() - db + 1);
    for (int k = a.degree(); k >= db; --k) {
        Rat c = rem[k] / b.leading();
        if (c == 0) continue;
        quot[k - db] = c;
        for (int j = 0; j <= db; ++j) rem[k - db + j] -= c * b[j];
    }
    return {UPoly(std::move(quot)), UPoly(std::move(rem))};
}

inline std::optional<UPoly> divide_exact(const UPoly& a, const UPoly& b) {
    auto [q, r] = divrem(a, b);
    if (!r.is_zero()) return std::nullopt;
    return q;
}

// --- integer-coefficient machinery for the subresultant PRS ---

using IPoly = std::vector<Int>;  // low to high, trailing nonzero

inline void itrim(IPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}
inline int ideg(const IPoly& p) { return static_cast<int>(p.size()) - 1; }

inline Int icontent(const IPoly& p) {
    Int g = 0;
    for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

inline IPoly idiv_scalar(const IPoly& p, const Int& s) {
    IPoly r(p.size());
    for (size_t k = 0; k < p.size(); ++k) mpz_divexact(r[k].get_mpz_t(), p[k].get_mpz_t(), s.get_mpz_t());
    return r;
}

// Pseudo-remainder: prem(a, b) = lc(b)^(deg a - deg b + 1) * a mod b, computed
// without leaving Z[x]. The trailing lb^e factor keeps the exact textbook
// normalization even when the degree drops by more than one per round.
inline IPoly iprem(IPoly a, const IPoly& b) {
    int db = ideg(b);
    const Int lb = b.back();
    int e = ideg(a) - db + 1;
    while (!a.empty() && ideg(a) >= db) {
        int da = ideg(a);
        Int la = a.back();
        for (auto& c : a) c *= lb;
        for (int j = 0; j <= db; ++j) a[da - db + j] -= la * b[j];
        itrim(a);
        --e;
    }
    if (e > 0 && !a.empty()) {
        Int f = pow(lb, static_cast<unsigned long>(e));
        for (auto& c : a) c *= f;
    }
    return a;
}

// Clear rational denominators and the content; returns a primitive integer
// polynomial with positive leading coefficient (zero stays zero).
inline IPoly to_primitive_ipoly(const UPoly& p) {
    IPoly r;
    if (p.is_zero()) return r;
    Int den_lcm = 1;
    for (const auto& c : p.coeffs()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    r.resize(p.coeffs().size());
    for (size_t k = 0; k < r.size(); ++k) {
        Rat scaled = p.coeffs()[k] * Rat(den_lcm);
        r[k] = scaled.get_num();  // exact by construction
    }
    Int g = icontent(r);
    if (sign_of(r.back()) < 0) g = -g;
    r = idiv_scalar(r, g);
    return r;
}

inline UPoly from_ipoly(const IPoly& p) {
    std::vector<Rat> v(p.size());
    for (size_t k = 0; k < p.size(); ++k) v[k] = Rat(p[k]);
    return UPoly(std::move(v));
}

// Subresultant gcd (Knuth 4.6.1C / Brown-Traub); result is primitive with a
// positive leading coefficient.
inline IPoly igcd(IPoly u, IPoly v) {
    itrim(u);
    itrim(v);
    if (u.empty()) return v;
    if (v.empty()) return u;
    if (ideg(u) < ideg(v)) std::swap(u, v);
    {
        Int cu = icontent(u), cv = icontent(v);
        u = idiv_scalar(u, sign_of(u.back()) < 0 ? Int(-cu) : cu);
        v = idiv_scalar(v, sign_of(v.back()) < 0 ? Int(-cv) : cv);
    }
    Int g = 1, h = 1;
    for (;;) {
        int delta = ideg(u) - ideg(v);
        IPoly r = iprem(u, v);
        if (r.empty()) {
            Int c = icontent(v);
            if (sign_of(v.back()) < 0) c = -c;
            return idiv_scalar(v, c);
        }
        if (ideg(r) == 0) return IPoly{1};
        u = v;
        Int divisor = g * pow(h, static_cast<unsigned long>(delta));
        v = idiv_scalar(r, divisor);
        g = u.back();
        if (delta <= 1) {
            h = pow(g, static_cast<unsigned long>(delta)) * pow(h, static_cast<unsigned long>(1 - delta));
        } else {
            Int num = pow(g, static_cast<unsigned long>(delta));
            mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), pow(h, static_cast<unsigned long>(delta - 1)).get_mpz_t());
        }
    }
}

inline UPoly gcd(const UPoly& a, const UPoly& b) {
    return from_ipoly(igcd(to_primitive_ipoly(a), to_primitive_ipoly(b)));
}

// p / gcd(p, p'): same distinct roots, all simple. Primitive, positive leading.
inline UPoly squarefree_part(const UPoly& p) {
    if (p.is_zero()) throw ZeroPolynomial("squarefree part of zero");
    UPoly g = gcd(p, p.derivative());
    UPoly q = *divide_exact(p, g);
    return from_ipoly(to_primitive_ipoly(q));
}

// Yun decomposition: p = c * prod factors[k]^(k+1), factors squarefree and
// pairwise coprime (factors[k] may be constant 1).
inline std::vector<UPoly> squarefree_decomposition(const UPoly& p) {
    std::vector<UPoly> out;
    if (p.is_zero()) throw ZeroPolynomial("squarefree decomposition of zero");
    if (p.degree() == 0) return out;
    UPoly a = from_ipoly(to_primitive_ipoly(p));
    UPoly g = gcd(a, a.derivative());
    if (g.degree() == 0) {
        out.push_back(a);
        return out;
    }
    UPoly w = *divide_exact(a, g);
    UPoly y = *divide_exact(a.derivative(), g);
    UPoly z = y - w.derivative();
    while (!z.is_zero()) {
        UPoly f = gcd(w, z);
        out.push_back(f);
        w = *divide_exact(w, f);
        y = *divide_exact(z, f);
        z = y - w.derivative();
    }
    out.push_back(w);
    return out;
}

// Product of the odd-multiplicity squarefree factors; p changes sign exactly
// at the real roots of this polynomial.
inline UPoly odd_multiplicity_part(const UPoly& p) {
    auto dec = squarefree_decomposition(p);
    UPoly r(Rat(1));
    for (size_t k = 0; k < dec.size(); ++k)
        if (k % 2 == 0) r = r * dec[k];  // multiplicity k+1 odd
    return from_ipoly(to_primitive_ipoly(r));
}

}  // namespace curvsieve
