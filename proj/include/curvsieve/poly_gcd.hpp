// Bivariate gcd via subresultant pseudo-remainder sequences on the recursive
// univariate representation, with a fast path for homogeneous inputs.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "poly2.hpp"
#include "upoly.hpp"

namespace curvsieve {

// p(x, 1). Requires p homogeneous; the sign of p on the open positive cone
// equals the sign of the result on (0, inf).
inline UPoly dehomogenize(const Poly2& p) {
    auto d = p.homogeneous_degree();
    if (!d) throw NotHomogeneous("dehomogenize requires a nonzero homogeneous polynomial");
    std::vector<Rat> v(*d + 1);
    for (const auto& [e, c] : p.terms()) v[e.i] = c;
    return UPoly(std::move(v));
}

// q(l1/l2) * l2^degree; inverse of dehomogenize up to the l2 powers divided out.
inline Poly2 homogenize(const UPoly& q, int degree) {
    Poly2 p;
    for (int k = 0; k <= q.degree(); ++k)
        if (q[k] != 0) p.add_term({k, degree - k}, q[k]);
    return p;
}

namespace detail {

// Recursive representation: element k is the coefficient of l1^k, itself a
// univariate integer polynomial in l2.
using RPoly = std::vector<IPoly>;

inline void rtrim(RPoly& p) {
    while (!p.empty() && p.back().empty()) p.pop_back();
}
inline int rdeg(const RPoly& p) { return static_cast<int>(p.size()) - 1; }

inline IPoly imul(const IPoly& a, const IPoly& b) {
    if (a.empty() || b.empty()) return {};
    IPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

inline IPoly isub(IPoly a, const IPoly& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (size_t k = 0; k < b.size(); ++k) a[k] -= b[k];
    itrim(a);
    return a;
}

inline std::optional<IPoly> idivide_exact(const IPoly& a, const IPoly& b) {
    auto q = divide_exact(from_ipoly(a), from_ipoly(b));
    if (!q) return std::nullopt;
    for (const auto& c : q->coeffs())
        if (c.get_den() != 1) return std::nullopt;
    IPoly r(q->coeffs().size());
    for (size_t k = 0; k < r.size(); ++k) r[k] = q->coeffs()[k].get_num();
    return r;
}

inline RPoly rmul_coeff(const RPoly& p, const IPoly& c) {
    RPoly r(p.size());
    for (size_t k = 0; k < p.size(); ++k) r[k] = imul(p[k], c);
    rtrim(r);
    return r;
}

inline RPoly rdiv_coeff_exact(const RPoly& p, const IPoly& c) {
    RPoly r(p.size());
    for (size_t k = 0; k < p.size(); ++k) {
        if (p[k].empty()) continue;
        auto q = idivide_exact(p[k], c);
        if (!q) throw Error("internal: inexact coefficient division in PRS");
        r[k] = *q;
    }
    rtrim(r);
    return r;
}

// content with respect to l1: gcd in Z[l2] of all coefficients
inline IPoly rcontent(const RPoly& p) {
    IPoly g;
    for (const auto& c : p) g = igcd(g, c);
    return g;
}

// prem in l1 over the ring Z[l2]
inline RPoly rprem(RPoly a, const RPoly& b) {
    int db = rdeg(b);
    const IPoly lb = b.back();
    int e = rdeg(a) - db + 1;
    while (!a.empty() && rdeg(a) >= db) {
        int da = rdeg(a);
        IPoly la = a.back();
        for (auto& c : a) c = imul(c, lb);
        for (int j = 0; j <= db; ++j) a[da - db + j] = isub(a[da - db + j], imul(la, b[j]));
        rtrim(a);
        --e;
    }
    if (e > 0 && !a.empty()) {
        IPoly f{Int(1)};
        for (int k = 0; k < e; ++k) f = imul(f, lb);
        for (auto& c : a) c = imul(c, f);
    }
    return a;
}

inline IPoly ipow(const IPoly& b, int e) {
    IPoly r{Int(1)};
    for (int k = 0; k < e; ++k) r = imul(r, b);
    return r;
}

// Primitive gcd in Z[l2][l1] (Knuth 4.6.1C generalized to polynomial
// coefficients). Inputs must already be l1-primitive.
inline RPoly rgcd_primitive(RPoly u, RPoly v) {
    if (u.empty()) return v;
    if (v.empty()) return u;
    if (rdeg(u) < rdeg(v)) std::swap(u, v);
    IPoly g{Int(1)}, h{Int(1)};
    for (;;) {
        int delta = rdeg(u) - rdeg(v);
        RPoly r = rprem(u, v);
        if (r.empty()) {
            IPoly c = rcontent(v);
            return rdiv_coeff_exact(v, c);
        }
        if (rdeg(r) == 0) return RPoly{IPoly{Int(1)}};
        u = v;
        v = rdiv_coeff_exact(r, imul(g, ipow(h, delta)));
        g = u.back();
        if (delta <= 1) {
            h = imul(ipow(g, delta), ipow(h, 1 - delta));
        } else {
            auto q = idivide_exact(ipow(g, delta), ipow(h, delta - 1));
            if (!q) throw Error("internal: inexact h update in PRS");
            h = *q;
        }
    }
}

inline RPoly to_rpoly(const Poly2& p) {
    // clear rational denominators first; gcd is only defined up to a constant
    Poly2 prim = p.primitive_part();
    RPoly r;
    for (const auto& [e, c] : prim.terms()) {
        if (static_cast<int>(r.size()) <= e.i) r.resize(e.i + 1);
        IPoly& ip = r[e.i];
        if (static_cast<int>(ip.size()) <= e.j) ip.resize(e.j + 1);
        ip[e.j] = c.get_num();
    }
    for (auto& ip : r) itrim(ip);
    rtrim(r);
    return r;
}

inline Poly2 from_rpoly(const RPoly& p) {
    Poly2 r;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < p[i].size(); ++j)
            if (p[i][j] != 0) r.add_term({static_cast<int>(i), static_cast<int>(j)}, Rat(p[i][j]));
    return r;
}

}  // namespace detail

// gcd in Q[l1, l2], returned primitive with positive leading coefficient.
inline Poly2 gcd(const Poly2& a, const Poly2& b) {
    if (a.is_zero()) return b.primitive_part();
    if (b.is_zero()) return a.primitive_part();

    // Homogeneous fast path: gcd factors through the dehomogenization plus
    // the common power of l2.
    auto da = a.homogeneous_degree();
    auto db = b.homogeneous_degree();
    if (da && db) {
        UPoly qa = dehomogenize(a);
        UPoly qb = dehomogenize(b);
        int ja = *da - qa.degree();  // multiplicity of l2 in a
        int jb = *db - qb.degree();
        UPoly g = gcd(qa, qb);
        Poly2 r = homogenize(g, g.degree() + std::min(ja, jb));
        return r.primitive_part();
    }

    detail::RPoly u = detail::to_rpoly(a);
    detail::RPoly v = detail::to_rpoly(b);
    IPoly cu = detail::rcontent(u);
    IPoly cv = detail::rcontent(v);
    u = detail::rdiv_coeff_exact(u, cu);
    v = detail::rdiv_coeff_exact(v, cv);
    detail::RPoly g = detail::rgcd_primitive(u, v);
    IPoly cg = igcd(cu, cv);
    Poly2 r = detail::from_rpoly(detail::rmul_coeff(g, cg));
    return r.primitive_part();
}

}  // namespace curvsieve
