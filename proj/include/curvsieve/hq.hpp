// The H/Q basis: products H^a Q^b of fixed total degree a + 2b form a basis
// for symmetric homogeneous polynomials of that degree. Conversion goes
// through a dense exact linear solve per degree.
#pragma once

#include <map>
#include <utility>
#include <vector>

#include "poly2.hpp"
#include "ratfn2.hpp"

namespace curvsieve {

struct HQExpansion {
    int degree = 0;
    // key (a, b) with a + 2b = degree -> coefficient of H^a Q^b
    std::map<std::pair<int, int>, Rat> coeffs;

    Poly2 expand() const {
        Poly2 acc;
        for (const auto& [key, c] : coeffs) {
            acc += c * (poly_H().pow(key.first) * poly_Q().pow(key.second));
        }
        return acc;
    }
};

// Unique coefficients c_ab with p = sum c_ab H^a Q^b. Requires p symmetric
// and homogeneous.
inline HQExpansion to_hq_basis(const Poly2& p) {
    if (!p.is_symmetric()) throw NotSymmetric("H/Q expansion requires a symmetric polynomial");
    auto deg = p.homogeneous_degree();
    if (!deg) throw NotHomogeneous("H/Q expansion requires a homogeneous polynomial");
    int d = *deg;
    int n = d / 2 + 1;  // basis size: b = 0..floor(d/2), a = d - 2b

    // Row space: coefficients of l1^(d-j) l2^j for j = 0..floor(d/2) determine
    // a symmetric homogeneous polynomial.
    int rows = d / 2 + 1;
    std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(n + 1));
    for (int col = 0; col < n; ++col) {
        int b = col;
        int a = d - 2 * b;
        Poly2 basis = poly_H().pow(a) * poly_Q().pow(b);
        for (int row = 0; row < rows; ++row) {
            Exp2 e{d - row, row};
            auto it = basis.terms().find(e);
            m[row][col] = it == basis.terms().end() ? Rat(0) : it->second;
        }
    }
    for (int row = 0; row < rows; ++row) {
        Exp2 e{d - row, row};
        auto it = p.terms().find(e);
        m[row][n] = it == p.terms().end() ? Rat(0) : it->second;
    }

    // Gaussian elimination with exact pivoting.
    std::vector<int> pivot_col(rows, -1);
    int r = 0;
    for (int col = 0; col < n && r < rows; ++col) {
        int sel = -1;
        for (int row = r; row < rows; ++row)
            if (m[row][col] != 0) {
                sel = row;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[sel], m[r]);
        Rat inv = Rat(1) / m[r][col];
        for (int k = col; k <= n; ++k) m[r][k] *= inv;
        for (int row = 0; row < rows; ++row) {
            if (row == r || m[row][col] == 0) continue;
            Rat f = m[row][col];
            for (int k = col; k <= n; ++k) m[row][k] -= f * m[r][k];
        }
        pivot_col[r] = col;
        ++r;
    }

    HQExpansion out;
    out.degree = d;
    std::vector<Rat> sol(n);
    for (int row = 0; row < r; ++row) sol[pivot_col[row]] = m[row][n];
    for (int row = r; row < rows; ++row)
        if (m[row][n] != 0) throw Error("internal: inconsistent H/Q system");
    for (int b = 0; b < n; ++b)
        if (sol[b] != 0) out.coeffs[{d - 2 * b, b}] = sol[b];
    return out;
}

// Rewrite an arbitrary symmetric polynomial as a polynomial in (H, Q):
// the result reuses Poly2 with exponents read as (H-power, Q-power).
inline Poly2 symmetric_to_hq(const Poly2& p) {
    if (!p.is_symmetric()) throw NotSymmetric("H/Q rewrite requires a symmetric polynomial");
    // split into homogeneous components
    std::map<int, Poly2> comps;
    for (const auto& [e, c] : p.terms()) comps[e.degree()].add_term(e, c);
    Poly2 out;
    for (auto& [d, comp] : comps) {
        HQExpansion hq = to_hq_basis(comp);
        for (const auto& [key, c] : hq.coeffs) out.add_term({key.first, key.second}, c);
    }
    return out;
}

// Substitute (H, Q) -> (l1 + l2, l1^2 + l2^2) in a (H, Q)-encoded polynomial.
inline Poly2 hq_to_lambda(const Poly2& p_hq) { return p_hq.compose(poly_H(), poly_Q()); }

// Rewrite a symmetric rational function as num/den in the (H, Q) encoding.
// If the canonical denominator is antisymmetric-free but asymmetric this
// cannot happen for symmetric values (see RatFn2 canonical form), so both
// parts are symmetric polynomials.
inline RatFn2 symmetric_ratfn_to_hq(const RatFn2& w) {
    if (!w.is_symmetric()) throw NotSymmetric("quantity must be symmetric in (l1, l2)");
    Poly2 n = symmetric_to_hq(w.num());
    Poly2 d = symmetric_to_hq(w.den());
    return RatFn2(std::move(n), std::move(d));
}

}  // namespace curvsieve
