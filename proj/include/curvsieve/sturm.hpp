// Exact real-root counting and sign certification for univariate polynomials
// over the rationals: Sturm chains with right-limit sign conventions, so
// half-open intervals (a, b] with extended endpoints come out exactly.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "upoly.hpp"

namespace curvsieve {

// Extended rational: -inf, finite, +inf.
struct XRat {
    int kind = 0;  // -1, 0, +1
    Rat value;

    static XRat minus_inf() { return {-1, Rat(0)}; }
    static XRat plus_inf() { return {+1, Rat(0)}; }
    static XRat finite(const Rat& v) { return {0, v}; }

    bool is_finite() const { return kind == 0; }
    std::string str() const {
        if (kind < 0) return "-inf";
        if (kind > 0) return "inf";
        return to_string(value);
    }
    friend bool operator<(const XRat& a, const XRat& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.kind == 0 && a.value < b.value;
    }
};

inline int sign_at(const UPoly& p, const XRat& x) {
    if (p.is_zero()) return 0;
    switch (x.kind) {
        case -1: return sign_of(p.leading()) * (p.degree() % 2 == 0 ? 1 : -1);
        case +1: return sign_of(p.leading());
        default: return sign_of(p.eval(x.value));
    }
}

// Sign immediately to the right of x (the first nonvanishing derivative).
inline int sign_at_right(const UPoly& p, const XRat& x) {
    if (!x.is_finite()) return sign_at(p, x);
    UPoly q = p;
    while (!q.is_zero()) {
        int s = sign_of(q.eval(x.value));
        if (s != 0) return s;
        q = q.derivative();
    }
    return 0;
}

struct SturmChain {
    std::vector<UPoly> polys;  // p, p', then negated remainders; last nonzero

    int variations(const XRat& x, bool right_limit) const {
        int count = 0, prev = 0;
        for (const auto& q : polys) {
            int s = right_limit ? sign_at_right(q, x) : sign_at(q, x);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++count;
            prev = s;
        }
        return count;
    }
};

inline SturmChain sturm_sequence(const UPoly& p) {
    if (p.is_zero()) throw ZeroPolynomial("Sturm sequence of the zero polynomial");
    SturmChain chain;
    chain.polys.push_back(p);
    UPoly d = p.derivative();
    if (d.is_zero()) return chain;  // constant input
    chain.polys.push_back(d);
    for (;;) {
        const UPoly& a = chain.polys[chain.polys.size() - 2];
        const UPoly& b = chain.polys.back();
        UPoly r = -divrem(a, b).second;
        if (r.is_zero()) break;  // chain ends at (a multiple of) the gcd
        chain.polys.push_back(std::move(r));
    }
    return chain;
}

// Number of distinct real roots of p in (a, b]. Multiplicity is ignored:
// the count runs on the squarefree part.
inline int count_real_roots(const UPoly& p, const XRat& a, const XRat& b) {
    if (p.is_zero()) throw ZeroPolynomial("root counting on the zero polynomial");
    if (!(a < b)) throw Error("count_real_roots: empty interval");
    if (p.degree() == 0) return 0;
    UPoly sf = squarefree_part(p);
    if (sf.degree() == 0) return 0;
    SturmChain chain = sturm_sequence(sf);
    return chain.variations(a, true) - chain.variations(b, true);
}

// Cauchy bound: all real roots lie in (-B, B).
inline Rat root_bound(const UPoly& p) {
    Rat b = 0;
    for (int k = 0; k < p.degree(); ++k) {
        Rat q = abs(p[k] / p.leading());
        if (q > b) b = q;
    }
    return b + 1;
}

// Isolating interval (lo, hi] around the smallest real root of p in (a, inf),
// narrowed below the given width.
inline std::pair<Rat, Rat> isolate_smallest_root_above(const UPoly& p, const Rat& a,
                                                       const Rat& width = Rat(1, 1024)) {
    UPoly sf = squarefree_part(p);
    Rat lo = a, hi = root_bound(sf);
    if (hi <= lo) hi = lo + 1;
    if (count_real_roots(sf, XRat::finite(lo), XRat::finite(hi)) == 0)
        throw Error("isolate_smallest_root_above: no root in range");
    // shrink to exactly the smallest root
    for (;;) {
        Rat mid = (lo + hi) / 2;
        int left = count_real_roots(sf, XRat::finite(lo), XRat::finite(mid));
        if (left > 0)
            hi = mid;
        else
            lo = mid;
        if (hi - lo < width &&
            count_real_roots(sf, XRat::finite(lo), XRat::finite(hi)) == 1)
            return {lo, hi};
    }
}

enum class SignVerdict { StrictlyPositive, Nonnegative, StrictlyNegative, Nonpositive, Indefinite };

inline std::string to_string(SignVerdict v) {
    switch (v) {
        case SignVerdict::StrictlyPositive: return "strictly-positive";
        case SignVerdict::Nonnegative: return "nonnegative";
        case SignVerdict::StrictlyNegative: return "strictly-negative";
        case SignVerdict::Nonpositive: return "nonpositive";
        default: return "indefinite";
    }
}

// Machine-checkable record of one exact sign claim on an interval.
struct SignCertificate {
    std::string polynomial;                     // canonical text
    std::pair<std::string, std::string> interval{"0", "inf"};
    int root_count_interior = 0;                // distinct roots of the squarefree part
    std::pair<int, int> endpoint_signs{0, 0};   // right-limit at left end, limit at right end
    std::pair<std::string, int> sample{"1", 0}; // rational sample point and sign there
    SignVerdict verdict = SignVerdict::Indefinite;
    std::optional<std::pair<std::string, std::string>> isolating_interval;  // for indefinite

    bool nonpositive() const {
        return verdict == SignVerdict::StrictlyNegative || verdict == SignVerdict::Nonpositive;
    }
    bool nonnegative() const {
        return verdict == SignVerdict::StrictlyPositive || verdict == SignVerdict::Nonnegative;
    }
    bool strict() const {
        return verdict == SignVerdict::StrictlyPositive || verdict == SignVerdict::StrictlyNegative;
    }
};

// Trivial certificate for the identically-zero claim (0 is both <= 0 and >= 0);
// callers use it when a reaction or coefficient vanishes identically.
inline SignCertificate zero_certificate(bool as_nonpositive) {
    SignCertificate cert;
    cert.polynomial = "0";
    cert.root_count_interior = 0;
    cert.endpoint_signs = {0, 0};
    cert.sample = {"1", 0};
    cert.verdict = as_nonpositive ? SignVerdict::Nonpositive : SignVerdict::Nonnegative;
    return cert;
}

// Replay a certificate from its serialized fields alone: recount the roots,
// recheck endpoint and sample signs, and rederive the verdict.
inline bool replay_sign_certificate(const SignCertificate& cert, const UPoly& p) {
    if (p.is_zero())
        return cert.polynomial == "0" &&
               (cert.verdict == SignVerdict::Nonpositive || cert.verdict == SignVerdict::Nonnegative);
    const XRat zero = XRat::finite(0), inf = XRat::plus_inf();
    int distinct = p.degree() == 0 ? 0 : count_real_roots(p, zero, inf);
    if (distinct != cert.root_count_interior) return false;
    if (cert.endpoint_signs != std::make_pair(sign_at_right(p, zero), sign_at(p, inf))) return false;
    Rat sample_point = rat_from_string(cert.sample.first);
    if (sample_point <= 0) return false;
    int sample_sign = sign_of(p.eval(sample_point));
    if (sample_sign != cert.sample.second) return false;
    switch (cert.verdict) {
        case SignVerdict::StrictlyPositive: return distinct == 0 && sample_sign > 0;
        case SignVerdict::StrictlyNegative: return distinct == 0 && sample_sign < 0;
        case SignVerdict::Nonnegative:
        case SignVerdict::Nonpositive: {
            UPoly odd = odd_multiplicity_part(p);
            int odd_roots = odd.degree() == 0 ? 0 : count_real_roots(odd, zero, inf);
            if (odd_roots != 0) return false;
            return cert.verdict == SignVerdict::Nonnegative ? sample_sign > 0 : sample_sign < 0;
        }
        default: {
            // indefinite: the isolating interval must bracket a root
            if (!cert.isolating_interval) return false;
            Rat lo = rat_from_string(cert.isolating_interval->first);
            Rat hi = rat_from_string(cert.isolating_interval->second);
            if (!(0 <= lo && lo < hi)) return false;
            return count_real_roots(p, XRat::finite(lo), XRat::finite(hi)) >= 1;
        }
    }
}

// Exact sign certification of p on the open half-axis (0, inf).
//
// strictly-positive / strictly-negative: no roots at all in (0, inf);
// nonnegative / nonpositive: roots allowed only with even multiplicity;
// indefinite: a sign change exists, witnessed by a root-isolating interval.
inline SignCertificate certify_sign_on_positive_axis(const UPoly& p, bool strict) {
    if (p.is_zero()) throw ZeroPolynomial("cannot certify the zero polynomial");
    SignCertificate cert;
    cert.polynomial = p.to_string();
    cert.interval = {"0", "inf"};

    const XRat zero = XRat::finite(0), inf = XRat::plus_inf();
    int distinct = p.degree() == 0 ? 0 : count_real_roots(p, zero, inf);
    cert.root_count_interior = distinct;
    cert.endpoint_signs = {sign_at_right(p, zero), sign_at(p, inf)};

    // sample at a point that is provably not a root
    Rat x0 = 1;
    for (long k = 2; p.eval(x0) == 0; ++k) x0 = (k % 2 == 0) ? Rat(k / 2 + 1) : Rat(1, k / 2 + 1);
    int s0 = sign_of(p.eval(x0));
    cert.sample = {to_string(x0), s0};

    if (distinct == 0) {
        cert.verdict = s0 > 0 ? SignVerdict::StrictlyPositive : SignVerdict::StrictlyNegative;
        return cert;
    }

    UPoly odd = odd_multiplicity_part(p);
    int odd_roots = odd.degree() == 0 ? 0 : count_real_roots(odd, zero, inf);
    if (odd_roots == 0 && !strict) {
        cert.verdict = s0 > 0 ? SignVerdict::Nonnegative : SignVerdict::Nonpositive;
        return cert;
    }

    cert.verdict = SignVerdict::Indefinite;
    const UPoly& witness_poly = odd_roots > 0 ? odd : p;
    auto iso = isolate_smallest_root_above(witness_poly, 0);
    cert.isolating_interval = {{to_string(iso.first), to_string(iso.second)}};
    return cert;
}

}  // namespace curvsieve
