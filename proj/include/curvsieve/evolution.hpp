// The symbolic evolution engine: (d/dt - F^{kl} nabla_k nabla_l) applied to
// power sums and symmetric rational quantities, reduction at critical points
// to the diagonal normal form
//     reaction + c1 * h11;1^2 + c2 * h22;2^2,
// and exact nonpositivity certification via Sturm chains.
//
// Gradient bookkeeping: by the Codazzi symmetry h_{ij;k} has exactly four
// independent components,
//   D1 = h11;1, D2 = h22;1 (= h12;2), D3 = h11;2 (= h12;1), D4 = h22;2,
// and every gradient term splits into a quadratic form in (D1, D2) plus one
// in (D3, D4); monomials coupling the pairs never arise.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hq.hpp"
#include "poly_gcd.hpp"
#include "ratfn2.hpp"
#include "sturm.hpp"
#include "velocity.hpp"

namespace curvsieve {

// Two symmetric 2x2 blocks of a quadratic form in the curvature gradients:
// value = sum_pq A[p][q] Dp Dq over (D1, D2) plus the same for B over (D3, D4).
struct GradQuadForm {
    std::array<std::array<RatFn2, 2>, 2> A{};
    std::array<std::array<RatFn2, 2>, 2> B{};

    GradQuadForm& operator+=(const GradQuadForm& o) {
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) {
                A[p][q] += o.A[p][q];
                B[p][q] += o.B[p][q];
            }
        return *this;
    }
    GradQuadForm& operator-=(const GradQuadForm& o) {
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) {
                A[p][q] -= o.A[p][q];
                B[p][q] -= o.B[p][q];
            }
        return *this;
    }
    friend GradQuadForm operator+(GradQuadForm a, const GradQuadForm& b) { return a += b; }
    friend GradQuadForm operator-(GradQuadForm a, const GradQuadForm& b) { return a -= b; }
    friend GradQuadForm operator*(const RatFn2& s, GradQuadForm g) {
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) {
                g.A[p][q] = s * g.A[p][q];
                g.B[p][q] = s * g.B[p][q];
            }
        return g;
    }

    bool is_zero() const {
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q)
                if (!A[p][q].is_zero() || !B[p][q].is_zero()) return false;
        return true;
    }

    // Coefficient of D1^2 after substituting D2 = a1 * D1.
    RatFn2 collapse_block_a(const RatFn2& a1) const {
        return A[0][0] + Rat(2) * (a1 * A[0][1]) + a1 * a1 * A[1][1];
    }
    // Coefficient of D4^2 after substituting D3 = a2 * D4.
    RatFn2 collapse_block_b(const RatFn2& a2) const {
        return B[1][1] + Rat(2) * (a2 * B[0][1]) + a2 * a2 * B[0][0];
    }
};

namespace detail {

inline RatFn2 mono(int i, int j) { return RatFn2(Poly2::monomial(1, i, j)); }

}  // namespace detail

// sum_{i,j,k} w_k l_i^a l_j^b h_{ij;k}^2   (w_1, w_2 are the k-weights)
inline GradQuadForm weighted_grad_square_sum(const RatFn2& w1, const RatFn2& w2, int a, int b) {
    using detail::mono;
    GradQuadForm g;
    RatFn2 cross = mono(a, b) + mono(b, a);  // l1^a l2^b + l2^a l1^b
    g.A[0][0] = w1 * mono(a + b, 0);
    g.A[1][1] = w1 * mono(0, a + b) + w2 * cross;
    g.B[0][0] = w2 * mono(a + b, 0) + w1 * cross;
    g.B[1][1] = w2 * mono(0, a + b);
    return g;
}

// sum_{i,j,k} w_k l_i^a l_j^b h_{ii;k} h_{jj;k}
inline GradQuadForm weighted_grad_diag_sum(const RatFn2& w1, const RatFn2& w2, int a, int b) {
    using detail::mono;
    GradQuadForm g;
    RatFn2 half_cross = Rat(1, 2) * (mono(a, b) + mono(b, a));
    g.A[0][0] = w1 * mono(a + b, 0);
    g.A[0][1] = g.A[1][0] = w1 * half_cross;
    g.A[1][1] = w1 * mono(0, a + b);
    g.B[0][0] = w2 * mono(a + b, 0);
    g.B[0][1] = g.B[1][0] = w2 * half_cross;
    g.B[1][1] = w2 * mono(0, a + b);
    return g;
}

// sum_i w_i F^{kl,rs} h_{kl;i} h_{rs;i} via the spectral second-derivative
// rule for symmetric eigenvalue functions.
inline GradQuadForm hessian_grad_sum(const Velocity& v, const RatFn2& w1, const RatFn2& w2) {
    GradQuadForm g;
    g.A[0][0] = w1 * v.hess(0, 0);
    g.A[0][1] = g.A[1][0] = w1 * v.hess(0, 1);
    g.A[1][1] = w1 * v.hess(1, 1) + Rat(2) * (w2 * v.hess_off());  // h12;2 = D2
    g.B[0][0] = w2 * v.hess(0, 0) + Rat(2) * (w1 * v.hess_off());  // h12;1 = D3
    g.B[0][1] = g.B[1][0] = w2 * v.hess(0, 1);
    g.B[1][1] = w2 * v.hess(1, 1);
    return g;
}

// F^{kl} (B_m)_{;k} (B_n)_{;l} expanded over the gradient components.
inline GradQuadForm power_sum_grad_product(const Velocity& v, int m, int n) {
    GradQuadForm g = weighted_grad_diag_sum(v.grad(0), v.grad(1), m - 1, n - 1);
    return RatFn2(Rat(static_cast<long>(m) * n)) * g;
}

// Reaction plus gradient quadratic form.
struct EvolutionExpr {
    RatFn2 reaction;
    GradQuadForm grad;
};

// The general evolution equation for power sums B_alpha = l1^alpha + l2^alpha
// under d/dt X = -F nu:
//   L B_a = a (sum_i F^ii l_i^2) B_a + a (F - sum_i F^ii l_i) B_{a+1}
//         - a sum_{r=0}^{a-2} sum_{ijk} F^kk l_i^{a-2-r} l_j^r h_{ij;k}^2
//         + a sum_i F^{kl,rs} h_{kl;i} h_{rs;i} l_i^{a-1}.
inline EvolutionExpr evolve_power_sum(const Velocity& v, int alpha) {
    if (alpha < 1) throw Error("evolve_power_sum requires alpha >= 1");
    EvolutionExpr out;
    Rat a(alpha);
    out.reaction = Rat(alpha) * (v.grad_moment(2) * rf_B(static_cast<unsigned>(alpha))) +
                   Rat(alpha) * ((v.f() - v.grad_moment(1)) * rf_B(static_cast<unsigned>(alpha + 1)));
    for (int r = 0; r <= alpha - 2; ++r)
        out.grad -= RatFn2(a) * weighted_grad_square_sum(v.grad(0), v.grad(1), alpha - 2 - r, r);
    out.grad += RatFn2(a) * hessian_grad_sum(v, detail::mono(alpha - 1, 0), detail::mono(0, alpha - 1));
    return out;
}

namespace detail {

// Log-derivative data of a symmetric quantity in the H/Q basis, mapped back
// to (l1, l2): g_a = d(log w)/du_a and g_ab = d^2(log w)/du_a du_b for
// u = (H, Q).
struct LogDerivatives {
    RatFn2 g[2];
    RatFn2 gg[2][2];
};

inline RatFn2 hq_ratfn_to_lambda(const RatFn2& f_hq) {
    return RatFn2(hq_to_lambda(f_hq.num()), hq_to_lambda(f_hq.den()));
}

inline LogDerivatives log_derivatives(const RatFn2& w) {
    if (w.is_zero()) throw DegenerateQuantity("quantity is identically zero");
    RatFn2 ghq = symmetric_ratfn_to_hq(w);
    LogDerivatives out;
    RatFn2 la_hq[2];
    for (int a = 0; a < 2; ++a) {
        la_hq[a] = ghq.derivative(a) / ghq;
        out.g[a] = hq_ratfn_to_lambda(la_hq[a]);
    }
    for (int a = 0; a < 2; ++a)
        for (int b = a; b < 2; ++b) {
            out.gg[a][b] = hq_ratfn_to_lambda(la_hq[a].derivative(b));
            out.gg[b][a] = out.gg[a][b];
        }
    return out;
}

inline LogDerivatives plain_derivatives(const RatFn2& w) {
    if (w.is_zero()) throw DegenerateQuantity("quantity is identically zero");
    RatFn2 ghq = symmetric_ratfn_to_hq(w);
    LogDerivatives out;
    for (int a = 0; a < 2; ++a) out.g[a] = hq_ratfn_to_lambda(ghq.derivative(a));
    for (int a = 0; a < 2; ++a)
        for (int b = a; b < 2; ++b) {
            out.gg[a][b] = hq_ratfn_to_lambda(ghq.derivative(a).derivative(b));
            out.gg[b][a] = out.gg[a][b];
        }
    return out;
}

}  // namespace detail

// L w (or L log w) assembled by the exact second-order chain rule over the
// power-sum building blocks H and Q:
//   L G(u) = sum_a G_a L u_a - sum_ab G_ab F^{kl} (u_a)_{;k} (u_b)_{;l}.
inline EvolutionExpr evolve_quantity(const Velocity& v, const RatFn2& w, bool log_scale) {
    detail::LogDerivatives d = log_scale ? detail::log_derivatives(w) : detail::plain_derivatives(w);
    EvolutionExpr lh = evolve_power_sum(v, 1);
    EvolutionExpr lq = evolve_power_sum(v, 2);

    EvolutionExpr out;
    out.reaction = d.g[0] * lh.reaction + d.g[1] * lq.reaction;
    out.grad = d.g[0] * lh.grad + d.g[1] * lq.grad;
    GradQuadForm pp11 = power_sum_grad_product(v, 1, 1);
    GradQuadForm pp12 = power_sum_grad_product(v, 1, 2);
    GradQuadForm pp22 = power_sum_grad_product(v, 2, 2);
    out.grad -= d.gg[0][0] * pp11;
    out.grad -= (Rat(2) * d.gg[0][1]) * pp12;
    out.grad -= d.gg[1][1] * pp22;
    return out;
}

// The critical-point gradient relation: writing (log w)_{;1} = c1 h11;1 +
// c2 h22;1, a vanishing gradient forces h22;1 = a1 h11;1 with a1 = -c1/c2.
inline RatFn2 critical_point_ratio(const RatFn2& w) {
    if (w.is_constant()) throw DegenerateGradient("quantity has no curvature dependence");
    detail::LogDerivatives d = detail::log_derivatives(w);
    RatFn2 two_l1 = Rat(2) * rf_l1();
    RatFn2 two_l2 = Rat(2) * rf_l2();
    RatFn2 c1 = d.g[0] + two_l1 * d.g[1];
    RatFn2 c2 = d.g[0] + two_l2 * d.g[1];
    if (c2.is_zero()) throw DegenerateGradient("gradient condition degenerates: c2 == 0");
    return -(c1 / c2);
}

// L log w at a critical point, reduced to the diagonal normal form.
struct CriticalForm {
    RatFn2 reaction;
    RatFn2 a1;  // h22;1 = a1 h11;1 (and h11;2 = a1-swapped h22;2)
    RatFn2 c1;  // coefficient of h11;1^2
    RatFn2 c2;  // coefficient of h22;2^2, equals c1 with l1 <-> l2
};

inline CriticalForm critical_form(const Velocity& v, const RatFn2& w) {
    EvolutionExpr ev = evolve_quantity(v, w, /*log_scale=*/true);
    CriticalForm out;
    out.a1 = critical_point_ratio(w);
    RatFn2 a2 = out.a1.swapped();
    out.reaction = ev.reaction;
    out.c1 = ev.grad.collapse_block_a(out.a1);
    out.c2 = ev.grad.collapse_block_b(a2);
    if (v.f().is_symmetric() && w.is_symmetric() && out.c2 != out.c1.swapped())
        throw Error("internal: critical form lost the l1 <-> l2 covariance");
    return out;
}

// ---------------------------------------------------------------------------
// Sign certification on the open cone {l1, l2 > 0}.

enum class ConeSign { Positive, Negative, Nonnegative, Nonpositive, Zero, Indefinite };

struct ConeFactorCert {
    std::string factor;  // factor in (l1, l2)
    int exponent = 1;
    SignCertificate cert;  // certificate for the dehomogenized factor
};

struct ConeSignAnalysis {
    ConeSign sign = ConeSign::Indefinite;
    std::vector<ConeFactorCert> factors;     // trial factors l1, l2, l1+l2, l1-l2
    std::optional<SignCertificate> residual; // certificate for the residual factor
};

// Exact sign of a homogeneous polynomial on the open positive cone, the
// diagonal l1 = l2 excluded when exclude_diagonal is set. Trial factors are
// split off first; the residual is certified whole via its dehomogenization.
inline ConeSignAnalysis cone_sign(const Poly2& p, bool exclude_diagonal) {
    ConeSignAnalysis out;
    if (p.is_zero()) {
        out.sign = ConeSign::Zero;
        return out;
    }
    if (!p.is_homogeneous()) throw NotHomogeneous("cone sign analysis needs a homogeneous polynomial");

    Poly2 rest = p;
    int sign = 1;        // running strict sign
    bool vanish = false; // may vanish inside the domain
    bool indefinite = false;

    const std::array<Poly2, 4> trial = {Poly2::l1(), Poly2::l2(), poly_H(), poly_diff()};
    const std::array<std::string, 4> names = {"l1", "l2", "l1 + l2", "l1 - l2"};
    for (int t = 0; t < 4; ++t) {
        int e = 0;
        for (;;) {
            auto q = divide_exact(rest, trial[t]);
            if (!q) break;
            rest = *q;
            ++e;
        }
        if (e == 0) continue;
        ConeFactorCert fc;
        fc.factor = names[t];
        fc.exponent = e;
        fc.cert = certify_sign_on_positive_axis(dehomogenize(trial[t].pow(e)), /*strict=*/false);
        out.factors.push_back(fc);
        if (t < 3) continue;  // l1, l2, l1+l2 are strictly positive
        // (l1 - l2)^e
        if (e % 2 == 1)
            indefinite = true;  // flips across the diagonal
        else if (!exclude_diagonal)
            vanish = true;
    }

    SignCertificate rc = certify_sign_on_positive_axis(dehomogenize(rest), /*strict=*/false);
    out.residual = rc;
    switch (rc.verdict) {
        case SignVerdict::StrictlyPositive: break;
        case SignVerdict::StrictlyNegative: sign = -sign; break;
        case SignVerdict::Nonnegative: vanish = true; break;
        case SignVerdict::Nonpositive: vanish = true; sign = -sign; break;
        default: indefinite = true; break;
    }

    if (indefinite)
        out.sign = ConeSign::Indefinite;
    else if (sign > 0)
        out.sign = vanish ? ConeSign::Nonnegative : ConeSign::Positive;
    else
        out.sign = vanish ? ConeSign::Nonpositive : ConeSign::Negative;
    return out;
}

inline bool cone_nonpositive(ConeSign s) {
    return s == ConeSign::Negative || s == ConeSign::Nonpositive || s == ConeSign::Zero;
}
inline bool cone_nonnegative(ConeSign s) {
    return s == ConeSign::Positive || s == ConeSign::Nonnegative || s == ConeSign::Zero;
}
inline bool cone_strict(ConeSign s) { return s == ConeSign::Positive || s == ConeSign::Negative; }

// ---------------------------------------------------------------------------
// Monotonicity certificates.

enum class MonotoneVerdict { CertifiedMonotone, Refuted, Indefinite };

inline std::string to_string(MonotoneVerdict v) {
    switch (v) {
        case MonotoneVerdict::CertifiedMonotone: return "certified-monotone";
        case MonotoneVerdict::Refuted: return "refuted";
        default: return "indefinite";
    }
}

struct RefutationWitness {
    Rat l1, l2;
    Rat value;          // positive value of the offending coefficient
    std::string where;  // "reaction" or "c1"
};

struct MonotonicityCertificate {
    std::string velocity;
    std::string quantity;
    RatFn2 reaction;
    RatFn2 c1;
    SignCertificate reaction_cert;  // numerator residual of the reaction
    SignCertificate c1_cert;        // numerator residual of c1
    std::vector<ConeFactorCert> denominator_factor_certs;  // all factor certificates, labelled
    MonotoneVerdict verdict = MonotoneVerdict::Indefinite;
    std::optional<RefutationWitness> witness;
    // A refutation only means this maximum-principle argument fails for the
    // pair; it does not prove the quantity non-monotone.
    std::string note;
};

namespace detail {

// Search an exact rational point on the slice l2 = 1 (and its swap) where f
// is positive. Ratios cover 2^(-13) .. 2^13 on the eighth-of-an-octave grid.
inline std::optional<RefutationWitness> find_positive_witness(const RatFn2& f, const std::string& where) {
    for (int m = 0; m <= 104; ++m) {
        for (int s : {+1, -1}) {
            if (m == 0 && s < 0) continue;
            Rat x = dyadic_exp2(s * m);
            for (bool swap : {false, true}) {
                Rat a = swap ? Rat(1) : x;
                Rat b = swap ? x : Rat(1);
                if (a == b && m != 0) continue;
                try {
                    Rat val = f.eval_exact(a, b);
                    if (val > 0) return RefutationWitness{a, b, val, where};
                } catch (const PoleAtPoint&) {
                }
            }
        }
    }
    return std::nullopt;
}

struct NonpositivityOutcome {
    bool holds = false;
    bool refuted = false;
    SignCertificate numerator_cert;
    std::vector<ConeFactorCert> factor_certs;
    std::optional<RefutationWitness> witness;
};

// Certify f <= 0 on the open cone off the diagonal by clearing the certified
// denominator and certifying the numerator sign.
inline NonpositivityOutcome certify_nonpositive_off_diagonal(const RatFn2& f, const std::string& role) {
    NonpositivityOutcome out;
    if (f.is_zero()) {
        out.holds = true;
        out.numerator_cert = zero_certificate(/*as_nonpositive=*/true);
        return out;
    }
    ConeSignAnalysis den = cone_sign(f.den(), /*exclude_diagonal=*/true);
    for (auto fc : den.factors) {
        fc.factor = role + " denominator: " + fc.factor;
        out.factor_certs.push_back(std::move(fc));
    }
    if (den.residual) {
        ConeFactorCert fc;
        fc.factor = role + " denominator residual";
        fc.cert = *den.residual;
        out.factor_certs.push_back(std::move(fc));
    }
    if (!cone_strict(den.sign))
        throw IndefiniteFactor(role + ": denominator factor with indefinite sign on the cone");

    ConeSignAnalysis num = cone_sign(f.num(), /*exclude_diagonal=*/true);
    for (auto fc : num.factors) {
        fc.factor = role + " numerator: " + fc.factor;
        out.factor_certs.push_back(std::move(fc));
    }
    out.numerator_cert = *num.residual;

    bool need_nonpos = den.sign == ConeSign::Positive;
    bool ok = need_nonpos ? cone_nonpositive(num.sign) : cone_nonnegative(num.sign);
    if (ok) {
        out.holds = true;
        return out;
    }
    out.refuted = true;
    out.witness = find_positive_witness(f, role);
    return out;
}

}  // namespace detail

// Full exact certification that max w is non-increasing under the flow with
// velocity v: reaction <= 0 and c1 <= 0 (hence c2 <= 0 by the swap symmetry)
// on the open cone off the diagonal.
inline MonotonicityCertificate certify_monotone(const Velocity& v, const RatFn2& w) {
    CriticalForm cf = critical_form(v, w);
    MonotonicityCertificate cert;
    cert.velocity = v.f().to_string();
    cert.quantity = w.to_string();
    cert.reaction = cf.reaction;
    cert.c1 = cf.c1;
    cert.note =
        "refuted means this maximum-principle proof fails for the pair; "
        "it does not prove the quantity non-monotone";

    bool indefinite = false;
    detail::NonpositivityOutcome reaction_out, c1_out;
    try {
        reaction_out = detail::certify_nonpositive_off_diagonal(cf.reaction, "reaction");
    } catch (const IndefiniteFactor&) {
        indefinite = true;
    }
    try {
        c1_out = detail::certify_nonpositive_off_diagonal(cf.c1, "c1");
    } catch (const IndefiniteFactor&) {
        indefinite = true;
    }
    cert.reaction_cert = reaction_out.numerator_cert;
    cert.c1_cert = c1_out.numerator_cert;
    cert.denominator_factor_certs = reaction_out.factor_certs;
    cert.denominator_factor_certs.insert(cert.denominator_factor_certs.end(),
                                         c1_out.factor_certs.begin(), c1_out.factor_certs.end());

    if (reaction_out.refuted || c1_out.refuted) {
        cert.verdict = MonotoneVerdict::Refuted;
        cert.witness = reaction_out.witness ? reaction_out.witness : c1_out.witness;
        if (!cert.witness) cert.verdict = MonotoneVerdict::Indefinite;  // no rational witness found
        return cert;
    }
    if (indefinite || !reaction_out.holds || !c1_out.holds) {
        cert.verdict = MonotoneVerdict::Indefinite;
        return cert;
    }
    cert.verdict = MonotoneVerdict::CertifiedMonotone;
    return cert;
}

}  // namespace curvsieve
