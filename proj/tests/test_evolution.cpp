#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <curvsieve/evolution.hpp>
#include <curvsieve/expr.hpp>

using namespace curvsieve;

namespace {

RatFn2 rf(const char* text) { return parse_ratfn(text); }

// Table rows used throughout.
const char* kRow1 = "H*(2*Q - H^2)/(H^2 - Q)";                 // for F = Q and F = Q + beta H^2
const char* kRowH3 =
    "(l1^2 + l1*l2 + l2^2)*(l1+l2)^2*(l1-l2)^2/((l1^2 - l1*l2 + l2^2)*l1*l2)";
const char* kRowH4 = "(l1^2 + l1*l2 + l2^2)*(l1+l2)^6*(l1-l2)^2/(l1^2*l2^2)";
const char* kRowHA2 = "(l1+l2)^2*(l1-l2)^2/(l1*l2)";
const char* kRowA4 =
    "(l1^4 + 2*l1^3*l2 + 4*l1^2*l2^2 + 2*l1*l2^3 + l2^4)*(l1-l2)^2/((l1+l2)*l1*l2)";

// ---------------------------------------------------------------------------
// Independent pointwise oracle for the chain rule. A compound quantity is
// assembled from power sums with explicit product / reciprocal / log rules,
// all evaluated at an exact rational point; the engine's assembly must agree
// exactly, reaction and gradient blocks alike.

struct Mat2 {
    Rat m[2][2];
    friend bool operator==(const Mat2& a, const Mat2& b) {
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q)
                if (a.m[p][q] != b.m[p][q]) return false;
        return true;
    }
    Mat2 operator*(const Rat& s) const {
        Mat2 r;
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) r.m[p][q] = m[p][q] * s;
        return r;
    }
    Mat2 operator+(const Mat2& o) const {
        Mat2 r;
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) r.m[p][q] = m[p][q] + o.m[p][q];
        return r;
    }
};

struct PointExpr {
    Rat value;
    Rat g1[2];  // gradient in direction 1 over (D1, D2)
    Rat g2[2];  // gradient in direction 2 over (D3, D4)
    Rat reaction;
    Mat2 A, B;  // gradient blocks of L applied to this quantity
};

struct Point {
    Rat a, b;    // (l1, l2)
    Rat f1, f2;  // velocity gradient values
};

Mat2 eval_block_a(const GradQuadForm& g, const Point& pt) {
    Mat2 r;
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) r.m[p][q] = g.A[p][q].eval_exact(pt.a, pt.b);
    return r;
}
Mat2 eval_block_b(const GradQuadForm& g, const Point& pt) {
    Mat2 r;
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) r.m[p][q] = g.B[p][q].eval_exact(pt.a, pt.b);
    return r;
}

PointExpr power_sum_at(const Velocity& v, int m, const Point& pt) {
    PointExpr e;
    e.value = pow(pt.a, m) + pow(pt.b, m);
    e.g1[0] = Rat(m) * pow(pt.a, m - 1);
    e.g1[1] = Rat(m) * pow(pt.b, m - 1);
    e.g2[0] = e.g1[0];
    e.g2[1] = e.g1[1];
    EvolutionExpr L = evolve_power_sum(v, m);
    e.reaction = L.reaction.eval_exact(pt.a, pt.b);
    e.A = eval_block_a(L.grad, pt);
    e.B = eval_block_b(L.grad, pt);
    return e;
}

// F^{kl} f_{;k} g_{;l} as gradient blocks at the point.
void grad_product_blocks(const PointExpr& f, const PointExpr& g, const Point& pt, Mat2& A, Mat2& B) {
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            A.m[p][q] = pt.f1 * (f.g1[p] * g.g1[q] + f.g1[q] * g.g1[p]) / 2;
            B.m[p][q] = pt.f2 * (f.g2[p] * g.g2[q] + f.g2[q] * g.g2[p]) / 2;
        }
}

PointExpr scale(const PointExpr& f, const Rat& s) {
    PointExpr e = f;
    e.value *= s;
    for (int k = 0; k < 2; ++k) {
        e.g1[k] *= s;
        e.g2[k] *= s;
    }
    e.reaction *= s;
    e.A = e.A * s;
    e.B = e.B * s;
    return e;
}

PointExpr add(const PointExpr& f, const PointExpr& g) {
    PointExpr e;
    e.value = f.value + g.value;
    for (int k = 0; k < 2; ++k) {
        e.g1[k] = f.g1[k] + g.g1[k];
        e.g2[k] = f.g2[k] + g.g2[k];
    }
    e.reaction = f.reaction + g.reaction;
    e.A = f.A + g.A;
    e.B = f.B + g.B;
    return e;
}

// L(fg) = f Lg + g Lf - 2 F^{kl} f_{;k} g_{;l}
PointExpr product(const PointExpr& f, const PointExpr& g, const Point& pt) {
    PointExpr e;
    e.value = f.value * g.value;
    for (int k = 0; k < 2; ++k) {
        e.g1[k] = f.value * g.g1[k] + g.value * f.g1[k];
        e.g2[k] = f.value * g.g2[k] + g.value * f.g2[k];
    }
    e.reaction = f.value * g.reaction + g.value * f.reaction;
    Mat2 pa, pb;
    grad_product_blocks(f, g, pt, pa, pb);
    e.A = f.A * g.value + g.A * f.value + pa * Rat(-2);
    e.B = f.B * g.value + g.B * f.value + pb * Rat(-2);
    return e;
}

// L(log h) = (L h)/h + F^{kl} h_{;k} h_{;l} / h^2
PointExpr log_of(const PointExpr& h, const Point& pt) {
    PointExpr e;
    e.value = 0;  // unused
    for (int k = 0; k < 2; ++k) {
        e.g1[k] = h.g1[k] / h.value;
        e.g2[k] = h.g2[k] / h.value;
    }
    e.reaction = h.reaction / h.value;
    Mat2 pa, pb;
    grad_product_blocks(h, h, pt, pa, pb);
    Rat inv2 = Rat(1) / (h.value * h.value);
    e.A = h.A * (Rat(1) / h.value) + pa * inv2;
    e.B = h.B * (Rat(1) / h.value) + pb * inv2;
    return e;
}

}  // namespace

TEST_CASE("velocity construction") {
    Velocity q = velocity_from_expr(rf("Q"));
    CHECK(q.grad(0) == rf("2*l1"));
    CHECK(q.hess_off() == RatFn2(Rat(2)));

    Velocity h = velocity_from_expr(rf("H"));
    CHECK(h.grad(0) == RatFn2(Rat(1)));
    CHECK(h.hess(0, 0).is_zero());
    CHECK(h.hess_off().is_zero());

    Velocity h3 = velocity_from_expr(rf("H^3"));
    CHECK(h3.grad(0) == rf("3*H^2"));
    CHECK(h3.hess_off().is_zero());

    Velocity k = velocity_from_expr(rf("K"));
    CHECK(k.grad(0) == rf_l2());
    CHECK(k.hess_off() == RatFn2(Rat(-1)));

    CHECK_THROWS_AS(velocity_from_expr(rf("l1^2*l2")), NotSymmetric);
    CHECK_THROWS_AS(velocity_from_expr(rf("H/(l1-l2)^2")), DiagonalPole);
    // smooth despite the vanishing numerator factor on the diagonal
    CHECK(velocity_from_expr(rf("(l1-l2)^2/H")).hess_off() == rf("4/H"));
}

TEST_CASE("evolution of H and Q under F = Q") {
    Velocity v = velocity_from_expr(rf("Q"));

    EvolutionExpr lh = evolve_power_sum(v, 1);
    CHECK(lh.reaction == rf("2*H*B(3) - Q^2"));
    GradQuadForm expected = RatFn2(Rat(2)) * weighted_grad_square_sum(RatFn2(Rat(1)), RatFn2(Rat(1)), 0, 0);
    CHECK(lh.grad.A[0][0] == expected.A[0][0]);
    CHECK(lh.grad.A[1][1] == expected.A[1][1]);
    CHECK(lh.grad.A[0][1] == expected.A[0][1]);
    CHECK(lh.grad.B[0][0] == expected.B[0][0]);
    CHECK(lh.grad.B[1][1] == expected.B[1][1]);

    EvolutionExpr lq = evolve_power_sum(v, 2);
    CHECK(lq.reaction == rf("2*Q*B(3)"));
    CHECK(lq.grad.is_zero());  // exact cancellation of the gradient terms
}

TEST_CASE("evolution of H under F = H^3") {
    Velocity v = velocity_from_expr(rf("H^3"));
    EvolutionExpr lh = evolve_power_sum(v, 1);
    CHECK(lh.reaction == rf("H^3*Q"));
    // 6 H sum_k (h11;k + h22;k)^2
    RatFn2 sixH = rf("6*H");
    CHECK(lh.grad.A[0][0] == sixH);
    CHECK(lh.grad.A[0][1] == sixH);
    CHECK(lh.grad.A[1][1] == sixH);
    CHECK(lh.grad.B[0][0] == sixH);
    CHECK(lh.grad.B[0][1] == sixH);
    CHECK(lh.grad.B[1][1] == sixH);
}

TEST_CASE("evolution of Q under F = H^3") {
    Velocity v = velocity_from_expr(rf("H^3"));
    EvolutionExpr lq = evolve_power_sum(v, 2);
    CHECK(lq.reaction == rf("6*H^2*Q^2 - 4*H^3*B(3)"));
    // -6 H^2 sum h_{ij;k}^2 + 12 H sum l_k h_{ii;k} h_{jj;k}
    GradQuadForm expected =
        RatFn2(Rat(-6)) * (rf("H^2") * weighted_grad_square_sum(RatFn2(Rat(1)), RatFn2(Rat(1)), 0, 0)) +
        RatFn2(Rat(12)) * (rf("H") * weighted_grad_diag_sum(rf_l1(), rf_l2(), 0, 0));
    CHECK((lq.grad - expected).is_zero());
}

TEST_CASE("power sum evolutions for the beta family") {
    long beta = 3;
    Velocity v = velocity_from_expr(rf("Q") + Rat(beta) * rf("H^2"));
    RatFn2 b{Rat(beta)};

    EvolutionExpr lh = evolve_power_sum(v, 1);
    CHECK(lh.reaction == rf("2*H*B(3) - Q^2") + b * rf("Q*H^2"));
    GradQuadForm gh_expected =
        RatFn2(Rat(2)) * weighted_grad_square_sum(RatFn2(Rat(1)), RatFn2(Rat(1)), 0, 0) +
        (Rat(2) * b) * weighted_grad_diag_sum(RatFn2(Rat(1)), RatFn2(Rat(1)), 0, 0);
    CHECK((lh.grad - gh_expected).is_zero());

    EvolutionExpr lq = evolve_power_sum(v, 2);
    CHECK(lq.reaction == rf("2*Q*B(3)") + b * (rf("4*Q^2*H") - rf("2*H^2*B(3)")));
    GradQuadForm gq_expected =
        (Rat(-4) * b) * (rf("H") * weighted_grad_square_sum(RatFn2(Rat(1)), RatFn2(Rat(1)), 0, 0)) +
        (Rat(4) * b) * weighted_grad_diag_sum(rf_l1(), rf_l2(), 0, 0);
    CHECK((lq.grad - gq_expected).is_zero());
}

TEST_CASE("gradient blocks carry the swap covariance") {
    // Swapping l1 <-> l2 and (D1, D2, D3, D4) -> (D4, D3, D2, D1) fixes the
    // expression: B[p][q] equals A[1-p][1-q] with the variables swapped.
    for (const char* vel : {"Q", "H^3", "B(4)"}) {
        Velocity v = velocity_from_expr(rf(vel));
        EvolutionExpr ev = evolve_quantity(v, rf(kRow1), true);
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q)
                CHECK(ev.grad.B[p][q] == ev.grad.A[1 - p][1 - q].swapped());
    }
}

TEST_CASE("evolve_quantity is consistent with evolve_power_sum") {
    Velocity v = velocity_from_expr(rf("Q"));
    EvolutionExpr direct = evolve_power_sum(v, 2);
    EvolutionExpr via = evolve_quantity(v, rf("Q"), /*log_scale=*/false);
    CHECK(via.reaction == direct.reaction);
    CHECK((via.grad - direct.grad).is_zero());

    CHECK_THROWS_AS(evolve_quantity(v, RatFn2(), true), DegenerateQuantity);
    CHECK_THROWS_AS(evolve_quantity(v, rf("l1^2*l2"), true), NotSymmetric);
}

TEST_CASE("higher power sums agree with their H/Q chain-rule route") {
    // B3 = (3/2) H Q - (1/2) H^3 and B4 = Q^2/2 + H^2 Q - H^4/2 give a second,
    // fully independent path to L B_alpha for alpha >= 3.
    for (const char* velocity : {"Q", "H^3", "K"}) {
        Velocity v = velocity_from_expr(rf(velocity));
        for (int alpha : {3, 4, 5}) {
            EvolutionExpr direct = evolve_power_sum(v, alpha);
            EvolutionExpr via = evolve_quantity(v, rf_B(alpha), /*log_scale=*/false);
            CHECK(direct.reaction == via.reaction);
            CHECK((direct.grad - via.grad).is_zero());
        }
    }
}

TEST_CASE("chain rule agrees with an independent compound assembly") {
    // w = H (2Q - H^2) / (H^2 - Q): log w = log H + log(2Q - H^2) - log(H^2 - Q)
    for (const char* vel : {"Q", "H^3", "B(3)", "K"}) {
        Velocity v = velocity_from_expr(rf(vel));
        EvolutionExpr engine = evolve_quantity(v, rf(kRow1), /*log_scale=*/true);
        Rng rng(123);
        for (int round = 0; round < 6; ++round) {
            Point pt;
            pt.a = frac(rng.range(1, 30), rng.range(1, 7));
            pt.b = frac(rng.range(1, 30), rng.range(1, 7));
            if (pt.a == pt.b) continue;
            pt.f1 = v.grad(0).eval_exact(pt.a, pt.b);
            pt.f2 = v.grad(1).eval_exact(pt.a, pt.b);

            PointExpr H1 = power_sum_at(v, 1, pt);
            PointExpr Q2 = power_sum_at(v, 2, pt);
            PointExpr B = add(scale(Q2, 2), scale(product(H1, H1, pt), -1));  // 2Q - H^2
            PointExpr C = add(product(H1, H1, pt), scale(Q2, -1));            // H^2 - Q
            PointExpr logw = add(add(log_of(H1, pt), log_of(B, pt)), scale(log_of(C, pt), -1));

            CHECK(engine.reaction.eval_exact(pt.a, pt.b) == logw.reaction);
            CHECK(eval_block_a(engine.grad, pt) == logw.A);
            CHECK(eval_block_b(engine.grad, pt) == logw.B);
        }
    }
}

TEST_CASE("assembled reaction matches the displayed intermediate form") {
    // Before the critical-point reduction, L log w for F = Q and the flagship
    // quantity reads cH * (L H) + cQ * (L Q) with the printed coefficients.
    Velocity v = velocity_from_expr(rf("Q"));
    EvolutionExpr ev = evolve_quantity(v, rf(kRow1), /*log_scale=*/true);
    RatFn2 cH = rf("-(l1^4 + l1^3*l2 + 4*l1^2*l2^2 + l1*l2^3 + l2^4)"
                   "/((l1+l2)*(l1-l2)^2*l1*l2)");
    RatFn2 cQ = rf("(l1+l2)^2/(2*(l1-l2)^2*l1*l2)");
    CHECK(ev.reaction == cH * rf("2*H*B(3) - Q^2") + cQ * rf("2*Q*B(3)"));
}

TEST_CASE("critical point ratios printed in the worked cases") {
    RatFn2 a1 = critical_point_ratio(rf(kRow1));
    CHECK(a1 == rf("(l2/l1) * (2*l1^2 + l1*l2 + l2^2) / (2*l2^2 + l1*l2 + l1^2)"));

    RatFn2 a1_h3 = critical_point_ratio(rf(kRowH3));
    CHECK(a1_h3 ==
          rf("(l2/l1) * (3*l1^6 - 2*l1^5*l2 + 4*l1^4*l2^2 + 4*l1^3*l2^3 + 4*l1^2*l2^4 - 2*l1*l2^5 + l2^6)"
             " / (3*l2^6 - 2*l2^5*l1 + 4*l2^4*l1^2 + 4*l2^3*l1^3 + 4*l2^2*l1^4 - 2*l2*l1^5 + l1^6)"));

    RatFn2 a1_h4 = critical_point_ratio(rf(kRowH4));
    CHECK(a1_h4 ==
          rf("(l2/l1) * (8*l1^4 + 3*l1^3*l2 + 2*l1^2*l2^2 - 3*l1*l2^3 + 2*l2^4)"
             " / (8*l2^4 + 3*l2^3*l1 + 2*l2^2*l1^2 - 3*l2*l1^3 + 2*l1^4)"));

    RatFn2 a1_a4 = critical_point_ratio(rf(kRowA4));
    CHECK(a1_a4 ==
          rf("(l2/l1) * (4*l1^6 + 9*l1^5*l2 + 11*l1^4*l2^2 + 10*l1^3*l2^3 + 2*l1^2*l2^4 + 3*l1*l2^5 + l2^6)"
             " / (4*l2^6 + 9*l2^5*l1 + 11*l2^4*l1^2 + 10*l2^3*l1^3 + 2*l2^2*l1^4 + 3*l2*l1^5 + l1^6)"));

    RatFn2 a1_ha2 = critical_point_ratio(rf(kRowHA2));
    CHECK(a1_ha2 == rf("(l2/l1) * (3*l1^2 + l2^2) / (3*l2^2 + l1^2)"));

    // B4's quantity from the same family
    RatFn2 a1_b4 = critical_point_ratio(rf("(l1^2 + l2^2)*(l1+l2)*(l1-l2)^2/(l1*l2)"));
    CHECK(a1_b4 ==
          rf("(l2/l1) * (4*l1^4 + l1^3*l2 + l1^2*l2^2 + l1*l2^3 + l2^4)"
             " / (4*l2^4 + l2^3*l1 + l2^2*l1^2 + l2*l1^3 + l1^4)"));

    CHECK_THROWS_AS(critical_point_ratio(RatFn2(Rat(3))), DegenerateGradient);
}

TEST_CASE("critical form for F = Q reproduces the printed coefficients exactly") {
    Velocity v = velocity_from_expr(rf("Q"));
    CriticalForm cf = critical_form(v, rf(kRow1));

    CHECK(cf.reaction == rf("-4*K^2/H"));

    RatFn2 printed_c1(
        Poly2(Rat(-2)) * parse_poly("(5*l1^8 - 4*l1^7*l2 + 46*l1^6*l2^2 + 48*l1^5*l2^3 + 72*l1^4*l2^4"
                                    " + 44*l1^3*l2^5 + 34*l1^2*l2^6 + 8*l1*l2^7 + 3*l2^8) * l2"),
        parse_poly("(l1+l2) * (l1-l2)^2 * (l1^2 + l1*l2 + 2*l2^2)^2 * l1^3"));
    CHECK(cf.c1 == printed_c1);
    CHECK(cf.c2 == cf.c1.swapped());
}

TEST_CASE("critical form for F = Q + beta H^2") {
    for (long beta : {0L, 1L, 2L, 5L}) {
        Velocity v = velocity_from_expr(rf("Q") + Rat(beta) * rf("H^2"));
        CriticalForm cf = critical_form(v, rf(kRow1));
        CHECK(cf.reaction == rf("-4*K^2/H") - Rat(2 * beta) * rf("H*K"));
    }
}

TEST_CASE("critical form reactions of other worked velocities") {
    {
        Velocity v = velocity_from_expr(rf("H*Q"));
        CriticalForm cf = critical_form(v, rf(kRowHA2));
        CHECK(cf.reaction == rf("-8*l1^2*l2^2"));
    }
    {
        // the improved convergence-rate quantity: reaction vanishes identically
        Velocity v = velocity_from_expr(rf("Q"));
        CriticalForm cf = critical_form(v, rf("Q^2*(l1-l2)^2/(4*K^2)"));
        CHECK(cf.reaction.is_zero());
    }
}

TEST_CASE("swap covariance and homogeneity bookkeeping") {
    struct Case {
        const char* vel;
        const char* qty;
    };
    const Case cases[] = {
        {"Q", kRow1}, {"H^3", kRowH3}, {"H^4", kRowH4}, {"H*Q", kRowHA2}, {"Q^2", kRowA4},
        {"B(4)", "(l1^2+l2^2)*(l1+l2)*(l1-l2)^2/(l1*l2)"},
    };
    for (const auto& c : cases) {
        Velocity v = velocity_from_expr(rf(c.vel));
        int ch = *v.f().homogeneous_degree();
        CriticalForm cf = critical_form(v, rf(c.qty));
        CHECK(cf.c2 == cf.c1.swapped());
        CHECK(cf.reaction.homogeneous_degree() == ch + 1);
        CHECK(cf.c1.homogeneous_degree() == ch - 3);
    }
}

TEST_CASE("gradient substitution identities hold for sampled exponents") {
    RatFn2 a1 = critical_point_ratio(rf(kRow1));
    RatFn2 a2 = a1.swapped();
    auto mono = [](int i, int j) { return RatFn2(Poly2::monomial(1, i, j)); };
    for (int al = 0; al <= 2; ++al)
        for (int be = 0; be <= 2; ++be)
            for (int ga = 0; ga <= 2; ++ga) {
                GradQuadForm sq = weighted_grad_square_sum(mono(ga, 0), mono(0, ga), al, be);
                RatFn2 lhs = sq.collapse_block_a(a1);
                RatFn2 rhs = mono(al + be + ga, 0) +
                             a1 * a1 *
                                 (mono(al, be + ga) + mono(be, al) * mono(0, ga) + mono(ga, al + be));
                CHECK(lhs == rhs);
                RatFn2 lhs_b = sq.collapse_block_b(a2);
                RatFn2 rhs_b = mono(0, al + be + ga) +
                               a2 * a2 *
                                   (mono(be + ga, al) + mono(al, be) * mono(ga, 0) + mono(al + be, ga));
                CHECK(lhs_b == rhs_b);

                GradQuadForm di = weighted_grad_diag_sum(mono(ga, 0), mono(0, ga), al, be);
                RatFn2 dlhs = di.collapse_block_a(a1);
                RatFn2 drhs = (mono(al, 0) + a1 * mono(0, al)) * (mono(be, 0) + a1 * mono(0, be)) *
                              mono(ga, 0);
                CHECK(dlhs == drhs);
            }
}

TEST_CASE("monotonicity certificates") {
    Velocity q = velocity_from_expr(rf("Q"));

    MonotonicityCertificate good = certify_monotone(q, rf(kRow1));
    CHECK(good.verdict == MonotoneVerdict::CertifiedMonotone);
    CHECK(good.reaction_cert.nonpositive());
    CHECK(good.c1_cert.nonpositive());

    MonotonicityCertificate k_row = certify_monotone(velocity_from_expr(rf("K")), rf("(l1-l2)^2"));
    CHECK(k_row.verdict == MonotoneVerdict::CertifiedMonotone);

    // beta = 6 lies beyond the sharp threshold
    Velocity beta6 = velocity_from_expr(rf("Q + 6*H^2"));
    MonotonicityCertificate bad = certify_monotone(beta6, rf(kRow1));
    CHECK(bad.verdict == MonotoneVerdict::Refuted);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->value > 0);
    // replay the witness against the certificate's own coefficient
    RatFn2 offending = bad.witness->where == "reaction" ? bad.reaction : bad.c1;
    CHECK(offending.eval_exact(bad.witness->l1, bad.witness->l2) == bad.witness->value);

    // the excluded member of the tr A^alpha family
    Velocity b3 = velocity_from_expr(rf("B(3)"));
    MonotonicityCertificate bad2 = certify_monotone(b3, rf("H^2*(l1-l2)^2/K"));
    CHECK(bad2.verdict == MonotoneVerdict::Refuted);
    REQUIRE(bad2.witness.has_value());
    CHECK(bad2.witness->value > 0);
}

TEST_CASE("improved convergence-rate quantity for F = Q") {
    Velocity q = velocity_from_expr(rf("Q"));
    RatFn2 w = rf("Q^2*(l1-l2)^2/(4*K^2)");
    MonotonicityCertificate cert = certify_monotone(q, w);
    CHECK(cert.verdict == MonotoneVerdict::CertifiedMonotone);

    Poly2 p9 = parse_poly(
        "5*l1^9 - 3*l1^8*l2 - 6*l1^7*l2^2 + 26*l1^6*l2^3 - 20*l1^5*l2^4 + 8*l1^4*l2^5"
        " + 6*l1^3*l2^6 - 2*l1^2*l2^7 - l1*l2^8 + 3*l2^9");
    auto quotient = divide_exact(-cert.c1.num(), p9);
    REQUIRE(quotient.has_value());
    CHECK(quotient->terms().size() == 1);  // a single positive monomial factor
    CHECK(sign_of(quotient->leading_coefficient()) > 0);
}
