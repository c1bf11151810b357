// Dual-function alpha-concavity. For F positive on the cone set
// Phi(k1, k2) = -F(1/k1, 1/k2); Phi is alpha-concave when
//   Phi^{ij,kl} eta_ij eta_kl <= (alpha-1)/(alpha Phi) (Phi^{ij} eta_ij)^2
// for all symmetric eta. Over diagonal points this splits into the sign of
// the eta_12^2 coefficient plus negative semidefiniteness of a 2x2 form in
// (eta_11, eta_22), certified through trace and determinant numerators.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evolution.hpp"
#include "ratfn2.hpp"
#include "sturm.hpp"
#include "velocity.hpp"

namespace curvsieve {

struct ConcavityCertificate {
    std::string velocity;
    Rat alpha;
    bool holds = false;
    SignCertificate off_diag_cert;  // eta_12^2 coefficient <= 0
    SignCertificate trace_cert;     // trace(M) <= 0
    SignCertificate det_cert;       // det(M) >= 0
    std::vector<ConeFactorCert> factor_certs;
};

namespace detail {

struct SignClaim {
    bool holds = false;
    SignCertificate residual_cert;
    std::vector<ConeFactorCert> factor_certs;
};

// Certify f <= 0 (or >= 0) on the whole open cone, diagonal included.
inline SignClaim claim_sign_on_cone(const RatFn2& f, bool nonpositive, const std::string& role) {
    SignClaim out;
    if (f.is_zero()) {
        out.holds = true;
        out.residual_cert = zero_certificate(nonpositive);
        return out;
    }
    ConeSignAnalysis den = cone_sign(f.den(), /*exclude_diagonal=*/false);
    ConeSignAnalysis num = cone_sign(f.num(), /*exclude_diagonal=*/false);
    for (auto fc : den.factors) {
        fc.factor = role + " denominator: " + fc.factor;
        out.factor_certs.push_back(std::move(fc));
    }
    for (auto fc : num.factors) {
        fc.factor = role + " numerator: " + fc.factor;
        out.factor_certs.push_back(std::move(fc));
    }
    if (den.residual) {
        ConeFactorCert fc;
        fc.factor = role + " denominator residual";
        fc.cert = *den.residual;
        out.factor_certs.push_back(std::move(fc));
    }
    out.residual_cert = *num.residual;
    if (!cone_strict(den.sign)) return out;  // pole inside the domain: not certified
    bool num_needs_nonpos = (den.sign == ConeSign::Positive) == nonpositive;
    out.holds = num_needs_nonpos ? cone_nonpositive(num.sign) : cone_nonnegative(num.sign);
    return out;
}

}  // namespace detail

// Certify that the dual function of v is alpha-concave (alpha < 0, rational).
// Throws ReductionFailure when the eta_12^2 coefficient has indefinite sign.
inline ConcavityCertificate dual_concavity_certificate(const Velocity& v, const Rat& alpha) {
    if (alpha >= 0) throw Error("dual concavity is stated for alpha < 0");
    ConcavityCertificate cert;
    cert.velocity = v.f().to_string();
    cert.alpha = alpha;

    // Phi and its spectral derivatives in the dual curvature variables.
    RatFn2 phi = -v.f().reciprocal_substitution();
    RatFn2 p1 = phi.derivative(0);
    RatFn2 p2 = phi.derivative(1);
    RatFn2 p11 = p1.derivative(0);
    RatFn2 p12 = p1.derivative(1);
    RatFn2 p22 = p2.derivative(1);
    RatFn2 off = (p1 - p2) / RatFn2(poly_diff());

    RatFn2 s = RatFn2(Rat((alpha - 1) / alpha)) / phi;
    RatFn2 m11 = p11 - s * (p1 * p1);
    RatFn2 m12 = p12 - s * (p1 * p2);
    RatFn2 m22 = p22 - s * (p2 * p2);
    RatFn2 trace = m11 + m22;
    RatFn2 det = m11 * m22 - m12 * m12;

    detail::SignClaim off_claim = detail::claim_sign_on_cone(off, /*nonpositive=*/true, "eta12 coefficient");
    detail::SignClaim tr_claim = detail::claim_sign_on_cone(trace, /*nonpositive=*/true, "trace");
    detail::SignClaim det_claim = detail::claim_sign_on_cone(det, /*nonpositive=*/false, "determinant");

    cert.off_diag_cert = off_claim.residual_cert;
    cert.trace_cert = tr_claim.residual_cert;
    cert.det_cert = det_claim.residual_cert;
    for (auto* claim : {&off_claim, &tr_claim, &det_claim})
        cert.factor_certs.insert(cert.factor_certs.end(), claim->factor_certs.begin(),
                                 claim->factor_certs.end());

    if (!off_claim.holds && cert.off_diag_cert.verdict == SignVerdict::Indefinite)
        throw ReductionFailure("eta12^2 coefficient has indefinite sign on the cone");

    cert.holds = off_claim.holds && tr_claim.holds && det_claim.holds;
    return cert;
}

}  // namespace curvsieve
