// A normal velocity as a symmetric function of the principal curvatures,
// with its exact gradient and Hessian data.
//
// In coordinates where the second fundamental form is diagonal, the matrix
// derivative F^{ij} is diagonal with entries (df/dl1, df/dl2), and the
// second derivative acts on symmetric matrices eta as
//   F^{ij,kl} eta_ij eta_kl = sum_ab f_ab eta_aa eta_bb
//                             + 2 (f_1 - f_2)/(l1 - l2) * eta_12^2.
#pragma once

#include <array>

#include "ratfn2.hpp"

namespace curvsieve {

class Velocity {
  public:
    static Velocity from_expr(const RatFn2& f) {
        if (!f.is_symmetric()) throw NotSymmetric("velocity must be symmetric in (l1, l2)");
        Velocity v;
        v.f_ = f;
        v.grad_[0] = f.derivative(0);
        v.grad_[1] = f.derivative(1);
        v.hess_[0][0] = v.grad_[0].derivative(0);
        v.hess_[0][1] = v.grad_[0].derivative(1);
        v.hess_[1][0] = v.hess_[0][1];
        v.hess_[1][1] = v.grad_[1].derivative(1);
        RatFn2 diff = v.grad_[0] - v.grad_[1];
        v.hess_off_ = diff / RatFn2(poly_diff());
        if (divide_exact(v.hess_off_.den(), poly_diff()).has_value())
            throw DiagonalPole("second derivative has a pole on the diagonal l1 = l2");
        return v;
    }

    const RatFn2& f() const { return f_; }
    const RatFn2& grad(int i) const { return grad_[i]; }              // F^ii = df/dl_i
    const RatFn2& hess(int a, int b) const { return hess_[a][b]; }    // d2f/dl_a dl_b
    const RatFn2& hess_off() const { return hess_off_; }              // (F1 - F2)/(l1 - l2)

    // sum_i F^ii l_i^k
    RatFn2 grad_moment(unsigned k) const {
        return grad_[0] * RatFn2(Poly2::monomial(1, static_cast<int>(k), 0)) +
               grad_[1] * RatFn2(Poly2::monomial(1, 0, static_cast<int>(k)));
    }

  private:
    Velocity() = default;
    RatFn2 f_;
    std::array<RatFn2, 2> grad_;
    std::array<std::array<RatFn2, 2>, 2> hess_;
    RatFn2 hess_off_;
};

inline Velocity velocity_from_expr(const RatFn2& f) { return Velocity::from_expr(f); }

}  // namespace curvsieve
