// Rational functions in (l1, l2) over exact rationals, kept in canonical
// form: gcd(num, den) = 1, den a primitive integer polynomial whose leading
// (graded-lex) coefficient is positive.
#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "poly2.hpp"
#include "poly_gcd.hpp"

namespace curvsieve {

class RatFn2 {
  public:
    RatFn2() : num_(), den_(Rat(1)) {}
    explicit RatFn2(const Rat& c) : num_(c), den_(Rat(1)) {}
    explicit RatFn2(Poly2 n) : num_(std::move(n)), den_(Rat(1)) {}
    RatFn2(Poly2 n, Poly2 d) { normalize(std::move(n), std::move(d)); }

    const Poly2& num() const { return num_; }
    const Poly2& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

    friend RatFn2 operator+(const RatFn2& a, const RatFn2& b) {
        return RatFn2(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFn2 operator-(const RatFn2& a, const RatFn2& b) {
        return RatFn2(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    RatFn2 operator-() const {
        RatFn2 r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFn2 operator*(const RatFn2& a, const RatFn2& b) {
        return RatFn2(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFn2 operator/(const RatFn2& a, const RatFn2& b) {
        if (b.is_zero()) throw ZeroDenominator("division by zero rational function");
        return RatFn2(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend RatFn2 operator*(const Rat& c, const RatFn2& a) { return RatFn2(c * a.num_, a.den_); }
    RatFn2& operator+=(const RatFn2& o) { return *this = *this + o; }
    RatFn2& operator-=(const RatFn2& o) { return *this = *this - o; }
    RatFn2& operator*=(const RatFn2& o) { return *this = *this * o; }
    RatFn2& operator/=(const RatFn2& o) { return *this = *this / o; }

    RatFn2 pow(int e) const {
        if (e == 0) return RatFn2(Rat(1));
        if (e < 0) return RatFn2(Rat(1)) / pow(-e);
        RatFn2 r(Rat(1));
        RatFn2 b = *this;
        unsigned n = static_cast<unsigned>(e);
        while (n) {
            if (n & 1) r *= b;
            b *= b;
            n >>= 1;
        }
        return r;
    }

    // Canonical forms are unique, so equality is structural; this agrees with
    // cross-multiplication.
    friend bool operator==(const RatFn2& a, const RatFn2& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFn2& a, const RatFn2& b) { return !(a == b); }

    RatFn2 swapped() const {
        RatFn2 r;
        r.normalize(num_.swapped(), den_.swapped());
        return r;
    }
    bool is_symmetric() const { return *this == swapped(); }

    // Quotient rule; var 0 -> l1, 1 -> l2.
    RatFn2 derivative(int var) const {
        return RatFn2(num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
    }

    Rat eval_exact(const Rat& x, const Rat& y) const {
        Rat d = den_.eval(x, y);
        if (d == 0) throw PoleAtPoint("denominator vanishes at evaluation point");
        return num_.eval(x, y) / d;
    }

    std::optional<int> homogeneous_degree() const {
        if (num_.is_zero()) return std::nullopt;
        auto dn = num_.homogeneous_degree();
        auto dd = den_.homogeneous_degree();
        if (!dn || !dd) return std::nullopt;
        return *dn - *dd;
    }

    // f(1/l1, 1/l2) as a rational function.
    RatFn2 reciprocal_substitution() const {
        auto lift = [](const Poly2& p) {
            int di = 0, dj = 0;
            for (const auto& [e, c] : p.terms()) {
                di = std::max(di, e.i);
                dj = std::max(dj, e.j);
            }
            Poly2 q;
            for (const auto& [e, c] : p.terms()) q.add_term({di - e.i, dj - e.j}, c);
            return std::make_pair(q, Exp2{di, dj});
        };
        auto [qn, en] = lift(num_);
        auto [qd, ed] = lift(den_);
        // num(1/x,1/y)/den(1/x,1/y) = qn * x^ed.i y^ed.j / (qd * x^en.i y^en.j)
        return RatFn2(qn * Poly2::monomial(1, ed.i, ed.j), qd * Poly2::monomial(1, en.i, en.j));
    }

    std::string to_string() const {
        if (den_ == Poly2(Rat(1))) return num_.to_string();
        return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
    }
    friend std::ostream& operator<<(std::ostream& os, const RatFn2& f) { return os << f.to_string(); }

    friend bool operator<(const RatFn2& a, const RatFn2& b) {
        if (a.num_ != b.num_) return a.num_ < b.num_;
        return a.den_ < b.den_;
    }

  private:
    void normalize(Poly2 n, Poly2 d) {
        if (d.is_zero()) throw ZeroDenominator("zero denominator");
        if (n.is_zero()) {
            num_ = Poly2();
            den_ = Poly2(Rat(1));
            return;
        }
        Poly2 g = curvsieve::gcd(n, d);
        if (g.total_degree() > 0) {
            n = *divide_exact(n, g);
            d = *divide_exact(d, g);
        }
        // scale so the denominator is primitive-integer with positive leading
        Rat c = d.content();
        den_ = (Rat(1) / c) * d;
        num_ = (Rat(1) / c) * n;
    }

    Poly2 num_;
    Poly2 den_;
};

inline RatFn2 ratfn_normalize(Poly2 n, Poly2 d) { return RatFn2(std::move(n), std::move(d)); }

inline RatFn2 rf_l1() { return RatFn2(Poly2::l1()); }
inline RatFn2 rf_l2() { return RatFn2(Poly2::l2()); }
inline RatFn2 rf_H() { return RatFn2(poly_H()); }
inline RatFn2 rf_Q() { return RatFn2(poly_Q()); }
inline RatFn2 rf_K() { return RatFn2(poly_K()); }
inline RatFn2 rf_B(unsigned k) { return RatFn2(poly_B(k)); }

}  // namespace curvsieve
