// Exact bivariate polynomials in the principal curvatures (l1, l2).
//
// Canonical form: a term map ordered by graded lex with l1 > l2, leading
// term first, no zero coefficients stored. Two equal polynomials always
// have identical term maps.
#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rat.hpp"

namespace curvsieve {

struct Exp2 {
    int i = 0;  // exponent of l1
    int j = 0;  // exponent of l2

    int degree() const { return i + j; }
    friend bool operator==(const Exp2& a, const Exp2& b) { return a.i == b.i && a.j == b.j; }
};

// Graded lex with l1 > l2, largest term first under std::map iteration.
struct GrlexDescending {
    bool operator()(const Exp2& a, const Exp2& b) const {
        if (a.degree() != b.degree()) return a.degree() > b.degree();
        return a.i > b.i;
    }
};

class Poly2 {
  public:
    using TermMap = std::map<Exp2, Rat, GrlexDescending>;

    Poly2() = default;
    explicit Poly2(const Rat& c) {
        if (c != 0) terms_[{0, 0}] = c;
    }
    explicit Poly2(long c) : Poly2(Rat(c)) {}

    static Poly2 monomial(const Rat& c, int i, int j) {
        Poly2 p;
        if (c != 0) p.terms_[{i, j}] = c;
        return p;
    }
    static Poly2 l1() { return monomial(1, 1, 0); }
    static Poly2 l2() { return monomial(1, 0, 1); }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exp2{0, 0});
    }

    // Total degree; -1 for the zero polynomial.
    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, e.degree());
        return d;
    }

    std::optional<int> homogeneous_degree() const {
        if (terms_.empty()) return std::nullopt;  // degree of 0 undefined
        int d = terms_.begin()->first.degree();
        for (const auto& [e, c] : terms_)
            if (e.degree() != d) return std::nullopt;
        return d;
    }

    bool is_homogeneous() const { return homogeneous_degree().has_value(); }

    const Rat& leading_coefficient() const {
        static const Rat zero = 0;
        return terms_.empty() ? zero : terms_.begin()->second;
    }
    Exp2 leading_exponent() const { return terms_.empty() ? Exp2{0, 0} : terms_.begin()->first; }

    Poly2 operator-() const {
        Poly2 r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    Poly2& operator+=(const Poly2& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Poly2& operator-=(const Poly2& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }

    friend Poly2 operator*(const Poly2& a, const Poly2& b) {
        Poly2 r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term({ea.i + eb.i, ea.j + eb.j}, ca * cb);
        return r;
    }
    Poly2& operator*=(const Poly2& o) { return *this = *this * o; }

    friend Poly2 operator*(const Rat& c, const Poly2& p) {
        Poly2 r;
        if (c == 0) return r;
        r.terms_ = p.terms_;
        for (auto& [e, q] : r.terms_) q *= c;
        return r;
    }
    friend Poly2 operator*(const Poly2& p, const Rat& c) { return c * p; }

    Poly2 pow(unsigned e) const {
        Poly2 r(Rat(1));
        Poly2 b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    // var: 0 -> d/dl1, 1 -> d/dl2
    Poly2 derivative(int var) const {
        Poly2 r;
        for (const auto& [e, c] : terms_) {
            if (var == 0 && e.i > 0) r.add_term({e.i - 1, e.j}, c * e.i);
            if (var == 1 && e.j > 0) r.add_term({e.i, e.j - 1}, c * e.j);
        }
        return r;
    }

    Rat eval(const Rat& x, const Rat& y) const {
        // Cache powers; degrees stay small.
        int dx = 0, dy = 0;
        for (const auto& [e, c] : terms_) {
            dx = std::max(dx, e.i);
            dy = std::max(dy, e.j);
        }
        std::vector<Rat> px(dx + 1), py(dy + 1);
        px[0] = 1;
        py[0] = 1;
        for (int k = 1; k <= dx; ++k) px[k] = px[k - 1] * x;
        for (int k = 1; k <= dy; ++k) py[k] = py[k - 1] * y;
        Rat acc = 0;
        for (const auto& [e, c] : terms_) acc += c * px[e.i] * py[e.j];
        return acc;
    }

    Poly2 swapped() const {
        Poly2 r;
        for (const auto& [e, c] : terms_) r.terms_[{e.j, e.i}] = c;
        return r;
    }

    bool is_symmetric() const { return *this == swapped(); }

    // Substitute (l1, l2) -> (a, b) where a, b are polynomials themselves.
    Poly2 compose(const Poly2& a, const Poly2& b) const {
        int dx = 0, dy = 0;
        for (const auto& [e, c] : terms_) {
            dx = std::max(dx, e.i);
            dy = std::max(dy, e.j);
        }
        std::vector<Poly2> pa(dx + 1), pb(dy + 1);
        pa[0] = Poly2(Rat(1));
        pb[0] = Poly2(Rat(1));
        for (int k = 1; k <= dx; ++k) pa[k] = pa[k - 1] * a;
        for (int k = 1; k <= dy; ++k) pb[k] = pb[k - 1] * b;
        Poly2 acc;
        for (const auto& [e, c] : terms_) acc += c * (pa[e.i] * pb[e.j]);
        return acc;
    }

    friend bool operator==(const Poly2& a, const Poly2& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Poly2& a, const Poly2& b) { return !(a == b); }

    // Total order compatible with canonical form (for use as map keys).
    friend bool operator<(const Poly2& a, const Poly2& b) {
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        GrlexDescending lt;
        for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
            if (!(ia->first == ib->first)) return lt(ia->first, ib->first);
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return ib != b.terms_.end();
    }

    // gcd of coefficient numerators over lcm of denominators, signed like the
    // leading coefficient; content() of 0 is 0.
    Rat content() const {
        if (terms_.empty()) return 0;
        Int num_gcd = 0, den_lcm = 1;
        for (const auto& [e, c] : terms_) {
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        }
        Rat c(num_gcd, den_lcm);
        c.canonicalize();
        if (sign_of(leading_coefficient()) < 0) c = -c;
        return c;
    }

    // Primitive part: integer coefficients, coprime, positive leading coefficient.
    Poly2 primitive_part() const {
        if (terms_.empty()) return *this;
        Rat c = content();
        return (Rat(1) / c) * (*this);
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rat a = c;
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
            bool coeff_one = (a == 1) && e.degree() > 0;
            if (!coeff_one) os << curvsieve::to_string(a);
            bool need_star = !coeff_one;
            if (e.i > 0) {
                if (need_star) os << "*";
                os << "l1";
                if (e.i > 1) os << "^" << e.i;
                need_star = true;
            }
            if (e.j > 0) {
                if (need_star) os << "*";
                os << "l2";
                if (e.j > 1) os << "^" << e.j;
            }
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Poly2& p) { return os << p.to_string(); }

    void add_term(const Exp2& e, const Rat& c) {
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

  private:
    TermMap terms_;
};

inline bool is_swap_symmetric(const Poly2& p) { return p.is_symmetric(); }

// Convenient generators.
inline Poly2 poly_H() { return Poly2::l1() + Poly2::l2(); }
inline Poly2 poly_K() { return Poly2::l1() * Poly2::l2(); }
inline Poly2 poly_B(unsigned k) {
    return Poly2::monomial(1, static_cast<int>(k), 0) + Poly2::monomial(1, 0, static_cast<int>(k));
}
inline Poly2 poly_Q() { return poly_B(2); }
inline Poly2 poly_diff() { return Poly2::l1() - Poly2::l2(); }

// Single-divisor division with remainder in graded lex order.
// p = q*d + r where no term of r is divisible by the leading term of d.
inline std::pair<Poly2, Poly2> divrem(const Poly2& p, const Poly2& d) {
    if (d.is_zero()) throw ZeroDenominator("polynomial division by zero");
    Poly2 q, r;
    Poly2 work = p;
    const Exp2 de = d.leading_exponent();
    const Rat& dc = d.leading_coefficient();
    while (!work.is_zero()) {
        Exp2 we = work.leading_exponent();
        if (we.i >= de.i && we.j >= de.j) {
            Rat c = work.leading_coefficient() / dc;
            Exp2 m{we.i - de.i, we.j - de.j};
            q.add_term(m, c);
            work -= Poly2::monomial(c, m.i, m.j) * d;
        } else {
            r.add_term(we, work.leading_coefficient());
            work -= Poly2::monomial(work.leading_coefficient(), we.i, we.j);
        }
    }
    return {q, r};
}

// Exact quotient or nullopt when not divisible.
inline std::optional<Poly2> divide_exact(const Poly2& p, const Poly2& d) {
    auto [q, r] = divrem(p, d);
    if (!r.is_zero()) return std::nullopt;
    return q;
}

}  // namespace curvsieve
