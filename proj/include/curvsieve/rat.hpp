// Exact arithmetic base layer: arbitrary-precision integers and rationals.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace curvsieve {

using Int = mpz_class;
using Rat = mpq_class;

// Error hierarchy. Every named failure condition of the library is one of these.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NotSymmetric : Error { using Error::Error; };
struct NotHomogeneous : Error { using Error::Error; };
struct ZeroPolynomial : Error { using Error::Error; };
struct ZeroDenominator : Error { using Error::Error; };
struct PoleAtPoint : Error { using Error::Error; };
struct DiagonalPole : Error { using Error::Error; };
struct DegenerateGradient : Error { using Error::Error; };
struct DegenerateQuantity : Error { using Error::Error; };
struct IndefiniteFactor : Error { using Error::Error; };
struct ReductionFailure : Error { using Error::Error; };
struct EmptySpace : Error { using Error::Error; };
struct NotConvex : Error { using Error::Error; };
struct ConvexityLost : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };

inline int sign_of(const Rat& q) { return sgn(q); }
inline int sign_of(const Int& z) { return sgn(z); }

// Canonicalized fraction; the raw two-argument mpq_class constructor does
// not reduce and breaks equality comparisons.
inline Rat frac(long num, long den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// q^e with e >= 0.
inline Rat pow(const Rat& base, unsigned long e) {
    Rat r = 1;
    Rat b = base;
    unsigned long n = e;
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

inline Int pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rat& q) { return q.get_str(); }

inline Rat rat_from_string(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw Error("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

// Exact conversion; every finite double is a dyadic rational.
inline Rat rat_from_double(double x) { return Rat(x); }

// floor(2^16 * 2^(r/8)) / 2^16 for r in [0,8); exact and platform-independent.
inline Rat dyadic_exp2_eighth(int r) {
    // floor((2^(r+128))^(1/8)) = floor(2^16 * 2^(r/8))
    Int big = pow(Int(2), static_cast<unsigned long>(r + 128));
    Int root;
    mpz_root(root.get_mpz_t(), big.get_mpz_t(), 8);
    Rat q(root, pow(Int(2), 16));
    q.canonicalize();
    return q;
}

// 2^(m/8) as an exact dyadic rational (floor convention in the mantissa).
inline Rat dyadic_exp2(int m_eighths) {
    int k = m_eighths >= 0 ? m_eighths / 8 : -((-m_eighths + 7) / 8);
    int r = m_eighths - 8 * k;  // 0 <= r < 8
    Rat frac = dyadic_exp2_eighth(r);
    if (k >= 0) {
        frac *= Rat(pow(Int(2), static_cast<unsigned long>(k)));
    } else {
        frac /= Rat(pow(Int(2), static_cast<unsigned long>(-k)));
    }
    frac.canonicalize();
    return frac;
}

// SplitMix64: deterministic across platforms, used for all randomized testing.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // uniform in [lo, hi]
    long range(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // small random rational with numerator in [-max_num, max_num] and
    // denominator in [1, max_den], never zero unless allow_zero
    Rat rat(long max_num, long max_den, bool allow_zero = false) {
        for (;;) {
            Rat q(range(-max_num, max_num), range(1, max_den));
            q.canonicalize();
            if (allow_zero || q != 0) return q;
        }
    }

    // derive an independent stream (for per-candidate determinism)
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        Rng r(seed ^ (0x5851f42d4c957f2dULL * (index + 1)));
        r.next();
        return r.next();
    }
};

}  // namespace curvsieve
