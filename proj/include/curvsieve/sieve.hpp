// The four-step randomized sieve over candidate quantities w = p1/p2,
// followed by exact certification of the survivors.
//
//   1a  p1, p2 >= 0 on the positive cone        (sampled, exact rationals)
//   1b  p1 = 0 on the diagonal                  (sampled)
//   2   deg p1 > deg p2                         (structural)
//   3   w(1, x) decreasing for x < 1, increasing for x > 1 (sampled slice)
//   4a  reaction part of L log w <= 0           (sampled)
//   4b  gradient coefficients c1, c2 <= 0       (sampled)
#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "evolution.hpp"
#include "ratfn2.hpp"

namespace curvsieve {

struct CandidateSpace {
    int max_numerator_degree = 3;
    int max_denominator_degree = 2;
    std::vector<long> coefficient_set = {1};
    bool enforce_diff_squared_factor = true;
    std::uint64_t seed = 1;
    int samples_per_step = 1000;
};

enum class SieveStep { S1a, S1b, S2, S3, S4a, S4b };

inline const char* step_name(SieveStep s) {
    switch (s) {
        case SieveStep::S1a: return "1a";
        case SieveStep::S1b: return "1b";
        case SieveStep::S2: return "2";
        case SieveStep::S3: return "3";
        case SieveStep::S4a: return "4a";
        default: return "4b";
    }
}

inline const std::vector<SieveStep>& all_steps() {
    static const std::vector<SieveStep> steps = {SieveStep::S1a, SieveStep::S1b, SieveStep::S2,
                                                 SieveStep::S3,  SieveStep::S4a, SieveStep::S4b};
    return steps;
}

struct StepWitness {
    Rat l1, l2;
    Rat value;
};

struct StepVerdict {
    enum Kind { Pass, Fail, Skipped } kind = Skipped;
    std::optional<StepWitness> witness;
    std::string reason;
};

struct CandidateReport {
    RatFn2 candidate;
    std::map<SieveStep, StepVerdict> steps;
    std::optional<MonotonicityCertificate> certificate;

    bool passed_all() const {
        for (SieveStep s : all_steps()) {
            auto it = steps.find(s);
            if (it == steps.end() || it->second.kind != StepVerdict::Pass) return false;
        }
        return true;
    }
    std::string last_step_reached() const {
        std::string last = "-";
        for (SieveStep s : all_steps()) {
            auto it = steps.find(s);
            if (it != steps.end() && it->second.kind != StepVerdict::Skipped) last = step_name(s);
        }
        return last;
    }
};

struct StepTiming {
    long tests = 0;
    double seconds = 0;
};

struct SieveResult {
    std::vector<CandidateReport> reports;           // deterministic given (velocity, space, seed)
    std::map<SieveStep, StepTiming> timing;         // wall-clock, excluded from determinism
    long survivors = 0;
    long certified = 0;
};

// Symmetric homogeneous monomial basis of a given degree:
// l1^a l2^b + l1^b l2^a for a > b, l1^a l2^a for a == b.
inline std::vector<Poly2> symmetric_basis(int degree) {
    std::vector<Poly2> basis;
    for (int b = degree; 2 * b >= degree; --b) {
        int a = degree - b;  // a <= b
        Poly2 m = Poly2::monomial(1, b, a);
        if (a != b) m += Poly2::monomial(1, a, b);
        basis.push_back(m);
    }
    return basis;
}

// Deterministic enumeration of w = p1/p2 with p1 = (l1 - l2)^2 * q (when the
// factor is enforced), q and p2 symmetric homogeneous with coefficients drawn
// from the coefficient set (plus zero), duplicates after normalization removed.
inline std::vector<RatFn2> generate_candidates(const CandidateSpace& space) {
    if (space.max_numerator_degree <= space.max_denominator_degree)
        throw EmptySpace("candidate space needs max numerator degree > max denominator degree");
    if (space.coefficient_set.empty()) throw EmptySpace("empty coefficient set");

    std::vector<long> coeffs = {0};
    for (long c : space.coefficient_set)
        if (c != 0) coeffs.push_back(c);

    const Poly2 diff2 = poly_diff() * poly_diff();
    std::vector<RatFn2> out;
    std::set<RatFn2> seen;

    auto enumerate_polys = [&coeffs](int degree) {
        std::vector<Poly2> result;
        std::vector<Poly2> basis = symmetric_basis(degree);
        std::vector<size_t> odo(basis.size(), 0);
        for (;;) {
            Poly2 p;
            for (size_t k = 0; k < basis.size(); ++k)
                if (odo[k] > 0) p += Rat(coeffs[odo[k]]) * basis[k];
            if (!p.is_zero()) result.push_back(p);
            size_t k = 0;
            while (k < odo.size() && ++odo[k] == coeffs.size()) odo[k++] = 0;
            if (k == odo.size()) break;
        }
        return result;
    };

    int min_num_degree = space.enforce_diff_squared_factor ? 2 : 1;
    for (int dn = min_num_degree; dn <= space.max_numerator_degree; ++dn) {
        int qdeg = space.enforce_diff_squared_factor ? dn - 2 : dn;
        std::vector<Poly2> numerators = enumerate_polys(qdeg);
        for (int dd = 0; dd <= std::min(space.max_denominator_degree, dn - 1); ++dd) {
            std::vector<Poly2> denominators = enumerate_polys(dd);
            for (const Poly2& q : numerators) {
                Poly2 p1 = space.enforce_diff_squared_factor ? diff2 * q : q;
                for (const Poly2& p2 : denominators) {
                    RatFn2 w(p1, p2);
                    if (w.is_zero()) continue;
                    if (seen.insert(w).second) out.push_back(w);
                }
            }
        }
    }
    if (out.empty()) throw EmptySpace("no candidates in the given space");
    return out;
}

namespace detail {

struct SamplePoint {
    Rat x;       // l1 on the slice l2 = 1
    int m;       // exponent grid index, x = 2^(m/8) up to dyadic rounding
};

inline std::vector<SamplePoint> sample_points(std::uint64_t seed, int count) {
    Rng rng(seed);
    std::vector<SamplePoint> pts;
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
        int m = static_cast<int>(rng.range(-80, 80));
        pts.push_back({dyadic_exp2(m), m});
    }
    return pts;
}

inline UPoly restrict_l1_one(const Poly2& p) {
    std::vector<Rat> v;
    for (const auto& [e, c] : p.terms()) {
        if (static_cast<size_t>(e.j) >= v.size()) v.resize(e.j + 1);
        v[e.j] += c;
    }
    return UPoly(std::move(v));
}

}  // namespace detail

// Steps 1-4b for one candidate. Randomized with exact rational arithmetic;
// the report is deterministic given the seed.
inline CandidateReport screen_candidate(const Velocity& v, const RatFn2& w, std::uint64_t seed,
                                        int samples, std::map<SieveStep, StepTiming>* timing = nullptr) {
    CandidateReport report;
    report.candidate = w;
    for (SieveStep s : all_steps()) report.steps[s] = {};

    auto run_step = [&](SieveStep s, auto&& body) -> bool {
        auto t0 = std::chrono::steady_clock::now();
        long tests = 0;
        StepVerdict verdict;
        verdict.kind = StepVerdict::Pass;
        body(verdict, tests);
        report.steps[s] = verdict;
        if (timing) {
            auto& agg = (*timing)[s];
            agg.tests += tests;
            agg.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        return verdict.kind == StepVerdict::Pass;
    };

    std::vector<detail::SamplePoint> pts = detail::sample_points(seed, samples);

    // 1a: numerator and denominator nonnegative on the cone
    bool ok = run_step(SieveStep::S1a, [&](StepVerdict& verdict, long& tests) {
        for (const auto& pt : pts) {
            for (const Poly2* p : {&w.num(), &w.den()}) {
                for (bool swap : {false, true}) {
                    Rat val = swap ? p->eval(1, pt.x) : p->eval(pt.x, 1);
                    ++tests;
                    if (val < 0) {
                        verdict.kind = StepVerdict::Fail;
                        verdict.witness = StepWitness{swap ? Rat(1) : pt.x, swap ? pt.x : Rat(1), val};
                        verdict.reason = "negative value of p1 or p2";
                        return;
                    }
                }
            }
        }
    });

    // 1b: p1 vanishes on the diagonal
    if (ok) ok = run_step(SieveStep::S1b, [&](StepVerdict& verdict, long& tests) {
        for (const auto& pt : pts) {
            Rat val = w.num().eval(pt.x, pt.x);
            ++tests;
            if (val != 0) {
                verdict.kind = StepVerdict::Fail;
                verdict.witness = StepWitness{pt.x, pt.x, val};
                verdict.reason = "p1 does not vanish on the diagonal";
                return;
            }
        }
    });

    // 2: degree drop
    if (ok) ok = run_step(SieveStep::S2, [&](StepVerdict& verdict, long& tests) {
        ++tests;
        auto dn = w.num().homogeneous_degree();
        auto dd = w.den().homogeneous_degree();
        if (!dn || !dd) {
            verdict.kind = StepVerdict::Fail;
            verdict.reason = "candidate is not a ratio of homogeneous polynomials";
        } else if (*dn <= *dd) {
            verdict.kind = StepVerdict::Fail;
            verdict.reason = "deg p1 <= deg p2";
        }
    });

    // 3: slice monotonicity of w(1, x) around x = 1
    if (ok) ok = run_step(SieveStep::S3, [&](StepVerdict& verdict, long& tests) {
        UPoly n = detail::restrict_l1_one(w.num());
        UPoly d = detail::restrict_l1_one(w.den());
        UPoly num_of_deriv = n.derivative() * d - n * d.derivative();
        const Rat eighth(1, 8);
        for (const auto& pt : pts) {
            if (pt.x == 1) continue;
            ++tests;
            Rat dval = num_of_deriv.eval(pt.x);
            Rat dden = d.eval(pt.x);
            if (dden == 0) {
                verdict.kind = StepVerdict::Fail;
                verdict.witness = StepWitness{Rat(1), pt.x, Rat(0)};
                verdict.reason = "denominator vanishes on the slice";
                return;
            }
            int s = sign_of(dval) * sign_of(dden);
            int want = pt.x < 1 ? -1 : +1;
            bool near_diag = abs(pt.x - 1) < eighth;
            bool bad = near_diag ? (s != 0 && s != want) : (s != want);
            if (bad) {
                verdict.kind = StepVerdict::Fail;
                verdict.witness = StepWitness{Rat(1), pt.x, dval / dden};
                verdict.reason = "slice derivative has the wrong sign";
                return;
            }
        }
    });

    // 4a/4b need the critical form
    std::optional<CriticalForm> cf;
    if (ok) {
        try {
            cf = critical_form(v, w);
        } catch (const Error& e) {
            StepVerdict verdict;
            verdict.kind = StepVerdict::Fail;
            verdict.reason = std::string("critical form failed: ") + e.what();
            report.steps[SieveStep::S4a] = verdict;
            ok = false;
        }
    }

    auto eval_nonpositive = [&](const RatFn2& f, const detail::SamplePoint& pt, bool swap,
                                StepVerdict& verdict) -> bool {
        Rat a = swap ? Rat(1) : pt.x;
        Rat b = swap ? pt.x : Rat(1);
        try {
            Rat val = f.eval_exact(a, b);
            if (val > 0) {
                verdict.kind = StepVerdict::Fail;
                verdict.witness = StepWitness{a, b, val};
                verdict.reason = "positive value at sample";
                return false;
            }
        } catch (const PoleAtPoint&) {
            verdict.kind = StepVerdict::Fail;
            verdict.witness = StepWitness{a, b, Rat(0)};
            verdict.reason = "pole at off-diagonal sample";
            return false;
        }
        return true;
    };

    if (ok) ok = run_step(SieveStep::S4a, [&](StepVerdict& verdict, long& tests) {
        for (const auto& pt : pts) {
            if (pt.x == 1) continue;
            ++tests;
            if (!eval_nonpositive(cf->reaction, pt, false, verdict)) return;
        }
    });

    if (ok) run_step(SieveStep::S4b, [&](StepVerdict& verdict, long& tests) {
        for (const auto& pt : pts) {
            if (pt.x == 1) continue;
            tests += 2;
            if (!eval_nonpositive(cf->c1, pt, false, verdict)) return;  // c1 on (x, 1)
            if (!eval_nonpositive(cf->c1, pt, true, verdict)) return;   // c2 on (x, 1) by symmetry
        }
    });

    return report;
}

inline int worker_count() {
    if (const char* env = std::getenv("CURVSIEVE_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Screen every candidate in the space; certify survivors when asked. The
// report list is deterministic: each candidate owns a sub-seed derived from
// (seed, candidate index), so parallel and serial runs agree.
inline SieveResult run_sieve(const Velocity& v, const CandidateSpace& space, bool certify_survivors) {
    std::vector<RatFn2> candidates = generate_candidates(space);
    SieveResult result;
    result.reports.resize(candidates.size());

    int workers = std::min<int>(worker_count(), static_cast<int>(candidates.size()));
    std::vector<std::map<SieveStep, StepTiming>> timings(std::max(workers, 1));
    std::atomic<size_t> next{0};

    auto work = [&](int wid) {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= candidates.size()) break;
            std::uint64_t sub = Rng::derive(space.seed, i);
            CandidateReport rep =
                screen_candidate(v, candidates[i], sub, space.samples_per_step, &timings[wid]);
            if (rep.passed_all() && certify_survivors)
                rep.certificate = certify_monotone(v, candidates[i]);
            result.reports[i] = std::move(rep);
        }
    };

    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    for (const auto& tm : timings)
        for (const auto& [step, agg] : tm) {
            result.timing[step].tests += agg.tests;
            result.timing[step].seconds += agg.seconds;
        }
    for (const auto& rep : result.reports) {
        if (rep.passed_all()) ++result.survivors;
        if (rep.certificate && rep.certificate->verdict == MonotoneVerdict::CertifiedMonotone)
            ++result.certified;
    }
    return result;
}

}  // namespace curvsieve
