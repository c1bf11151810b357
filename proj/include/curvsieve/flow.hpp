// Axisymmetric support-function flow solver.
//
// A convex surface of revolution is stored through its support function
// s(theta) on [0, pi], theta the polar angle of the unit normal, expanded in
// cosine modes (which enforces s'(0) = s'(pi) = 0). The principal radii are
//   r1 = s'' + s   (meridional),   r2 = s' cot(theta) + s   (azimuthal),
// principal curvatures lambda_i = 1/r_i, and the flow is d s/dt = -F.
// Time stepping is classical RK4 with a CFL bound from the linearized
// diffusion coefficient sum_i F^i lambda_i^2.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ratfn2.hpp"
#include "velocity.hpp"

namespace curvsieve {

// Fast double-precision evaluator compiled from an exact rational function.
class RatFnEval {
  public:
    RatFnEval() = default;
    explicit RatFnEval(const RatFn2& f) {
        for (const auto& [e, c] : f.num().terms()) num_.push_back({c.get_d(), e.i, e.j});
        for (const auto& [e, c] : f.den().terms()) den_.push_back({c.get_d(), e.i, e.j});
    }

    double operator()(double x, double y) const {
        return eval_terms(num_, x, y) / eval_terms(den_, x, y);
    }

  private:
    struct Term {
        double c;
        int i, j;
    };
    static double eval_terms(const std::vector<Term>& terms, double x, double y) {
        double acc = 0;
        for (const auto& t : terms) {
            double v = t.c;
            for (int k = 0; k < t.i; ++k) v *= x;
            for (int k = 0; k < t.j; ++k) v *= y;
            acc += v;
        }
        return acc;
    }
    std::vector<Term> num_, den_;
};

// Collocation at the midpoint grid theta_j = pi (j + 1/2) / N with the cosine
// basis cos(k theta); DCT-II/III pair gives exact synthesis/analysis.
class CosineGrid {
  public:
    explicit CosineGrid(int n) : n_(n), theta_(n), cosk_(n * n), sink_(n * n) {
        for (int j = 0; j < n_; ++j) theta_[j] = M_PI * (j + 0.5) / n_;
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k) {
                cosk_[j * n_ + k] = std::cos(k * theta_[j]);
                sink_[j * n_ + k] = std::sin(k * theta_[j]);
            }
    }

    int size() const { return n_; }
    const std::vector<double>& nodes() const { return theta_; }
    double dtheta() const { return M_PI / n_; }

    void synthesize(const std::vector<double>& modes, std::vector<double>& s,
                    std::vector<double>& ds, std::vector<double>& dds) const {
        s.assign(n_, 0.0);
        ds.assign(n_, 0.0);
        dds.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) {
            double a = 0, b = 0, c = 0;
            const double* ck = &cosk_[j * n_];
            const double* sk = &sink_[j * n_];
            for (int k = 0; k < n_; ++k) {
                a += modes[k] * ck[k];
                b -= modes[k] * k * sk[k];
                c -= modes[k] * k * k * ck[k];
            }
            s[j] = a;
            ds[j] = b;
            dds[j] = c;
        }
    }

    std::vector<double> analyze(const std::vector<double>& values) const {
        std::vector<double> modes(n_, 0.0);
        for (int k = 0; k < n_; ++k) {
            double acc = 0;
            for (int j = 0; j < n_; ++j) acc += values[j] * cosk_[j * n_ + k];
            modes[k] = acc * (k == 0 ? 1.0 : 2.0) / n_;
        }
        return modes;
    }

    // Evaluate a mode vector at an arbitrary angle.
    static double value_at(const std::vector<double>& modes, double theta) {
        double acc = 0;
        for (size_t k = 0; k < modes.size(); ++k) acc += modes[k] * std::cos(k * theta);
        return acc;
    }

  private:
    int n_;
    std::vector<double> theta_;
    std::vector<double> cosk_, sink_;
};

struct CurvatureProfile {
    std::vector<double> lambda1, lambda2;  // meridional, azimuthal
};

struct FlowState {
    double time = 0;
    std::vector<double> modes;
    int grid_size = 0;
};

struct SeriesRow {
    double t = 0;
    double max_w = 0;
    double min_lambda = 0;
    double max_lambda = 0;
    double pinch_ratio = 1;
    double inner_radius = 0;
    double outer_radius = 0;
    double max_f = 0;
};

struct InitProfile {
    enum Kind { Sphere, Perturbed, Oblate } kind = Sphere;
    double radius = 1;     // sphere / perturbed
    int legendre_l = 2;    // perturbed
    double amplitude = 0;  // perturbed
    double a = 1, c = 1;   // oblate semi-axes (equatorial, polar)

    static InitProfile sphere(double r) { return {Sphere, r, 2, 0, 1, 1}; }
    static InitProfile perturbed(double r, int l, double amp) { return {Perturbed, r, l, amp, 1, 1}; }
    static InitProfile oblate(double a, double c) { return {Oblate, 1, 2, 0, a, c}; }
};

inline double legendre_p(int l, double x) {
    double p0 = 1, p1 = x;
    if (l == 0) return p0;
    if (l == 1) return p1;
    for (int k = 2; k <= l; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

class FlowSolver {
  public:
    // Diagnostics (max w, radii, pinch ratio) are sampled on a fixed grid of
    // diag_size angles independent of the solver resolution, so reported
    // series converge spectrally under grid refinement.
    FlowSolver(const Velocity& v, int grid_size, double cfl = 0.2, int diag_size = 256)
        : grid_(grid_size), cfl_(cfl), f_(v.f()), f1_(v.grad(0)), f2_(v.grad(1)) {
        diag_theta_.resize(diag_size);
        diag_cos_.resize(static_cast<size_t>(diag_size) * grid_size);
        diag_sin_.resize(static_cast<size_t>(diag_size) * grid_size);
        for (int j = 0; j < diag_size; ++j) {
            diag_theta_[j] = M_PI * (j + 0.5) / diag_size;
            for (int k = 0; k < grid_size; ++k) {
                diag_cos_[j * grid_size + k] = std::cos(k * diag_theta_[j]);
                diag_sin_[j * grid_size + k] = std::sin(k * diag_theta_[j]);
            }
        }
    }

    const CosineGrid& grid() const { return grid_; }
    double cfl() const { return cfl_; }

    FlowState init_state(const InitProfile& profile) const {
        std::vector<double> s(grid_.size());
        const auto& theta = grid_.nodes();
        switch (profile.kind) {
            case InitProfile::Sphere:
                std::fill(s.begin(), s.end(), profile.radius);
                break;
            case InitProfile::Perturbed:
                if (profile.legendre_l < 2 || profile.legendre_l % 2 != 0)
                    throw Error("perturbed profile needs an even Legendre index l >= 2");
                for (int j = 0; j < grid_.size(); ++j)
                    s[j] = profile.radius *
                           (1.0 + profile.amplitude * legendre_p(profile.legendre_l, std::cos(theta[j])));
                break;
            case InitProfile::Oblate:
                for (int j = 0; j < grid_.size(); ++j) {
                    double st = std::sin(theta[j]), ct = std::cos(theta[j]);
                    s[j] = std::sqrt(profile.a * profile.a * st * st + profile.c * profile.c * ct * ct);
                }
                break;
        }
        FlowState state;
        state.time = 0;
        state.grid_size = grid_.size();
        state.modes = grid_.analyze(s);
        if (!curvatures_positive(state.modes)) throw NotConvex("initial profile is not strictly convex");
        return state;
    }

    CurvatureProfile curvature_profile(const FlowState& state) const {
        CurvatureProfile out;
        std::vector<double> s, ds, dds;
        grid_.synthesize(state.modes, s, ds, dds);
        out.lambda1.resize(grid_.size());
        out.lambda2.resize(grid_.size());
        for (int j = 0; j < grid_.size(); ++j) {
            double r1 = dds[j] + s[j];
            double r2 = ds[j] / std::tan(grid_.nodes()[j]) + s[j];
            if (r1 <= 0 || r2 <= 0) throw ConvexityLost("principal radius lost positivity");
            out.lambda1[j] = 1.0 / r1;
            out.lambda2[j] = 1.0 / r2;
        }
        return out;
    }

    // Largest stable explicit step for the current state.
    double stable_dt(const FlowState& state) const {
        CurvatureProfile cp = curvature_profile(state);
        double dmax = 0;
        for (int j = 0; j < grid_.size(); ++j) {
            double l1 = cp.lambda1[j], l2 = cp.lambda2[j];
            double diffusion = f1_(l1, l2) * l1 * l1 + f2_(l1, l2) * l2 * l2;
            dmax = std::max(dmax, std::abs(diffusion));
        }
        double dth = grid_.dtheta();
        if (dmax <= 0) return dth * dth;  // degenerate velocity, e.g. F == 0
        return cfl_ * dth * dth / dmax;
    }

    // One RK4 step of ds/dt = -F (+ rescale_term * s when set).
    FlowState advance(const FlowState& state, double dt, double rescale_term = 0) const {
        if (dt <= 0) throw Error("advance needs dt > 0");
        if (dt > 4.001 * stable_dt(state) / cfl_)
            throw StepTooLarge("time step above the stability bound");
        auto rhs = [&](const std::vector<double>& modes) { return rhs_modes(modes, rescale_term); };
        const std::vector<double>& y = state.modes;
        std::vector<double> k1 = rhs(y);
        std::vector<double> k2 = rhs(axpy(y, k1, dt / 2));
        std::vector<double> k3 = rhs(axpy(y, k2, dt / 2));
        std::vector<double> k4 = rhs(axpy(y, k3, dt));
        FlowState next;
        next.grid_size = state.grid_size;
        next.time = state.time + dt;
        next.modes.resize(y.size());
        for (size_t k = 0; k < y.size(); ++k)
            next.modes[k] = y[k] + dt / 6 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
        if (!curvatures_positive(next.modes)) throw ConvexityLost("strict convexity lost during step");
        return next;
    }

    // Axial component of the Steiner point, exact in the modes:
    // q_z = (3/2) int_0^pi s(theta) cos(theta) sin(theta) dtheta
    //     = sum_{k odd} 3 c_k / (4 - k^2),
    // which recovers the center of a shifted sphere exactly.
    double steiner_z(const std::vector<double>& modes) const {
        double acc = 0;
        for (size_t k = 1; k < modes.size(); k += 2) {
            double kk = static_cast<double>(k);
            acc += modes[k] * 3.0 / (4.0 - kk * kk);
        }
        return acc;
    }

    double velocity_value(double l1, double l2) const { return f_(l1, l2); }

    struct Radii {
        double inner, outer;
    };

    Radii support_radii(const FlowState& state) const {
        std::vector<double> s, ds, dds;
        diag_synthesize(state.modes, s, ds, dds);
        double qz = steiner_z(state.modes);
        double lo = 1e300, hi = -1e300;
        for (size_t j = 0; j < diag_theta_.size(); ++j) {
            double v = s[j] - qz * std::cos(diag_theta_[j]);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return {lo, hi};
    }

    // One diagnostic snapshot on the fixed diagnostic grid.
    SeriesRow diagnostics(const FlowState& state, const RatFnEval* weval) const {
        std::vector<double> s, ds, dds;
        diag_synthesize(state.modes, s, ds, dds);
        double qz = steiner_z(state.modes);
        SeriesRow row;
        row.t = state.time;
        row.min_lambda = 1e300;
        row.inner_radius = 1e300;
        row.outer_radius = -1e300;
        for (size_t j = 0; j < diag_theta_.size(); ++j) {
            double r1 = dds[j] + s[j];
            double r2 = ds[j] / std::tan(diag_theta_[j]) + s[j];
            if (r1 <= 0 || r2 <= 0) throw ConvexityLost("diagnostic grid sees nonconvexity");
            double l1 = 1.0 / r1, l2 = 1.0 / r2;
            row.min_lambda = std::min({row.min_lambda, l1, l2});
            row.max_lambda = std::max({row.max_lambda, l1, l2});
            row.pinch_ratio = std::max({row.pinch_ratio, l1 / l2, l2 / l1});
            row.max_f = std::max(row.max_f, f_(l1, l2));
            if (weval) row.max_w = std::max(row.max_w, (*weval)(l1, l2));
            double v = s[j] - qz * std::cos(diag_theta_[j]);
            row.inner_radius = std::min(row.inner_radius, v);
            row.outer_radius = std::max(row.outer_radius, v);
        }
        return row;
    }

  private:
    std::vector<double> rhs_modes(const std::vector<double>& modes, double rescale_term) const {
        std::vector<double> s, ds, dds;
        grid_.synthesize(modes, s, ds, dds);
        std::vector<double> f(grid_.size());
        for (int j = 0; j < grid_.size(); ++j) {
            double r1 = dds[j] + s[j];
            double r2 = ds[j] / std::tan(grid_.nodes()[j]) + s[j];
            if (r1 <= 0 || r2 <= 0) throw ConvexityLost("strict convexity lost inside RK stage");
            f[j] = -f_(1.0 / r1, 1.0 / r2) + rescale_term * s[j];
        }
        return grid_.analyze(f);
    }

    bool curvatures_positive(const std::vector<double>& modes) const {
        std::vector<double> s, ds, dds;
        grid_.synthesize(modes, s, ds, dds);
        for (int j = 0; j < grid_.size(); ++j) {
            double r1 = dds[j] + s[j];
            double r2 = ds[j] / std::tan(grid_.nodes()[j]) + s[j];
            if (!(s[j] > 0) || !(r1 > 0) || !(r2 > 0)) return false;
        }
        return true;
    }

    static std::vector<double> axpy(const std::vector<double>& y, const std::vector<double>& k,
                                    double dt) {
        std::vector<double> r(y.size());
        for (size_t i = 0; i < y.size(); ++i) r[i] = y[i] + dt * k[i];
        return r;
    }

    void diag_synthesize(const std::vector<double>& modes, std::vector<double>& s,
                         std::vector<double>& ds, std::vector<double>& dds) const {
        size_t m = diag_theta_.size();
        int n = grid_.size();
        s.assign(m, 0.0);
        ds.assign(m, 0.0);
        dds.assign(m, 0.0);
        for (size_t j = 0; j < m; ++j) {
            const double* ck = &diag_cos_[j * n];
            const double* sk = &diag_sin_[j * n];
            double a = 0, b = 0, c = 0;
            for (int k = 0; k < n; ++k) {
                a += modes[k] * ck[k];
                b -= modes[k] * k * sk[k];
                c -= modes[k] * k * k * ck[k];
            }
            s[j] = a;
            ds[j] = b;
            dds[j] = c;
        }
    }

    CosineGrid grid_;
    double cfl_;
    RatFnEval f_, f1_, f2_;
    std::vector<double> diag_theta_;
    std::vector<double> diag_cos_, diag_sin_;
};

struct FlowRun {
    std::vector<SeriesRow> rows;
    double estimated_T = 0;
    bool convexity_lost = false;
    FlowState final_state;
};

struct ConstantsRow {
    Rat c_h;        // homogeneity of F
    Rat c_1;        // F(1, 1)
    Rat c_alpha;    // concavity exponent (= c_h for all velocities handled here)
    Rat c_d;        // (2 - d_n + d_d) / 2 from the quantity's degrees
    Rat exponent;   // (1 - c_d) / (1 + c_h)
};

inline ConstantsRow constants_for(const RatFn2& velocity, const RatFn2& quantity) {
    auto ch = velocity.homogeneous_degree();
    if (!ch) throw NotHomogeneous("velocity is not homogeneous");
    auto dn = quantity.num().homogeneous_degree();
    auto dd = quantity.den().homogeneous_degree();
    if (!dn || !dd) throw NotHomogeneous("quantity is not a ratio of homogeneous polynomials");
    ConstantsRow row;
    row.c_h = *ch;
    row.c_1 = velocity.eval_exact(1, 1);
    row.c_alpha = row.c_h;
    row.c_d = frac(2 - *dn + *dd, 2);
    row.exponent = (Rat(1) - row.c_d) / (Rat(1) + row.c_h);
    return row;
}

// Evolve until the recentered inner radius drops below the stop value. The
// quantity evaluator is optional; without it max_w reads 0.
inline FlowRun run_flow(const FlowSolver& solver, FlowState state,
                        const std::optional<RatFn2>& quantity, double stop_at_inner_radius,
                        double c_h_plus_1 = 3.0, long max_steps = 2000000) {
    FlowRun run;
    std::optional<RatFnEval> weval;
    if (quantity) weval.emplace(*quantity);

    auto record = [&](const FlowState& st) {
        SeriesRow row = solver.diagnostics(st, weval ? &*weval : nullptr);
        run.rows.push_back(row);
        return row;
    };

    SeriesRow row = record(state);
    for (long step = 0; step < max_steps && row.inner_radius > stop_at_inner_radius; ++step) {
        double dt = solver.stable_dt(state);
        for (int attempt = 0;; ++attempt) {
            try {
                state = solver.advance(state, dt);
                break;
            } catch (const ConvexityLost&) {
                dt /= 2;
                if (attempt >= 40) {
                    run.convexity_lost = true;
                    break;
                }
            }
        }
        if (run.convexity_lost) break;
        row = record(state);
    }
    run.final_state = state;

    // T estimate: inner_radius^(1+c_h) / (c1 (1+c_h)) + t, averaged over the
    // last quartile; the slope c1 (1+c_h) is taken from the same fit.
    size_t n = run.rows.size();
    if (n >= 8) {
        size_t lo = n - n / 4;
        // least squares y = a - b t with y = r^(1+c_h); T = a / b
        double sy = 0, st = 0, stt = 0, sty = 0;
        size_t m = 0;
        for (size_t k = lo; k < n; ++k) {
            double y = std::pow(run.rows[k].inner_radius, c_h_plus_1);
            sy += y;
            st += run.rows[k].t;
            stt += run.rows[k].t * run.rows[k].t;
            sty += run.rows[k].t * y;
            ++m;
        }
        double denom = stt * m - st * st;
        if (denom != 0) {
            double b = -(sty * m - st * sy) / denom;
            double a = (sy + b * st) / m;
            if (b > 0) run.estimated_T = a / b;
        }
    }
    return run;
}

// Rescaled flow d s/dtau = -F + 2 s for F = Q (the velocity the rescaling is
// derived for). Fits the decay exponent of the Legendre mode amplitude.
struct RescaledRun {
    double exponent = 0;                      // fitted decay rate of the l-mode
    std::vector<std::pair<double, double>> amplitudes;  // (tau, a_l)
};

inline double legendre_mode(const std::vector<double>& modes, int l) {
    // a_l = (2l+1)/2 * int_{-1}^{1} s(arccos x) P_l(x) dx via composite
    // Gauss-Legendre on 64 panels (far below solver error).
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                 0.3478548451374538};
    const int panels = 64;
    double acc = 0;
    for (int p = 0; p < panels; ++p) {
        double x0 = -1.0 + 2.0 * p / panels, x1 = -1.0 + 2.0 * (p + 1) / panels;
        double xm = 0.5 * (x0 + x1), xr = 0.5 * (x1 - x0);
        for (int g = 0; g < 4; ++g) {
            double x = xm + xr * gx[g];
            acc += xr * gw[g] * CosineGrid::value_at(modes, std::acos(x)) * legendre_p(l, x);
        }
    }
    return acc * (2.0 * l + 1.0) / 2.0;
}

inline RescaledRun run_rescaled(const Velocity& v, int l, double amplitude, int grid_size,
                                double cfl = 0.2) {
    if (v.f() != rf_Q()) throw Error("the rescaled flow is implemented for F = Q only");
    if (l < 2 || l % 2 != 0) throw Error("rescaled run needs an even mode index l >= 2");
    FlowSolver solver(v, grid_size, cfl);
    FlowState state = solver.init_state(InitProfile::perturbed(1.0, l, amplitude));

    RescaledRun run;
    double a0 = legendre_mode(state.modes, l);
    run.amplitudes.push_back({0.0, a0});
    if (amplitude == 0) return run;

    double target = std::abs(a0) * std::exp(-2.0);  // fit across two e-folds
    long guard = 0;
    while (std::abs(run.amplitudes.back().second) > target && guard++ < 1000000) {
        double dt = solver.stable_dt(state);
        state = solver.advance(state, dt, /*rescale_term=*/2.0);
        run.amplitudes.push_back({state.time, legendre_mode(state.modes, l)});
    }

    // least squares on log|a_l| between 0.9 and 0.2 of the initial amplitude
    double hi = 0.9 * std::abs(a0), lo = 0.2 * std::abs(a0);
    double st = 0, stt = 0, sy = 0, sty = 0;
    long m = 0;
    for (const auto& [tau, al] : run.amplitudes) {
        double mag = std::abs(al);
        if (mag > hi || mag < lo) continue;
        double y = std::log(mag);
        st += tau;
        stt += tau * tau;
        sy += y;
        sty += tau * y;
        ++m;
    }
    double denom = stt * m - st * st;
    if (m >= 2 && denom != 0) run.exponent = -(sty * m - st * sy) / denom;
    return run;
}

}  // namespace curvsieve
