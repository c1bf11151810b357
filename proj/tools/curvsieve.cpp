// curvsieve command line: discover and exactly certify monotone quantities
// for curvature flows of convex surfaces, and run the axisymmetric
// support-function simulator.
//
// Exit status: 0 success, 1 refuted or indefinite certification, 2 input error.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <curvsieve/concavity.hpp>
#include <curvsieve/expr.hpp>
#include <curvsieve/flow.hpp>
#include <curvsieve/json_io.hpp>
#include <curvsieve/sieve.hpp>

using namespace curvsieve;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RatFn2 parse_or_die(const std::string& text, const char* what) {
    try {
        return parse_ratfn(text);
    } catch (const Error& e) {
        throw InputError(std::string("bad ") + what + " expression: " + e.what());
    }
}

InitProfile parse_init(const std::string& text) {
    auto split = [](const std::string& s) {
        std::vector<double> vals;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
        return vals;
    };
    auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    std::vector<double> args = colon == std::string::npos ? std::vector<double>{} : split(text.substr(colon + 1));
    if (kind == "sphere" && args.size() == 1) return InitProfile::sphere(args[0]);
    if (kind == "perturbed" && args.size() == 3)
        return InitProfile::perturbed(args[0], static_cast<int>(args[1]), args[2]);
    if (kind == "oblate" && args.size() == 2) return InitProfile::oblate(args[0], args[1]);
    throw InputError("bad --init, expected sphere:r | perturbed:r,l,amp | oblate:a,c");
}

std::vector<long> parse_coeffs(const std::string& text) {
    std::vector<long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
    if (out.empty()) throw InputError("empty --coeffs list");
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw InputError("cannot write " + path);
    os << content;
}

int cmd_certify(const std::string& vel_text, const std::string& qty_text, const std::string& out) {
    Velocity v = velocity_from_expr(parse_or_die(vel_text, "velocity"));
    RatFn2 w = parse_or_die(qty_text, "quantity");
    MonotonicityCertificate cert = certify_monotone(v, w);
    json j = to_json(cert);
    if (!out.empty()) write_file(out, j.dump(2) + "\n");
    std::cout << "velocity: " << cert.velocity << "\n"
              << "quantity: " << cert.quantity << "\n"
              << "reaction: " << cert.reaction << "\n"
              << "verdict: " << to_string(cert.verdict) << "\n";
    if (cert.witness) {
        std::cout << "witness: " << cert.witness->where << " at (l1, l2) = ("
                  << to_string(cert.witness->l1) << ", " << to_string(cert.witness->l2)
                  << "), value " << to_string(cert.witness->value) << "\n";
        std::cout << "note: " << cert.note << "\n";
    }
    return cert.verdict == MonotoneVerdict::CertifiedMonotone ? 0 : 1;
}

int cmd_constants(const std::string& vel_text, const std::string& qty_text, const std::string& out) {
    RatFn2 v = parse_or_die(vel_text, "velocity");
    RatFn2 w = parse_or_die(qty_text, "quantity");
    ConstantsRow row = constants_for(v, w);
    std::cout << "c_h = " << to_string(row.c_h) << "\n"
              << "c_1 = " << to_string(row.c_1) << "\n"
              << "c_alpha = " << to_string(row.c_alpha) << "\n"
              << "c_d = " << to_string(row.c_d) << "\n"
              << "exponent = " << to_string(row.exponent) << "\n";
    if (!out.empty()) write_file(out, to_json(row).dump(2) + "\n");
    return 0;
}

int cmd_sieve(const std::string& vel_text, const CandidateSpace& space, bool certify,
              const std::string& out) {
    Velocity v = velocity_from_expr(parse_or_die(vel_text, "velocity"));
    SieveResult result = run_sieve(v, space, certify);
    if (!out.empty()) write_file(out, to_json(result).dump(2) + "\n");

    std::cout << "candidate | last step | certified\n";
    for (const auto& rep : result.reports) {
        const char* cert = "-";
        if (rep.certificate) {
            cert = rep.certificate->verdict == MonotoneVerdict::CertifiedMonotone ? "yes"
                   : rep.certificate->verdict == MonotoneVerdict::Refuted         ? "refuted"
                                                                                  : "indefinite";
        }
        std::cout << rep.candidate.to_string() << " | " << rep.last_step_reached() << " | " << cert
                  << "\n";
    }
    std::cout << result.reports.size() << " candidates, " << result.survivors << " survivors, "
              << result.certified << " certified\n";
    for (const auto& [step, tm] : result.timing) {
        if (tm.tests == 0) continue;
        std::cout << "step " << step_name(step) << ": " << tm.tests << " tests, "
                  << (tm.seconds > 0 ? static_cast<long>(tm.tests / tm.seconds) : 0L)
                  << " tests/s\n";
    }
    return 0;
}

int cmd_flow(const std::string& vel_text, const std::string& qty_text, const std::string& init_text,
             int grid, double cfl, double stop_inner, std::uint64_t seed, const std::string& out) {
    Velocity v = velocity_from_expr(parse_or_die(vel_text, "velocity"));
    std::optional<RatFn2> w;
    if (!qty_text.empty()) w = parse_or_die(qty_text, "quantity");
    InitProfile profile = parse_init(init_text);
    FlowSolver solver(v, grid, cfl);
    FlowState state = solver.init_state(profile);
    double chp1 = 3.0;
    if (auto ch = v.f().homogeneous_degree()) chp1 = 1.0 + *ch;
    FlowRun run = run_flow(solver, state, w, stop_inner, chp1);

    std::ostringstream csv;
    csv << csv_header() << "\n";
    for (const auto& row : run.rows) csv << csv_row(row) << "\n";
    std::string csv_path = out.empty() ? "flow.csv" : out;
    write_file(csv_path, csv.str());

    json meta;
    meta["velocity"] = v.f().to_string();
    meta["quantity"] = w ? json(w->to_string()) : json(nullptr);
    meta["grid"] = grid;
    meta["cfl"] = cfl;
    meta["seed"] = seed;
    meta["init"] = init_text;
    meta["stop_inner_radius"] = stop_inner;
    meta["estimated_T"] = run.estimated_T;
    meta["recentering"] = "steiner";
    meta["convexity_lost"] = run.convexity_lost;
    meta["rows"] = run.rows.size();
    write_file(csv_path + ".meta.json", meta.dump(2) + "\n");

    std::cout << "wrote " << run.rows.size() << " rows to " << csv_path << ", estimated T = "
              << run.estimated_T << "\n";
    return run.convexity_lost ? 1 : 0;
}

int cmd_check(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot read " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw InputError(std::string("bad certificate file: ") + e.what());
    }
    try {
        int checked = replay_monotonicity_certificate(j);
        std::cout << "replayed " << checked << " claims from " << path << ": all hold\n";
        return 0;
    } catch (const Error& e) {
        std::cerr << "certificate does not replay: " << e.what() << "\n";
        return 1;
    }
}

int cmd_rescaled(int l, double amplitude, int grid, double cfl, const std::string& out) {
    Velocity v = velocity_from_expr(rf_Q());
    RescaledRun run = run_rescaled(v, l, amplitude, grid, cfl);
    std::cout << "mode l = " << l << ", fitted decay exponent = " << run.exponent
              << " (linearized rate 2*l*(l+1) - 6 = " << 2 * l * (l + 1) - 6 << ")\n";
    if (!out.empty()) {
        std::ostringstream csv;
        csv << "tau,amplitude\n";
        for (const auto& [tau, a] : run.amplitudes) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", tau, a);
            csv << buf;
        }
        write_file(out, csv.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact monotone-quantity discovery and certification for curvature flows"};
    app.require_subcommand(1);

    std::string velocity, quantity, out, init_text = "sphere:1";
    int max_num_degree = 3, max_den_degree = 2, samples = 1000, grid = 64, mode_l = 2;
    std::string coeffs = "1";
    std::uint64_t seed = 1;
    double cfl = 0.2, stop_inner = 0.05, amplitude = 1e-3;
    bool no_certify = false;

    CLI::App* certify = app.add_subcommand("certify", "exactly certify one (velocity, quantity) pair");
    certify->add_option("--velocity", velocity)->required();
    certify->add_option("--quantity", quantity)->required();
    certify->add_option("--out", out);

    CLI::App* sieve = app.add_subcommand("sieve", "screen a candidate space and certify survivors");
    sieve->add_option("--velocity", velocity)->required();
    sieve->add_option("--max-num-degree", max_num_degree);
    sieve->add_option("--max-den-degree", max_den_degree);
    sieve->add_option("--coeffs", coeffs);
    sieve->add_option("--samples", samples);
    sieve->add_option("--seed", seed);
    sieve->add_flag("--no-certify", no_certify, "skip exact certification of survivors");
    sieve->add_option("--out", out);

    CLI::App* constants = app.add_subcommand("constants", "per-velocity constants of a pair");
    constants->add_option("--velocity", velocity)->required();
    constants->add_option("--quantity", quantity)->required();
    constants->add_option("--out", out);

    CLI::App* flow = app.add_subcommand("flow", "run the axisymmetric support-function flow");
    flow->add_option("--velocity", velocity)->required();
    flow->add_option("--quantity", quantity);
    flow->add_option("--init", init_text);
    flow->add_option("--grid", grid);
    flow->add_option("--cfl", cfl);
    flow->add_option("--stop-inner", stop_inner);
    flow->add_option("--seed", seed);
    flow->add_option("--out", out);

    CLI::App* rescaled = app.add_subcommand("rescaled", "rescaled flow around the unit sphere");
    rescaled->add_option("--l", mode_l);
    rescaled->add_option("--amplitude", amplitude);
    rescaled->add_option("--grid", grid);
    rescaled->add_option("--cfl", cfl);
    rescaled->add_option("--out", out);

    std::string certificate_path;
    CLI::App* check = app.add_subcommand("check", "replay a certificate file independently");
    check->add_option("--certificate", certificate_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (certify->parsed()) return cmd_certify(velocity, quantity, out);
        if (constants->parsed()) return cmd_constants(velocity, quantity, out);
        if (sieve->parsed()) {
            CandidateSpace space;
            space.max_numerator_degree = max_num_degree;
            space.max_denominator_degree = max_den_degree;
            space.coefficient_set = parse_coeffs(coeffs);
            space.seed = seed;
            space.samples_per_step = samples;
            return cmd_sieve(velocity, space, !no_certify, out);
        }
        if (flow->parsed())
            return cmd_flow(velocity, quantity, init_text, grid, cfl, stop_inner, seed, out);
        if (rescaled->parsed()) return cmd_rescaled(mode_l, amplitude, grid, cfl, out);
        if (check->parsed()) return cmd_check(certificate_path);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
