#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <curvsieve/expr.hpp>
#include <curvsieve/json_io.hpp>
#include <curvsieve/sieve.hpp>

using namespace curvsieve;

namespace {

bool contains(const std::vector<RatFn2>& pool, const RatFn2& f) {
    for (const auto& g : pool)
        if (g == f) return true;
    return false;
}

CandidateSpace small_space() {
    CandidateSpace space;
    space.max_numerator_degree = 3;
    space.max_denominator_degree = 2;
    space.coefficient_set = {1};
    space.seed = 7;
    space.samples_per_step = 200;
    return space;
}

}  // namespace

TEST_CASE("candidate generation") {
    CandidateSpace space = small_space();
    std::vector<RatFn2> cands = generate_candidates(space);
    CHECK(contains(cands, parse_ratfn("(l1+l2)*(l1-l2)^2/(l1*l2)")));

    CandidateSpace bad = space;
    bad.max_numerator_degree = 2;
    bad.max_denominator_degree = 2;
    CHECK_THROWS_AS(generate_candidates(bad), EmptySpace);

    CandidateSpace wider = space;
    wider.max_numerator_degree = 4;
    wider.coefficient_set = {1, 2, 3};
    std::vector<RatFn2> more = generate_candidates(wider);
    CHECK(contains(more, parse_ratfn("(3*l1^2 + 2*l1*l2 + 3*l2^2)*(l1-l2)^2/(l1*l2)")));

    // duplicates after normalization are removed
    std::set<RatFn2> uniq(more.begin(), more.end());
    CHECK(uniq.size() == more.size());

    // without the enforced factor the numerators range over all symmetric
    // homogeneous polynomials, so quantities without a diagonal zero appear
    CandidateSpace loose = space;
    loose.enforce_diff_squared_factor = false;
    std::vector<RatFn2> free_form = generate_candidates(loose);
    CHECK(contains(free_form, parse_ratfn("l1^2 + l2^2")));
    CHECK(contains(free_form, parse_ratfn("(l1^2+l2^2+l1*l2)/(l1+l2)")));
}

TEST_CASE("screening the flagship pair passes every step") {
    Velocity v = velocity_from_expr(parse_ratfn("Q"));
    RatFn2 w = parse_ratfn("(l1+l2)*(l1-l2)^2/(l1*l2)");
    for (std::uint64_t seed : {1ULL, 99ULL, 31415926ULL}) {
        CandidateReport rep = screen_candidate(v, w, seed, 500);
        CHECK(rep.passed_all());
    }
}

TEST_CASE("step 2 rejects equal degrees") {
    Velocity v = velocity_from_expr(parse_ratfn("Q"));
    CandidateReport rep = screen_candidate(v, parse_ratfn("(l1-l2)^2/(l1*l2)"), 5, 100);
    CHECK(rep.steps.at(SieveStep::S2).kind == StepVerdict::Fail);
    CHECK(rep.steps.at(SieveStep::S3).kind == StepVerdict::Skipped);
    CHECK(rep.steps.at(SieveStep::S4b).kind == StepVerdict::Skipped);
    CHECK(rep.last_step_reached() == "2");
}

TEST_CASE("beta = 6 fails step 4b with a large-ratio witness") {
    Velocity v = velocity_from_expr(parse_ratfn("Q + 6*H^2"));
    RatFn2 w = parse_ratfn("(l1+l2)*(l1-l2)^2/(l1*l2)");
    bool failed_4b = false;
    for (std::uint64_t seed = 1; seed <= 8 && !failed_4b; ++seed) {
        CandidateReport rep = screen_candidate(v, w, seed, 1000);
        const StepVerdict& s4b = rep.steps.at(SieveStep::S4b);
        if (s4b.kind == StepVerdict::Fail) {
            failed_4b = true;
            REQUIRE(s4b.witness.has_value());
            Rat ratio = s4b.witness->l1 / s4b.witness->l2;
            if (ratio < 1) ratio = 1 / ratio;
            CHECK(ratio >= 32);  // the violation lives at large ratios only
        }
    }
    CHECK(failed_4b);
}

TEST_CASE("negative quantities fail step 1a") {
    Velocity v = velocity_from_expr(parse_ratfn("Q"));
    CandidateReport rep = screen_candidate(v, parse_ratfn("(-l1-l2)*(l1-l2)^2/(l1*l2)"), 3, 100);
    CHECK(rep.steps.at(SieveStep::S1a).kind == StepVerdict::Fail);
}

TEST_CASE("missing diagonal zero fails step 1b") {
    Velocity v = velocity_from_expr(parse_ratfn("Q"));
    CandidateReport rep = screen_candidate(v, parse_ratfn("(l1^2+l2^2)*(l1+l2)/(l1*l2)"), 3, 100);
    CHECK(rep.steps.at(SieveStep::S1b).kind == StepVerdict::Fail);
}

TEST_CASE("deterministic reports, independent of worker count") {
    Velocity v = velocity_from_expr(parse_ratfn("Q"));
    CandidateSpace space = small_space();
    SieveResult r1 = run_sieve(v, space, /*certify=*/false);
    SieveResult r2 = run_sieve(v, space, /*certify=*/false);

    json j1 = json::array(), j2 = json::array();
    for (const auto& rep : r1.reports) j1.push_back(to_json(rep));
    for (const auto& rep : r2.reports) j2.push_back(to_json(rep));
    CHECK(j1.dump() == j2.dump());

    setenv("CURVSIEVE_THREADS", "1", 1);
    SieveResult serial = run_sieve(v, space, false);
    unsetenv("CURVSIEVE_THREADS");
    json j3 = json::array();
    for (const auto& rep : serial.reports) j3.push_back(to_json(rep));
    CHECK(j3.dump() == j1.dump());
}

TEST_CASE("per-step candidate counts are monotone") {
    Velocity v = velocity_from_expr(parse_ratfn("Q"));
    CandidateSpace space = small_space();
    space.coefficient_set = {1, 2};
    SieveResult result = run_sieve(v, space, false);
    long reached[6] = {0, 0, 0, 0, 0, 0};
    int idx = 0;
    for (SieveStep s : all_steps()) {
        for (const auto& rep : result.reports)
            if (rep.steps.at(s).kind != StepVerdict::Skipped) ++reached[idx];
        ++idx;
    }
    for (int k = 1; k < 6; ++k) CHECK(reached[k] <= reached[k - 1]);
}

TEST_CASE("sieve for Gauss curvature flow finds the squared difference") {
    Velocity v = velocity_from_expr(parse_ratfn("K"));
    CandidateSpace space;
    space.max_numerator_degree = 2;
    space.max_denominator_degree = 0;
    space.coefficient_set = {1};
    space.seed = 11;
    space.samples_per_step = 300;
    SieveResult result = run_sieve(v, space, /*certify=*/true);
    bool found = false;
    for (const auto& rep : result.reports) {
        if (rep.candidate == parse_ratfn("(l1-l2)^2")) {
            CHECK(rep.passed_all());
            REQUIRE(rep.certificate.has_value());
            CHECK(rep.certificate->verdict == MonotoneVerdict::CertifiedMonotone);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("all table pairs pass screening at every seed tried") {
    // Screening rejects only on strict sign violations, which a certified
    // pair cannot produce under exact arithmetic.
    struct Row {
        const char* vel;
        const char* qty;
    } rows[] = {
        {"Q", "(l1+l2)*(l1-l2)^2/(l1*l2)"},
        {"K", "(l1-l2)^2"},
        {"H^2", "(l1+l2)^3*(l1-l2)^2/((l1^2+l2^2)*l1*l2)"},
        {"H^3", "(l1^2+l1*l2+l2^2)*(l1+l2)^2*(l1-l2)^2/((l1^2-l1*l2+l2^2)*l1*l2)"},
        {"H^4", "(l1^2+l1*l2+l2^2)*(l1+l2)^6*(l1-l2)^2/(l1^2*l2^2)"},
        {"Q + 5*H^2", "(l1+l2)*(l1-l2)^2/(l1*l2)"},
        {"B(3)", "(3*l1^2 + 2*l1*l2 + 3*l2^2)*(l1-l2)^2/(l1*l2)"},
        {"B(5)", "(B(3))*(l1+l2)*(l1-l2)^2/(l1*l2)"},
        {"H*Q", "(l1+l2)^2*(l1-l2)^2/(l1*l2)"},
        {"Q^2", "(l1^4+2*l1^3*l2+4*l1^2*l2^2+2*l1*l2^3+l2^4)*(l1-l2)^2/((l1+l2)*l1*l2)"},
    };
    for (const auto& row : rows) {
        Velocity v = velocity_from_expr(parse_ratfn(row.vel));
        for (std::uint64_t seed : {641ULL, 6700417ULL}) {
            CandidateReport rep = screen_candidate(v, parse_ratfn(row.qty), seed, 150);
            CHECK_MESSAGE(rep.passed_all(), row.vel, " with ", row.qty, " seed ", seed);
        }
    }
}

TEST_CASE("certificates replay independently from their JSON form") {
    Velocity v = velocity_from_expr(parse_ratfn("Q"));
    MonotonicityCertificate good =
        certify_monotone(v, parse_ratfn("(l1+l2)*(l1-l2)^2/(l1*l2)"));
    json j = to_json(good);
    CHECK(replay_monotonicity_certificate(j) > 0);

    // tamper with the claimed root count: replay must reject
    json bad = j;
    bad["c1_certificate"]["root_count_interior"] = 3;
    CHECK_THROWS_AS(replay_monotonicity_certificate(bad), Error);

    // tamper with the polynomial: replay must reject
    json bad2 = j;
    bad2["c1_certificate"]["polynomial"] = "x^2 - 1";
    CHECK_THROWS_AS(replay_monotonicity_certificate(bad2), Error);

    // a refuted certificate also round-trips through serialization
    MonotonicityCertificate refuted =
        certify_monotone(velocity_from_expr(parse_ratfn("B(3)")), parse_ratfn("H^2*(l1-l2)^2/K"));
    json jr = to_json(refuted);
    CHECK(jr["verdict"] == "refuted");
    CHECK(jr.contains("witness"));
}

TEST_CASE("sign certificates replay across verdict kinds") {
    for (const char* text : {"x^2 + 1", "-x^2 - 3", "x^2 - 1", "2*x - 5"}) {
        UPoly p = parse_upoly(text);
        for (bool strict : {false, true}) {
            SignCertificate cert = certify_sign_on_positive_axis(p, strict);
            CHECK(replay_sign_certificate(cert, parse_upoly(cert.polynomial)));
        }
    }
    UPoly sq = parse_upoly("x^2 - 2*x + 1");  // (x-1)^2
    SignCertificate nn = certify_sign_on_positive_axis(sq, false);
    CHECK(nn.verdict == SignVerdict::Nonnegative);
    CHECK(replay_sign_certificate(nn, sq));
    SignCertificate ind = certify_sign_on_positive_axis(sq, true);
    CHECK(ind.verdict == SignVerdict::Indefinite);
    CHECK(replay_sign_certificate(ind, sq));
}

TEST_CASE("certified survivors stay nonpositive on fresh samples") {
    Velocity v = velocity_from_expr(parse_ratfn("Q"));
    MonotonicityCertificate cert = certify_monotone(v, parse_ratfn("(l1+l2)*(l1-l2)^2/(l1*l2)"));
    REQUIRE(cert.verdict == MonotoneVerdict::CertifiedMonotone);
    Rng rng(987654321);  // a seed never used by the screening defaults
    for (int k = 0; k < 10000; ++k) {
        Rat x = dyadic_exp2(static_cast<int>(rng.range(-80, 80)));
        if (x == 1) continue;
        CHECK(cert.reaction.eval_exact(x, 1) <= 0);
        CHECK(cert.c1.eval_exact(x, 1) <= 0);
        CHECK(cert.c1.eval_exact(1, x) <= 0);
    }
}

TEST_CASE("the wider B3 space keeps the true row and drops the bad one") {
    Velocity v = velocity_from_expr(parse_ratfn("B(3)"));
    CandidateSpace space;
    space.max_numerator_degree = 4;
    space.max_denominator_degree = 2;
    space.coefficient_set = {1, 2, 3};
    space.seed = 5;
    space.samples_per_step = 150;
    SieveResult result = run_sieve(v, space, /*certify=*/false);
    RatFn2 good = parse_ratfn("(3*l1^2 + 2*l1*l2 + 3*l2^2)*(l1-l2)^2/(l1*l2)");
    RatFn2 bad = parse_ratfn("(l1+l2)^2*(l1-l2)^2/(l1*l2)");
    bool saw_good = false, saw_bad = false;
    for (const auto& rep : result.reports) {
        if (rep.candidate == good) {
            saw_good = true;
            CHECK(rep.passed_all());
        }
        if (rep.candidate == bad) {
            saw_bad = true;
            CHECK_FALSE(rep.passed_all());
        }
    }
    CHECK(saw_good);
    CHECK(saw_bad);
}

TEST_CASE("survivors of a B3 sieve exclude the non-monotone family member") {
    Velocity v = velocity_from_expr(parse_ratfn("B(3)"));
    // H^2 (l1-l2)^2 / K passes the cheap steps but fails a maximum-principle step
    CandidateReport rep = screen_candidate(v, parse_ratfn("H^2*(l1-l2)^2/K"), 17, 2000);
    CHECK_FALSE(rep.passed_all());
    bool fail_4a = rep.steps.at(SieveStep::S4a).kind == StepVerdict::Fail;
    bool fail_4b = rep.steps.at(SieveStep::S4b).kind == StepVerdict::Fail;
    CHECK((fail_4a || fail_4b));
    // while the true quantity for B3 = tr A^3 passes
    CandidateReport good =
        screen_candidate(v, parse_ratfn("(3*l1^2 + 2*l1*l2 + 3*l2^2)*(l1-l2)^2/(l1*l2)"), 17, 500);
    CHECK(good.passed_all());
}
