// JSON serialization of certificates and reports. All exact values are
// emitted as canonical strings so certificates stay replayable.
#pragma once

#include <json.hpp>

#include "concavity.hpp"
#include "evolution.hpp"
#include "expr.hpp"
#include "flow.hpp"
#include "sieve.hpp"
#include "sturm.hpp"

namespace curvsieve {

using nlohmann::json;

inline json to_json(const SignCertificate& c) {
    json j;
    j["polynomial"] = c.polynomial;
    j["interval"] = {c.interval.first, c.interval.second};
    j["root_count_interior"] = c.root_count_interior;
    j["endpoint_signs"] = {c.endpoint_signs.first, c.endpoint_signs.second};
    j["sample"] = {{"point", c.sample.first}, {"sign", c.sample.second}};
    j["verdict"] = to_string(c.verdict);
    if (c.isolating_interval)
        j["isolating_interval"] = {c.isolating_interval->first, c.isolating_interval->second};
    return j;
}

inline json to_json(const ConeFactorCert& c) {
    json j;
    j["factor"] = c.factor;
    j["exponent"] = c.exponent;
    j["certificate"] = to_json(c.cert);
    return j;
}

inline json to_json(const MonotonicityCertificate& c) {
    json j;
    j["velocity"] = c.velocity;
    j["quantity"] = c.quantity;
    j["verdict"] = to_string(c.verdict);
    j["reaction"] = c.reaction.to_string();
    j["c1"] = c.c1.to_string();
    j["reaction_certificate"] = to_json(c.reaction_cert);
    j["c1_certificate"] = to_json(c.c1_cert);
    json factors = json::array();
    for (const auto& f : c.denominator_factor_certs) factors.push_back(to_json(f));
    j["denominator_factor_certificates"] = factors;
    if (c.witness) {
        j["witness"] = {{"l1", to_string(c.witness->l1)},
                        {"l2", to_string(c.witness->l2)},
                        {"value", to_string(c.witness->value)},
                        {"where", c.witness->where}};
    }
    j["note"] = c.note;
    return j;
}

inline json to_json(const ConcavityCertificate& c) {
    json j;
    j["velocity"] = c.velocity;
    j["alpha"] = to_string(c.alpha);
    j["holds"] = c.holds;
    j["off_diagonal_certificate"] = to_json(c.off_diag_cert);
    j["trace_certificate"] = to_json(c.trace_cert);
    j["determinant_certificate"] = to_json(c.det_cert);
    json factors = json::array();
    for (const auto& f : c.factor_certs) factors.push_back(to_json(f));
    j["factor_certificates"] = factors;
    return j;
}

inline json to_json(const CandidateReport& r) {
    json j;
    j["candidate"] = r.candidate.to_string();
    json steps;
    for (SieveStep s : all_steps()) {
        auto it = r.steps.find(s);
        if (it == r.steps.end()) continue;
        json sj;
        switch (it->second.kind) {
            case StepVerdict::Pass: sj["verdict"] = "pass"; break;
            case StepVerdict::Fail: sj["verdict"] = "fail"; break;
            default: sj["verdict"] = "skipped"; break;
        }
        if (!it->second.reason.empty()) sj["reason"] = it->second.reason;
        if (it->second.witness) {
            sj["witness"] = {{"l1", to_string(it->second.witness->l1)},
                             {"l2", to_string(it->second.witness->l2)},
                             {"value", to_string(it->second.witness->value)}};
        }
        steps[step_name(s)] = sj;
    }
    j["steps"] = steps;
    if (r.certificate)
        j["certificate"] = to_json(*r.certificate);
    else
        j["certificate"] = nullptr;
    return j;
}

// Candidate reports are deterministic given (velocity, space, seed); the
// timing block is wall-clock measurement and sits outside the report list.
inline json to_json(const SieveResult& r) {
    json j;
    json reports = json::array();
    for (const auto& rep : r.reports) reports.push_back(to_json(rep));
    j["reports"] = reports;
    j["survivors"] = r.survivors;
    j["certified"] = r.certified;
    json timing;
    for (const auto& [step, agg] : r.timing) {
        timing[step_name(step)] = {{"tests", agg.tests},
                                   {"seconds", agg.seconds},
                                   {"tests_per_second", agg.seconds > 0 ? agg.tests / agg.seconds : 0.0}};
    }
    j["timing"] = timing;
    return j;
}

inline json to_json(const ConstantsRow& r) {
    json j;
    j["c_h"] = to_string(r.c_h);
    j["c_1"] = to_string(r.c_1);
    j["c_alpha"] = to_string(r.c_alpha);
    j["c_d"] = to_string(r.c_d);
    j["exponent"] = to_string(r.exponent);
    return j;
}

inline SignCertificate sign_certificate_from_json(const json& j) {
    SignCertificate c;
    c.polynomial = j.at("polynomial").get<std::string>();
    c.interval = {j.at("interval")[0].get<std::string>(), j.at("interval")[1].get<std::string>()};
    c.root_count_interior = j.at("root_count_interior").get<int>();
    c.endpoint_signs = {j.at("endpoint_signs")[0].get<int>(), j.at("endpoint_signs")[1].get<int>()};
    c.sample = {j.at("sample").at("point").get<std::string>(), j.at("sample").at("sign").get<int>()};
    std::string verdict = j.at("verdict").get<std::string>();
    if (verdict == "strictly-positive")
        c.verdict = SignVerdict::StrictlyPositive;
    else if (verdict == "strictly-negative")
        c.verdict = SignVerdict::StrictlyNegative;
    else if (verdict == "nonnegative")
        c.verdict = SignVerdict::Nonnegative;
    else if (verdict == "nonpositive")
        c.verdict = SignVerdict::Nonpositive;
    else
        c.verdict = SignVerdict::Indefinite;
    if (j.contains("isolating_interval"))
        c.isolating_interval = {{j["isolating_interval"][0].get<std::string>(),
                                 j["isolating_interval"][1].get<std::string>()}};
    return c;
}

// Replay every sign claim embedded in a serialized monotonicity certificate
// from the polynomial texts alone. Returns the number of claims checked;
// throws Error when any claim fails to replay.
inline int replay_monotonicity_certificate(const json& j) {
    int checked = 0;
    auto replay_one = [&checked](const json& cj, const std::string& what) {
        SignCertificate cert = sign_certificate_from_json(cj);
        UPoly p = cert.polynomial == "0" ? UPoly() : parse_upoly(cert.polynomial);
        if (!replay_sign_certificate(cert, p))
            throw Error("certificate claim failed to replay: " + what);
        ++checked;
    };
    replay_one(j.at("reaction_certificate"), "reaction");
    replay_one(j.at("c1_certificate"), "c1");
    for (const auto& fj : j.at("denominator_factor_certificates"))
        replay_one(fj.at("certificate"), fj.at("factor").get<std::string>());

    // A certified verdict additionally requires the recorded reaction and c1
    // to be consistent with the replayed sign claims at a sample point.
    if (j.at("verdict").get<std::string>() == "certified-monotone") {
        RatFn2 reaction = parse_ratfn(j.at("reaction").get<std::string>());
        RatFn2 c1 = parse_ratfn(j.at("c1").get<std::string>());
        for (long num = 1; num <= 5; ++num) {
            Rat x = frac(2 * num + 1, 2);
            if (reaction.eval_exact(x, 1) > 0 || c1.eval_exact(x, 1) > 0 ||
                c1.eval_exact(1, x) > 0)
                throw Error("certified verdict contradicted at a spot check");
            ++checked;
        }
    }
    return checked;
}

inline std::string csv_header() {
    return "t,max_w,min_lambda,max_lambda,pinch_ratio,inner_radius,outer_radius,max_F";
}

inline std::string csv_row(const SeriesRow& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g", r.t, r.max_w,
                  r.min_lambda, r.max_lambda, r.pinch_ratio, r.inner_radius, r.outer_radius, r.max_f);
    return buf;
}

}  // namespace curvsieve
