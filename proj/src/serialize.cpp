#include "kolmo/serialize.hpp"

#include <ostream>
#include <string>

namespace kolmo {

using nlohmann::json;

json to_json(const PiecewisePolynomial& p) {
    json j;
    j["breakpoints"] = p.breakpoints();
    j["segments"] = p.segments();
    j["left_tail"] = p.left_tail_value();
    return j;
}

PiecewisePolynomial piecewise_from_json(const json& j) {
    return PiecewisePolynomial(j.at("breakpoints").get<std::vector<double>>(),
                               j.at("segments").get<std::vector<std::vector<double>>>(),
                               j.at("left_tail").get<double>());
}

json to_json(const NormProfile& profile) {
    json j = json::object();
    for (const auto& [k, v] : profile.entries) j[std::to_string(k)] = v;
    return j;
}

NormProfile profile_from_json(const json& j) {
    NormProfile profile;
    for (auto it = j.begin(); it != j.end(); ++it)
        profile.set(std::stoi(it.key()), it.value().get<double>());
    return profile;
}

json to_json(const ExtremalParams& params) {
    return json{{"r", params.r}, {"a", params.a}, {"b", params.b}, {"l", params.l}};
}

ExtremalParams params_from_json(const json& j) {
    return {j.at("r").get<int>(), j.at("a").get<double>(), j.at("b").get<double>(),
            j.at("l").get<double>()};
}

json to_json(const FeasibilityReport& report) {
    json j;
    j["feasible"] = report.feasible;
    j["slack_inner"] = report.slack_inner;
    j["phi_norm"] = report.phi_norm ? json(*report.phi_norm) : json(nullptr);
    j["slack_outer"] = report.slack_outer ? json(*report.slack_outer) : json(nullptr);
    j["params"] = report.params ? to_json(*report.params) : json(nullptr);
    return j;
}

json to_json(const Witness& witness) {
    json j;
    j["params"] = to_json(witness.params);
    j["spline"] = to_json(witness.spline);
    j["shift"] = witness.shift;
    j["achieved"] = to_json(witness.achieved);
    return j;
}

Witness witness_from_json(const json& j) {
    Witness w;
    w.params = params_from_json(j.at("params"));
    w.spline = piecewise_from_json(j.at("spline"));
    w.shift = j.at("shift").get<double>();
    w.achieved = profile_from_json(j.at("achieved"));
    return w;
}

void write_jsonl(const SweepReport& report, std::ostream& out) {
    json header{{"type", "header"},
                {"r_min", report.r_min},
                {"r_max", report.r_max},
                {"trials_per_r", report.trials},
                {"seed", report.seed},
                {"max_atoms", report.max_atoms},
                {"membership_grid_points", report.grid_points},
                {"sup_grid_points_per_segment", report.sup_grid_points},
                {"slack_tol", report.slack_tol},
                {"slack_kind", "relative to the lower-order norm"}};
    out << header.dump() << "\n";
    for (const auto& entry : report.entries) {
        json line{{"type", "trial"},
                  {"seed", entry.seed},
                  {"r", entry.r},
                  {"trial", entry.trial},
                  {"skipped", entry.skipped},
                  {"monotone_ok", entry.monotone_ok},
                  {"min_slack", entry.min_slack},
                  {"worst_pair", entry.worst_pair}};
        out << line.dump() << "\n";
    }
    json summary{{"type", "summary"},
                 {"min_slack", report.min_slack},
                 {"failing_seeds", report.failing_seeds},
                 {"trials_total", report.entries.size()}};
    out << summary.dump() << "\n";
}

} // namespace kolmo
