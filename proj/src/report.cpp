#include "dnet/report.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "dnet/error.hpp"

namespace dnet {

using nlohmann::json;

namespace {

json log2_or_null(GainValue g) { return g.is_zero() ? json(nullptr) : json(g.log2()); }

json subset_table(const std::vector<SubsetValue>& rows) {
    json out = json::array();
    for (const auto& r : rows) out.push_back({{"u", subset_to_json(r.u)}, {"value", r.value}});
    return out;
}

}  // namespace

json subset_to_json(const std::vector<int>& u) {
    json out = json::array();
    for (int j : u) out.push_back(j + 1);
    return out;
}

std::vector<int> subset_from_json(const json& j) {
    std::vector<int> u;
    for (const auto& v : j) u.push_back(v.get<int>() - 1);
    return u;
}

json to_json(const SubsetIndex& idx) { return {{"u", subset_to_json(idx.u)}, {"k", idx.k}}; }

json to_json(const QualityReport& r) {
    json out;
    out["m"] = r.m;
    out["s"] = r.dims;
    out["t"] = r.t;
    out["t_d"] = r.t_d;
    out["t_star_full"] = r.t_star_full;
    if (r.subsets_computed) {
        out["t_u"] = subset_table(r.t_u);
        out["t_star_u"] = subset_table(r.t_star_u);
    } else {
        out["t_u"] = nullptr;
        out["t_star_u"] = nullptr;
    }
    out["A_K"] = r.a_k;
    return out;
}

json to_json(const GainReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"u", subset_to_json(e.idx.u)}, {"k", e.idx.k}, {"log2_gain", e.gain.log2()}, {"rank", e.rank}});
    json out;
    out["m"] = r.m;
    out["s"] = r.dims;
    out["max_depth"] = r.max_depth;
    out["t"] = r.t;
    out["t_star_full"] = r.t_star_full;
    out["visited"] = r.visited;
    out["truncated"] = r.truncated;
    out["bound_violations"] = r.bound_violations;
    out["gamma_max_log2"] = log2_or_null(r.gamma_max);
    out["attaining"] = r.attaining ? to_json(*r.attaining) : json(nullptr);
    out["theoretical_max_log2"] = log2_or_null(r.theoretical_max);
    out["theoretical_attained"] = r.theoretical_attained;
    out["entries"] = std::move(entries);
    return out;
}

GainReport gain_report_from_json(const json& j) {
    GainReport r;
    r.m = j.at("m").get<int>();
    r.dims = j.at("s").get<int>();
    r.max_depth = j.at("max_depth").get<int>();
    r.t = j.at("t").get<int>();
    r.t_star_full = j.at("t_star_full").get<int>();
    r.visited = j.at("visited").get<std::uint64_t>();
    r.truncated = j.at("truncated").get<bool>();
    r.bound_violations = j.at("bound_violations").get<int>();
    const auto& g = j.at("gamma_max_log2");
    r.gamma_max = g.is_null() ? GainValue::zero() : GainValue::pow2(g.get<int>());
    const auto& th = j.at("theoretical_max_log2");
    r.theoretical_max = th.is_null() ? GainValue::zero() : GainValue::pow2(th.get<int>());
    r.theoretical_attained = j.at("theoretical_attained").get<bool>();
    if (!j.at("attaining").is_null())
        r.attaining = SubsetIndex{subset_from_json(j["attaining"]["u"]), j["attaining"]["k"].get<std::vector<int>>()};
    for (const auto& e : j.at("entries"))
        r.entries.push_back({SubsetIndex{subset_from_json(e.at("u")), e.at("k").get<std::vector<int>>()},
                             GainValue::pow2(e.at("log2_gain").get<int>()), e.at("rank").get<int>()});
    return r;
}

json to_json(const RqmcEstimate& e) {
    return {{"mean", e.mean},
            {"variance_of_mean", e.variance_of_mean},
            {"std_error", std::sqrt(e.variance_of_mean)},
            {"replicates", e.replicates},
            {"per_replicate_means", e.per_replicate_means}};
}

json to_json(const GainIdentityReport& r) {
    json out{{"u", subset_to_json(r.idx.u)},
             {"k", r.idx.k},
             {"expected_gain_log2", log2_or_null(r.expected)},
             {"expected_gain", r.expected.value()},
             {"empirical_n_var", r.empirical_n_var},
             {"mc_se", r.mc_se},
             {"replicates", r.replicates},
             {"scramble", to_string(r.kind)},
             {"pass", r.pass}};
    if (r.nested_pass) {
        out["nested_uniform_rerun"] = {{"empirical_n_var", *r.nested_n_var}, {"mc_se", *r.nested_mc_se}, {"pass", *r.nested_pass}};
    }
    return out;
}

json to_json(const SuiteResult& r) {
    json failures = json::array();
    for (const auto& f : r.failures) failures.push_back({{"trial", f.trial}, {"generators", f.generators}, {"detail", f.detail}});
    return {{"suite", r.suite},       {"nets", r.nets},         {"checks", r.checks},
            {"passed", r.passed()},   {"failure_count", r.failure_count}, {"failures", std::move(failures)}};
}

json to_json(const std::vector<SuiteResult>& results) {
    json suites = json::array();
    bool ok = true;
    for (const auto& r : results) {
        ok = ok && r.passed();
        suites.push_back(to_json(r));
    }
    return {{"passed", ok}, {"suites", std::move(suites)}};
}

json analyze(const GeneratorSet& g, const QualityOptions& opts) {
    const auto q = compute_quality(g, opts);
    const auto mg = max_gain(g);
    auto out = to_json(q);
    out["gamma_log2"] = mg.gamma.log2();
    out["gamma_witness"] = to_json(mg.witness);
    out["gamma_degenerate"] = mg.degenerate;
    out["bound_log2"] = std::min(q.t + g.dims() - 1, g.m());
    return out;
}

void write_gain_csv(const GainReport& r, std::ostream& out) {
    out << "u,k,log2_gain,rank\n";
    for (const auto& e : r.entries) {
        for (std::size_t a = 0; a < e.idx.u.size(); ++a) out << (a ? ";" : "") << e.idx.u[a] + 1;
        out << ',';
        for (std::size_t a = 0; a < e.idx.k.size(); ++a) out << (a ? ";" : "") << e.idx.k[a];
        out << ',' << e.gain.log2() << ',' << e.rank << '\n';
    }
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::logic_error&) {
            throw ValidationError("expected a comma-separated integer list, got '" + text + "'");
        }
    }
    return out;
}

std::vector<std::vector<int>> parse_subset_list(const std::string& text) {
    std::vector<std::vector<int>> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto u = parse_int_list(part);
        for (auto& j : u) {
            if (j < 1) throw ValidationError("subset indices are 1-based");
            --j;
        }
        out.push_back(std::move(u));
    }
    return out;
}

Integrand parse_integrand(const std::string& spec, int dims) {
    if (spec == "prod") {
        return [](std::span<const double> x) {
            double v = 1.0;
            for (double xi : x) v *= xi;
            return v;
        };
    }
    if (spec.rfind("const:", 0) == 0) {
        double c = 0;
        try {
            c = std::stod(spec.substr(6));
        } catch (const std::logic_error&) {
            throw ValidationError("bad constant in integrand '" + spec + "'");
        }
        return [c](std::span<const double>) { return c; };
    }
    if (spec.rfind("haar:", 0) == 0) {
        const auto rest = spec.substr(5);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw ValidationError("expected haar:<u>:<k>");
        auto u = parse_subset_list(rest.substr(0, colon));
        if (u.size() != 1) throw ValidationError("haar integrand takes one subset");
        SubsetIndex idx{u.front(), parse_int_list(rest.substr(colon + 1))};
        idx.validate(dims);
        return HaarIntegrand{idx.u, idx.k, 1.0};
    }
    throw ValidationError("unknown integrand '" + spec + "' (expected prod, const:<c> or haar:<u>:<k>)");
}

}  // namespace dnet
