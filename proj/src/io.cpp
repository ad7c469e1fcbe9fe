#include "henon/io.hpp"

#include "henon/errors.hpp"
#include "henon/format.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace henon {

using nlohmann::json;

namespace {

// JSON has no NaN or infinity; those travel as the strings "nan", "inf", "-inf".
json num(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

double get_num(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "nan") return std::nan("");
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
    }
    throw DomainError(std::string("artifact field '") + key + "' is not a number");
}

json num_array(const std::vector<double>& xs) {
    json a = json::array();
    for (double x : xs) a.push_back(num(x));
    return a;
}

std::vector<double> get_num_array(const json& j, const char* key) {
    std::vector<double> out;
    for (const json& v : j.at(key)) {
        json wrap = {{"v", v}};
        out.push_back(get_num(wrap, "v"));
    }
    return out;
}

Weight weight_from(const std::string& s) {
    if (s == to_string(Weight::K)) return Weight::K;
    if (s == to_string(Weight::KM2)) return Weight::KM2;
    throw DomainError("unknown weight '" + s + "'");
}

Side side_from(const std::string& s) {
    if (s == to_string(Side::Left)) return Side::Left;
    if (s == to_string(Side::Right)) return Side::Right;
    throw DomainError("unknown side '" + s + "'");
}

BesselRegime regime_from(const std::string& s) {
    if (s == to_string(BesselRegime::Series)) return BesselRegime::Series;
    if (s == to_string(BesselRegime::Asymptotic)) return BesselRegime::Asymptotic;
    throw DomainError("unknown regime '" + s + "'");
}

class Csv {
public:
    explicit Csv(std::initializer_list<const char*> header) {
        bool first = true;
        for (const char* h : header) {
            if (!first) out_ << ',';
            out_ << h;
            first = false;
        }
        out_ << '\n';
    }

    Csv& cell(double x) { return raw(format_double(x)); }
    Csv& cell(std::int64_t x) { return raw(std::to_string(x)); }
    Csv& cell(std::uint64_t x) { return raw(std::to_string(x)); }
    Csv& cell(int x) { return raw(std::to_string(x)); }
    Csv& cell(bool x) { return raw(x ? "1" : "0"); }
    Csv& cell(const std::string& s) { return raw(s); }
    Csv& cell(const char* s) { return raw(s); }

    void end_row() {
        out_ << '\n';
        first_ = true;
    }

    std::string str() const { return out_.str(); }

private:
    Csv& raw(const std::string& s) {
        if (!first_) out_ << ',';
        out_ << s;
        first_ = false;
        return *this;
    }

    std::ostringstream out_;
    bool first_ = true;
};

}  // namespace

SolveArtifact make_solve_artifact(const RadialProfile& profile, const ProblemSpec& spec) {
    SolveArtifact a;
    a.N = spec.N;
    a.alpha = spec.alpha;
    a.F = spec.F.to_string();
    a.k = spec.k();
    a.m = spec.mass();
    a.a_star = profile.a_star;
    a.delta_fit = profile.delta_fit;
    a.energy_grad = profile.energy_grad;
    a.energy_l2 = profile.energy_l2;
    a.ni_excess = ni_bound_excess(profile);
    a.handoff_t = profile.handoff_t();
    a.tail_constant = profile.tail_constant();
    a.ode_residual = ode_residual(profile, spec);
    a.bisection_tol = profile.bisection_tol;
    a.integrator_rtol = profile.integrator_rtol;
    a.integrations = profile.integrations;
    a.bisections = profile.bisections;
    a.nodes = profile.size();
    return a;
}

SpectrumArtifact make_spectrum_artifact(const SpectrumResult& result, const RadialProfile& profile,
                                        const ProblemSpec& spec) {
    SpectrumArtifact a;
    a.N = spec.N;
    a.alpha = spec.alpha;
    a.F = spec.F.to_string();
    a.k = spec.k();
    a.weight = result.which;
    a.nodes_coarse = result.nodes_coarse;
    a.nodes_fine = result.nodes_fine;
    a.eigenvalues = result.eigenvalues;
    a.coarse = result.coarse;
    a.fine = result.fine;
    for (std::size_t i = 0; i < result.eigenvalues.size(); ++i) a.errors.push_back(result.mesh_error(i));
    a.converged = result.converged;
    a.negative_count = result.negative_count;
    a.negative_count_coarse = result.negative_count_coarse;
    if (result.which == Weight::KM2 && !result.eigenvectors.empty())
        a.eigenvector_error = eigenvector_error_vs_dv(result, profile, 0);
    if (result.which == Weight::K) a.degeneracy = degeneracy(result);
    return a;
}

void to_json(json& j, const SolveArtifact& a) {
    j = json{{"N", a.N},
             {"alpha", num(a.alpha)},
             {"F", a.F},
             {"k", num(a.k)},
             {"m", num(a.m)},
             {"a_star", num(a.a_star)},
             {"delta_fit", num(a.delta_fit)},
             {"energy_grad", num(a.energy_grad)},
             {"energy_l2", num(a.energy_l2)},
             {"ni_excess", num(a.ni_excess)},
             {"handoff_t", num(a.handoff_t)},
             {"tail_constant", num(a.tail_constant)},
             {"ode_residual", num(a.ode_residual)},
             {"bisection_tol", num(a.bisection_tol)},
             {"integrator_rtol", num(a.integrator_rtol)},
             {"integrations", a.integrations},
             {"bisections", a.bisections},
             {"nodes", a.nodes}};
}

void from_json(const json& j, SolveArtifact& a) {
    a.N = j.at("N").get<int>();
    a.alpha = get_num(j, "alpha");
    a.F = j.at("F").get<std::string>();
    a.k = get_num(j, "k");
    a.m = get_num(j, "m");
    a.a_star = get_num(j, "a_star");
    a.delta_fit = get_num(j, "delta_fit");
    a.energy_grad = get_num(j, "energy_grad");
    a.energy_l2 = get_num(j, "energy_l2");
    a.ni_excess = get_num(j, "ni_excess");
    a.handoff_t = get_num(j, "handoff_t");
    a.tail_constant = get_num(j, "tail_constant");
    a.ode_residual = get_num(j, "ode_residual");
    a.bisection_tol = get_num(j, "bisection_tol");
    a.integrator_rtol = get_num(j, "integrator_rtol");
    a.integrations = j.at("integrations").get<std::size_t>();
    a.bisections = j.at("bisections").get<std::size_t>();
    a.nodes = j.at("nodes").get<std::size_t>();
}

void to_json(json& j, const DegeneracyResult& d) {
    j = json{{"n_alpha", d.n_alpha}, {"unresolved", d.unresolved}, {"band", num(d.band)},
             {"near_zero", num_array(d.near_zero)}};
}

void from_json(const json& j, DegeneracyResult& d) {
    d.n_alpha = j.at("n_alpha").get<int>();
    d.unresolved = j.at("unresolved").get<bool>();
    d.band = get_num(j, "band");
    d.near_zero = get_num_array(j, "near_zero");
}

void to_json(json& j, const SpectrumArtifact& a) {
    j = json{{"N", a.N},
             {"alpha", num(a.alpha)},
             {"F", a.F},
             {"k", num(a.k)},
             {"weight", to_string(a.weight)},
             {"nodes_coarse", a.nodes_coarse},
             {"nodes_fine", a.nodes_fine},
             {"eigenvalues", num_array(a.eigenvalues)},
             {"coarse", num_array(a.coarse)},
             {"fine", num_array(a.fine)},
             {"errors", num_array(a.errors)},
             {"converged", a.converged},
             {"negative_count", a.negative_count},
             {"negative_count_coarse", a.negative_count_coarse}};
    j["eigenvector_error"] = a.eigenvector_error ? num(*a.eigenvector_error) : json(nullptr);
    j["degeneracy"] = a.degeneracy ? json(*a.degeneracy) : json(nullptr);
}

void from_json(const json& j, SpectrumArtifact& a) {
    a.N = j.at("N").get<int>();
    a.alpha = get_num(j, "alpha");
    a.F = j.at("F").get<std::string>();
    a.k = get_num(j, "k");
    a.weight = weight_from(j.at("weight").get<std::string>());
    a.nodes_coarse = j.at("nodes_coarse").get<std::size_t>();
    a.nodes_fine = j.at("nodes_fine").get<std::size_t>();
    a.eigenvalues = get_num_array(j, "eigenvalues");
    a.coarse = get_num_array(j, "coarse");
    a.fine = get_num_array(j, "fine");
    a.errors = get_num_array(j, "errors");
    a.converged = j.at("converged").get<std::vector<bool>>();
    a.negative_count = j.at("negative_count").get<std::int64_t>();
    a.negative_count_coarse = j.at("negative_count_coarse").get<std::int64_t>();
    a.eigenvector_error.reset();
    if (!j.at("eigenvector_error").is_null()) a.eigenvector_error = get_num(j, "eigenvector_error");
    a.degeneracy.reset();
    if (!j.at("degeneracy").is_null()) a.degeneracy = j.at("degeneracy").get<DegeneracyResult>();
}

void to_json(json& j, const MorseReport& r) {
    j = json{{"alpha", num(r.alpha)},
             {"N", r.N},
             {"m_closed", r.m_closed},
             {"m_symmetric", r.m_symmetric},
             {"is_bifurcation_value", r.is_bifurcation_value},
             {"kernel_dim", r.kernel_dim},
             {"n_alpha_input", r.n_alpha_input}};
    j["m_numeric"] = r.m_numeric ? json(*r.m_numeric) : json(nullptr);
    j["side"] = r.side ? json(to_string(*r.side)) : json(nullptr);
}

void from_json(const json& j, MorseReport& r) {
    r.alpha = get_num(j, "alpha");
    r.N = j.at("N").get<int>();
    r.m_closed = j.at("m_closed").get<std::uint64_t>();
    r.m_symmetric = j.at("m_symmetric").get<std::uint64_t>();
    r.is_bifurcation_value = j.at("is_bifurcation_value").get<bool>();
    r.kernel_dim = j.at("kernel_dim").get<std::uint64_t>();
    r.n_alpha_input = j.at("n_alpha_input").get<int>();
    r.m_numeric.reset();
    if (!j.at("m_numeric").is_null()) r.m_numeric = j.at("m_numeric").get<std::int64_t>();
    r.side.reset();
    if (!j.at("side").is_null()) r.side = side_from(j.at("side").get<std::string>());
}

void to_json(json& j, const MorseTable& t) { j = json{{"N", t.N}, {"rows", t.rows}}; }

void from_json(const json& j, MorseTable& t) {
    t.N = j.at("N").get<int>();
    t.rows = j.at("rows").get<std::vector<MorseReport>>();
}

void to_json(json& j, const BranchReport& b) {
    json factors = json::array();
    for (const auto& [h, rest] : b.factors) factors.push_back({h, rest});
    j = json{{"alpha_i", b.alpha_i}, {"i", b.i}, {"branch_count", b.branch_count}, {"groups", b.groups},
             {"factors", factors}};
}

void from_json(const json& j, BranchReport& b) {
    b.alpha_i = j.at("alpha_i").get<int>();
    b.i = j.at("i").get<int>();
    b.branch_count = j.at("branch_count").get<int>();
    b.groups = j.at("groups").get<std::vector<std::string>>();
    b.factors.clear();
    for (const json& f : j.at("factors")) b.factors.emplace_back(f.at(0).get<int>(), f.at(1).get<int>());
}

void to_json(json& j, const SweepSample& s) {
    j = json{{"alpha", num(s.alpha)},
             {"alpha_requested", num(s.alpha_requested)},
             {"offset", s.offset},
             {"ok", s.ok},
             {"error", s.error},
             {"a_star", num(s.a_star)},
             {"delta_fit", num(s.delta_fit)},
             {"k", num(s.k)},
             {"m_numeric", s.m_numeric},
             {"m_closed", s.m_closed},
             {"lambda1_km2", num(s.lambda1_km2)},
             {"lambda1_error", num(s.lambda1_error)},
             {"degeneracy_flag", s.degeneracy_flag},
             {"degeneracy_unresolved", s.degeneracy_unresolved},
             {"bisections", s.bisections},
             {"integrations", s.integrations},
             {"warm_start", s.warm_start}};
}

void from_json(const json& j, SweepSample& s) {
    s.alpha = get_num(j, "alpha");
    s.alpha_requested = get_num(j, "alpha_requested");
    s.offset = j.at("offset").get<bool>();
    s.ok = j.at("ok").get<bool>();
    s.error = j.at("error").get<std::string>();
    s.a_star = get_num(j, "a_star");
    s.delta_fit = get_num(j, "delta_fit");
    s.k = get_num(j, "k");
    s.m_numeric = j.at("m_numeric").get<std::int64_t>();
    s.m_closed = j.at("m_closed").get<std::uint64_t>();
    s.lambda1_km2 = get_num(j, "lambda1_km2");
    s.lambda1_error = get_num(j, "lambda1_error");
    s.degeneracy_flag = j.at("degeneracy_flag").get<int>();
    s.degeneracy_unresolved = j.at("degeneracy_unresolved").get<bool>();
    s.bisections = j.at("bisections").get<std::size_t>();
    s.integrations = j.at("integrations").get<std::size_t>();
    s.warm_start = j.at("warm_start").get<bool>();
}

void to_json(json& j, const DetectedJump& d) {
    j = json{{"alpha_lo", num(d.alpha_lo)}, {"alpha_hi", num(d.alpha_hi)}, {"size", d.size}};
}

void from_json(const json& j, DetectedJump& d) {
    d.alpha_lo = get_num(j, "alpha_lo");
    d.alpha_hi = get_num(j, "alpha_hi");
    d.size = j.at("size").get<std::int64_t>();
}

void to_json(json& j, const PredictedValue& p) {
    j = json{{"alpha_i", p.alpha_i}, {"kernel_dim", p.kernel_dim}, {"census", p.census}};
}

void from_json(const json& j, PredictedValue& p) {
    p.alpha_i = j.at("alpha_i").get<int>();
    p.kernel_dim = j.at("kernel_dim").get<std::uint64_t>();
    p.census = j.at("census").get<BranchReport>();
}

void to_json(json& j, const SweepResult& s) {
    j = json{{"N", s.N},
             {"F", s.F},
             {"alpha_lo", num(s.alpha_lo)},
             {"alpha_hi", num(s.alpha_hi)},
             {"n_samples", s.n_samples},
             {"mesh_nodes", s.mesh_nodes},
             {"samples", s.samples},
             {"detected_jumps", s.detected_jumps},
             {"predicted", s.predicted},
             {"monotone", s.monotone}};
}

void from_json(const json& j, SweepResult& s) {
    s.N = j.at("N").get<int>();
    s.F = j.at("F").get<std::string>();
    s.alpha_lo = get_num(j, "alpha_lo");
    s.alpha_hi = get_num(j, "alpha_hi");
    s.n_samples = j.at("n_samples").get<std::size_t>();
    s.mesh_nodes = j.at("mesh_nodes").get<std::size_t>();
    s.samples = j.at("samples").get<std::vector<SweepSample>>();
    s.detected_jumps = j.at("detected_jumps").get<std::vector<DetectedJump>>();
    s.predicted = j.at("predicted").get<std::vector<PredictedValue>>();
    s.monotone = j.at("monotone").get<bool>();
}

void to_json(json& j, const IdentityCheck& c) {
    j = json{{"name", c.name}, {"passed", c.passed}, {"gating", c.gating}, {"detail", c.detail}};
}

void from_json(const json& j, IdentityCheck& c) {
    c.name = j.at("name").get<std::string>();
    c.passed = j.at("passed").get<bool>();
    c.gating = j.at("gating").get<bool>();
    c.detail = j.at("detail").get<std::string>();
}

void to_json(json& j, const IdentityReport& r) { j = json{{"checks", r.checks}, {"passed", r.passed}}; }

void from_json(const json& j, IdentityReport& r) {
    r.checks = j.at("checks").get<std::vector<IdentityCheck>>();
    r.passed = j.at("passed").get<bool>();
}

void to_json(json& j, const SweepArtifact& a) { j = json{{"sweep", a.sweep}, {"identities", a.identities}}; }

void from_json(const json& j, SweepArtifact& a) {
    a.sweep = j.at("sweep").get<SweepResult>();
    a.identities = j.at("identities").get<IdentityReport>();
}

void to_json(json& j, const BesselPair& p) {
    j = json{{"nu", num(p.nu)},         {"s", num(p.s)},
             {"I", num(p.I)},           {"K", num(p.K)},
             {"dI", num(p.dI)},         {"dK", num(p.dK)},
             {"I_next", num(p.I_next)}, {"K_next", num(p.K_next)},
             {"regime", to_string(p.regime)}, {"near_integer", p.near_integer}};
}

void from_json(const json& j, BesselPair& p) {
    p.nu = get_num(j, "nu");
    p.s = get_num(j, "s");
    p.I = get_num(j, "I");
    p.K = get_num(j, "K");
    p.dI = get_num(j, "dI");
    p.dK = get_num(j, "dK");
    p.I_next = get_num(j, "I_next");
    p.K_next = get_num(j, "K_next");
    p.regime = regime_from(j.at("regime").get<std::string>());
    p.near_integer = j.at("near_integer").get<bool>();
}

void to_json(json& j, const BesselTable& t) { j = json{{"rows", t.rows}}; }

void from_json(const json& j, BesselTable& t) { t.rows = j.at("rows").get<std::vector<BesselPair>>(); }

void to_json(json& j, const DecaySample& s) {
    j = json{{"t", num(s.t)},
             {"Z", num(s.Z)},
             {"weighted", num(s.weighted)},
             {"plus_term", num(s.plus_term)},
             {"minus_term", num(s.minus_term)},
             {"residual", num(s.residual)}};
}

void from_json(const json& j, DecaySample& s) {
    s.t = get_num(j, "t");
    s.Z = get_num(j, "Z");
    s.weighted = get_num(j, "weighted");
    s.plus_term = get_num(j, "plus_term");
    s.minus_term = get_num(j, "minus_term");
    s.residual = get_num(j, "residual");
}

void to_json(json& j, const DecayReport& r) {
    j = json{{"h", to_string(r.h)},
             {"alpha", num(r.alpha)},
             {"m", num(r.m)},
             {"N", r.N},
             {"beta", num(r.beta)},
             {"k", num(r.k)},
             {"nu", num(r.nu)},
             {"samples", r.samples},
             {"window_lo", num(r.window_lo)},
             {"window_hi", num(r.window_hi)},
             {"tail_sup", num(r.tail_sup)},
             {"decade_ratio", num(r.decade_ratio)},
             {"monotone", r.monotone},
             {"max_residual", num(r.max_residual)}};
}

void from_json(const json& j, DecayReport& r) {
    r.h = parse_tail_source(j.at("h").get<std::string>());
    r.alpha = get_num(j, "alpha");
    r.m = get_num(j, "m");
    r.N = j.at("N").get<int>();
    r.beta = get_num(j, "beta");
    r.k = get_num(j, "k");
    r.nu = get_num(j, "nu");
    r.samples = j.at("samples").get<std::vector<DecaySample>>();
    r.window_lo = get_num(j, "window_lo");
    r.window_hi = get_num(j, "window_hi");
    r.tail_sup = get_num(j, "tail_sup");
    r.decade_ratio = get_num(j, "decade_ratio");
    r.monotone = j.at("monotone").get<bool>();
    r.max_residual = get_num(j, "max_residual");
}

void to_json(json& j, const AssumptionReport& r) {
    j = json{{"theta", num(r.theta)},
             {"phi", num(r.phi)},
             {"lambda_limit", num(r.lambda_limit)},
             {"ell", num(r.ell)},
             {"s_witness", num(r.s_witness)},
             {"fin0", r.fin0},
             {"fcresce", r.fcresce},
             {"fnozero", r.fnozero},
             {"f2_literal", r.f2_literal},
             {"f2_positive", r.f2_positive},
             {"f3", r.f3},
             {"g_nonincreasing", r.g_nonincreasing},
             {"f2_literal_witness", num(r.f2_literal_witness)},
             {"f3_witness", num(r.f3_witness)},
             {"all_pass", r.all_pass()}};
}

void from_json(const json& j, AssumptionReport& r) {
    r.theta = get_num(j, "theta");
    r.phi = get_num(j, "phi");
    r.lambda_limit = get_num(j, "lambda_limit");
    r.ell = get_num(j, "ell");
    r.s_witness = get_num(j, "s_witness");
    r.fin0 = j.at("fin0").get<bool>();
    r.fcresce = j.at("fcresce").get<bool>();
    r.fnozero = j.at("fnozero").get<bool>();
    r.f2_literal = j.at("f2_literal").get<bool>();
    r.f2_positive = j.at("f2_positive").get<bool>();
    r.f3 = j.at("f3").get<bool>();
    r.g_nonincreasing = j.at("g_nonincreasing").get<bool>();
    r.f2_literal_witness = get_num(j, "f2_literal_witness");
    r.f3_witness = get_num(j, "f3_witness");
}

void to_json(json& j, const CheckFArtifact& a) {
    j = json{{"F", a.F}, {"alpha", num(a.alpha)}, {"N", a.N}, {"report", a.report}};
}

void from_json(const json& j, CheckFArtifact& a) {
    a.F = j.at("F").get<std::string>();
    a.alpha = get_num(j, "alpha");
    a.N = j.at("N").get<int>();
    a.report = j.at("report").get<AssumptionReport>();
}

std::string wrap_artifact(const std::string& command, const json& result) {
    json j = {{"schema", kSchemaVersion}, {"command", command}, {"result", result}};
    return j.dump(2) + "\n";
}

json unwrap_artifact(const std::string& text, const std::string& command) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("artifact is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("schema") || j.at("schema") != kSchemaVersion)
        throw DomainError("artifact schema is not " + std::to_string(kSchemaVersion));
    if (j.value("command", std::string()) != command)
        throw DomainError("artifact was written by '" + j.value("command", std::string()) + "', expected '" +
                          command + "'");
    return j.at("result");
}

std::string to_csv(const RadialProfile& profile) {
    Csv c({"t", "V", "dV", "computed"});
    for (std::size_t i = 0; i < profile.size(); ++i) {
        c.cell(profile.t()[i]).cell(profile.v()[i]).cell(profile.dv()[i]).cell(profile.t()[i] <= profile.handoff_t());
        c.end_row();
    }
    return c.str();
}

std::string to_csv(const SpectrumArtifact& a) {
    Csv c({"index", "weight", "eigenvalue", "coarse", "fine", "error", "converged"});
    for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) {
        c.cell(static_cast<std::uint64_t>(i)).cell(to_string(a.weight)).cell(a.eigenvalues[i]).cell(a.coarse[i]);
        c.cell(a.fine[i]).cell(a.errors[i]).cell(static_cast<bool>(a.converged[i]));
        c.end_row();
    }
    return c.str();
}

std::string to_csv(const MorseTable& t) {
    Csv c({"alpha", "side", "m", "m_symmetric", "kernel_dim", "bifurcation"});
    for (const MorseReport& r : t.rows) {
        c.cell(r.alpha).cell(r.side ? to_string(*r.side) : "").cell(r.m_closed).cell(r.m_symmetric);
        c.cell(r.kernel_dim).cell(r.is_bifurcation_value);
        c.end_row();
    }
    return c.str();
}

std::string to_csv(const SweepResult& s) {
    Csv c({"alpha", "alpha_requested", "ok", "a_star", "m_numeric", "m_closed", "lambda1_km2", "lambda1_error",
           "degeneracy_flag", "delta_fit", "bisections"});
    for (const SweepSample& x : s.samples) {
        c.cell(x.alpha).cell(x.alpha_requested).cell(x.ok).cell(x.a_star).cell(x.m_numeric).cell(x.m_closed);
        c.cell(x.lambda1_km2).cell(x.lambda1_error).cell(x.degeneracy_flag).cell(x.delta_fit);
        c.cell(static_cast<std::uint64_t>(x.bisections));
        c.end_row();
    }
    return c.str();
}

std::string to_csv(const BesselTable& t) {
    Csv c({"nu", "s", "I", "K", "dI", "dK", "regime"});
    for (const BesselPair& p : t.rows) {
        c.cell(p.nu).cell(p.s).cell(p.I).cell(p.K).cell(p.dI).cell(p.dK).cell(to_string(p.regime));
        c.end_row();
    }
    return c.str();
}

std::string to_csv(const DecayReport& r) {
    Csv c({"t", "Z", "weighted", "plus_term", "minus_term", "residual"});
    for (const DecaySample& s : r.samples) {
        c.cell(s.t).cell(s.Z).cell(s.weighted).cell(s.plus_term).cell(s.minus_term).cell(s.residual);
        c.end_row();
    }
    return c.str();
}

std::string to_csv(const BranchReport& b) {
    Csv c({"alpha_i", "i", "branch", "group", "h", "n_minus_h"});
    for (std::size_t g = 0; g < b.groups.size(); ++g) {
        c.cell(b.alpha_i).cell(b.i).cell(static_cast<std::uint64_t>(g + 1)).cell(b.groups[g]);
        c.cell(b.factors[g].first).cell(b.factors[g].second);
        c.end_row();
    }
    return c.str();
}

std::string to_csv(const CheckFArtifact& a) {
    const AssumptionReport& r = a.report;
    Csv c({"F", "alpha", "theta", "phi", "lambda_limit", "ell", "fin0", "fcresce", "fnozero", "f2_literal",
           "f2_positive", "f3", "all_pass"});
    c.cell(a.F).cell(a.alpha).cell(r.theta).cell(r.phi).cell(r.lambda_limit).cell(r.ell).cell(r.fin0);
    c.cell(r.fcresce).cell(r.fnozero).cell(r.f2_literal).cell(r.f2_positive).cell(r.f3).cell(r.all_pass());
    c.end_row();
    return c.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("rename to " + path.string() + " failed: " + ec.message());
    }
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace henon
