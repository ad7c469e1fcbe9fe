#include "henon/nonlinearity.hpp"

#include "henon/errors.hpp"
#include "henon/format.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace henon {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// u^A / (1 + u^B) with B > 0, and its derivative.
FValue ratio_power(double u, double A, double B) {
    if (u == 0.0) return {0.0, 0.0};
    const double uA = std::pow(u, A);
    const double uB = std::pow(u, B);
    const double den = 1.0 + uB;
    const double value = uA / den;
    const double deriv = (A * uA / u * den - B * uA * uB / u) / (den * den);
    return {value, deriv};
}

FValue eval_nonneg(const NonlinearitySpec& F, double u, double alpha) {
    switch (F.kind) {
        case NonlinearityKind::PowerMinusLinear: {
            const double up1 = std::pow(u, F.p - 1.0);
            return {u * up1 - F.m * u, F.p * up1 - F.m};
        }
        case NonlinearityKind::AlphaDependentPower: {
            const double p = F.growth_exponent(alpha);
            const double up1 = std::pow(u, p - 1.0);
            return {u * up1 - u, p * up1 - 1.0};
        }
        case NonlinearityKind::Polynomial: {
            double up1 = std::pow(u, F.p - 1.0);
            double value = u * up1 - F.m * u;
            double deriv = F.p * up1 - F.m;
            for (const auto& term : F.terms) {
                const double uq1 = std::pow(u, term.exponent - 1.0);
                value += term.coeff * u * uq1;
                deriv += term.coeff * term.exponent * uq1;
            }
            return {value, deriv};
        }
        case NonlinearityKind::MaxPower: {
            // u^p >= u^q exactly when u >= 1 since p > q.
            const double e = u >= 1.0 ? F.p : F.q;
            const double ue1 = std::pow(u, e - 1.0);
            return {u * ue1 - F.m * u, e * ue1 - F.m};
        }
        case NonlinearityKind::Rational: {
            FValue g{};
            if (F.q > F.p) {
                g = ratio_power(u, F.q, F.q - F.p);
            } else if (F.q < F.p) {
                g = ratio_power(u, F.p, F.p - F.q);
            } else {
                const double up1 = std::pow(u, F.p - 1.0);
                g = {0.5 * u * up1, 0.5 * F.p * up1};
            }
            return {g.value - F.m * u, g.deriv - F.m};
        }
    }
    return {kNaN, kNaN};
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

void validate(const NonlinearitySpec& F) {
    auto finite = [](double x) { return std::isfinite(x); };
    require(finite(F.p) && finite(F.q) && finite(F.m) && finite(F.eps), "nonlinearity: non-finite coefficient");
    switch (F.kind) {
        case NonlinearityKind::PowerMinusLinear:
            require(F.p > 1.0, "pow: need p > 1");
            require(F.m > 0.0, "pow: need m > 0");
            break;
        case NonlinearityKind::AlphaDependentPower:
            require(F.eps > 0.0 && F.eps < 4.0, "alphapow: need 0 < eps < 4");
            break;
        case NonlinearityKind::Polynomial:
            require(F.p > 1.0, "poly: need p > 1");
            require(F.m > 0.0, "poly: need m > 0");
            for (const auto& t : F.terms) {
                require(finite(t.exponent) && finite(t.coeff), "poly: non-finite term");
                require(t.exponent > 1.0 && t.exponent < F.p, "poly: need 1 < q < p for every c_q term");
            }
            break;
        case NonlinearityKind::MaxPower:
            require(F.p > F.q && F.q > 1.0, "max: need p > q > 1");
            require(F.m > 0.0, "max: need m > 0");
            break;
        case NonlinearityKind::Rational:
            require(F.p > 1.0 && F.q > 1.0, "rational: need p > 1 and q > 1");
            require(F.m > 0.0, "rational: need m > 0");
            break;
    }
}

double value_or_throw(double x, const char* what, double u) {
    if (!std::isfinite(x)) {
        std::ostringstream os;
        os << "nonlinearity: non-finite " << what << " at u=" << format_double(u);
        throw DomainError(os.str());
    }
    return x;
}

}  // namespace

double NonlinearitySpec::growth_exponent(double alpha) const {
    switch (kind) {
        case NonlinearityKind::AlphaDependentPower:
            if (dimension < 3) throw DomainError("alphapow: dimension not bound (N >= 3 required)");
            return (dimension + 2.0 + 2.0 * alpha - eps) / (dimension - 2.0);
        case NonlinearityKind::Rational:
            return std::min(p, q);
        default:
            return p;
    }
}

NonlinearitySpec NonlinearitySpec::with_dimension(int N) const {
    if (N < 3) throw DomainError("dimension N must be >= 3");
    NonlinearitySpec out = *this;
    if (kind == NonlinearityKind::AlphaDependentPower) out.dimension = N;
    return out;
}

std::string NonlinearitySpec::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case NonlinearityKind::PowerMinusLinear:
            os << "pow:p=" << format_double(p);
            if (m != 1.0) os << ",m=" << format_double(m);
            break;
        case NonlinearityKind::AlphaDependentPower:
            os << "alphapow:eps=" << format_double(eps);
            break;
        case NonlinearityKind::Polynomial:
            os << "poly:p=" << format_double(p) << ",m=" << format_double(m);
            for (const auto& t : terms) os << ",c" << format_double(t.exponent) << "=" << format_double(t.coeff);
            break;
        case NonlinearityKind::MaxPower:
            os << "max:p=" << format_double(p) << ",q=" << format_double(q) << ",m=" << format_double(m);
            break;
        case NonlinearityKind::Rational:
            os << "rational:q=" << format_double(q) << ",p=" << format_double(p) << ",m=" << format_double(m);
            break;
    }
    return os.str();
}

NonlinearitySpec parse_nonlinearity(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    std::map<std::string, double> kv;
    std::vector<PolyTerm> terms;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            require(eq != std::string::npos && eq > 0, "nonlinearity: expected key=value in '" + item + "'");
            const std::string key = item.substr(0, eq);
            double value = 0.0;
            require(parse_double(item.substr(eq + 1), value), "nonlinearity: bad number in '" + item + "'");
            if (kind == "poly" && key.size() > 1 && key[0] == 'c') {
                double q = 0.0;
                require(parse_double(key.substr(1), q), "poly: bad exponent in '" + key + "'");
                terms.push_back({q, value});
                continue;
            }
            require(kv.emplace(key, value).second, "nonlinearity: duplicate key '" + key + "'");
        }
    }

    NonlinearitySpec F;
    auto take = [&](const char* key, double fallback, bool required) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            require(!required, std::string("nonlinearity: missing '") + key + "' for kind " + kind);
            return fallback;
        }
        double v = it->second;
        kv.erase(it);
        return v;
    };

    if (kind == "pow") {
        F.kind = NonlinearityKind::PowerMinusLinear;
        F.p = take("p", 0.0, true);
        F.m = take("m", 1.0, false);
    } else if (kind == "alphapow") {
        F.kind = NonlinearityKind::AlphaDependentPower;
        F.eps = take("eps", 0.0, true);
        F.p = 0.0;
        F.m = 1.0;
    } else if (kind == "poly") {
        F.kind = NonlinearityKind::Polynomial;
        F.p = take("p", 0.0, true);
        F.m = take("m", 1.0, false);
        std::sort(terms.begin(), terms.end(),
                  [](const PolyTerm& a, const PolyTerm& b) { return a.exponent < b.exponent; });
        F.terms = std::move(terms);
    } else if (kind == "max") {
        F.kind = NonlinearityKind::MaxPower;
        F.p = take("p", 0.0, true);
        F.q = take("q", 0.0, true);
        F.m = take("m", 1.0, false);
    } else if (kind == "rational") {
        F.kind = NonlinearityKind::Rational;
        F.q = take("q", 0.0, true);
        F.p = take("p", 0.0, true);
        F.m = take("m", 1.0, false);
    } else {
        throw DomainError("nonlinearity: unknown kind '" + kind + "'");
    }
    require(kv.empty(), "nonlinearity: unknown key '" + (kv.empty() ? std::string() : kv.begin()->first) + "'");
    validate(F);
    return F;
}

FValue eval(const NonlinearitySpec& F, double u, double alpha) {
    if (!std::isfinite(u)) throw DomainError("nonlinearity: non-finite argument");
    FValue r = u < 0.0 ? eval_nonneg(F, -u, alpha) : eval_nonneg(F, u, alpha);
    if (u < 0.0) r.value = -r.value;
    value_or_throw(r.value, "F", u);
    value_or_throw(r.deriv, "F'", u);
    return r;
}

double eval_value(const NonlinearitySpec& F, double u, double alpha) { return eval(F, u, alpha).value; }

double primitive(const NonlinearitySpec& F, double u, double alpha) {
    if (!std::isfinite(u)) throw DomainError("nonlinearity: non-finite argument");
    // F is odd, so its primitive is even
    const double x = std::fabs(u);
    if (x == 0.0) return 0.0;
    auto pw = [x](double e) { return std::pow(x, e + 1.0) / (e + 1.0); };
    double P = 0.0;
    switch (F.kind) {
        case NonlinearityKind::PowerMinusLinear: P = pw(F.p) - F.m * x * x / 2.0; break;
        case NonlinearityKind::AlphaDependentPower: P = pw(F.growth_exponent(alpha)) - x * x / 2.0; break;
        case NonlinearityKind::Polynomial:
            P = pw(F.p) - F.m * x * x / 2.0;
            for (const auto& term : F.terms) P += term.coeff * pw(term.exponent);
            break;
        case NonlinearityKind::MaxPower:
            P = x <= 1.0 ? pw(F.q) : 1.0 / (F.q + 1.0) + pw(F.p) - 1.0 / (F.p + 1.0);
            P -= F.m * x * x / 2.0;
            break;
        case NonlinearityKind::Rational: {
            // no elementary primitive for general exponents; 1e-12 sits above the rule's estimate floor
            auto f = [&](double s) { return eval_value(F, s, alpha); };
            P = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, x, 10, 1e-12);
            break;
        }
    }
    value_or_throw(P, "primitive", u);
    return P;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("log_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

AssumptionReport check_assumptions(const NonlinearitySpec& F, std::span<const double> scan_grid, double alpha) {
    std::vector<double> grid(scan_grid.begin(), scan_grid.end());
    if (grid.empty()) throw DomainError("check_assumptions: empty scan grid");
    std::sort(grid.begin(), grid.end());
    if (!(grid.front() > 0.0)) throw DomainError("check_assumptions: scan grid must be positive");

    AssumptionReport rep;
    rep.theta = rep.phi = rep.s_witness = kNaN;
    rep.f2_literal_witness = rep.f3_witness = kNaN;

    auto Fv = [&](double u) { return eval_value(F, u, alpha); };
    auto G = [&](double u) {
        const FValue r = eval(F, u, alpha);
        return u * r.deriv / r.value;
    };

    const FValue at0 = eval(F, 0.0, alpha);
    rep.fin0 = at0.value == 0.0 && at0.deriv < 0.0;

    // theta: first negative-to-positive sign change of F.
    boost::math::tools::eps_tolerance<double> tol(52);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = Fv(grid[i]);
        const double b = Fv(grid[i + 1]);
        if (a < 0.0 && b >= 0.0) {
            if (b == 0.0) {
                rep.theta = grid[i + 1];
            } else {
                std::uintmax_t iters = 200;
                auto r = boost::math::tools::toms748_solve(Fv, grid[i], grid[i + 1], a, b, tol, iters);
                rep.theta = 0.5 * (r.first + r.second);
            }
            break;
        }
    }
    const double u_max = grid.back();
    if (!std::isnan(rep.theta) && u_max < 10.0 * rep.theta)
        throw DomainError("check_assumptions: scan grid must reach 10*theta");

    // phi: zero of the primitive beyond theta. The first grid point with a
    // positive primitive doubles as s_witness.
    auto P = [&](double u) { return primitive(F, u, alpha); };
    double prev_u = 0.0;
    double prev_P = 0.0;
    for (double u : grid) {
        const double Pu = P(u);
        if (Pu > 0.0) {
            rep.s_witness = u;
            if (!std::isnan(rep.theta) && prev_u >= rep.theta && prev_P <= 0.0) {
                std::uintmax_t iters = 200;
                auto r = boost::math::tools::toms748_solve(P, prev_u, u, prev_P, Pu, tol, iters);
                rep.phi = 0.5 * (r.first + r.second);
            } else if (!std::isnan(rep.theta)) {
                // Bracket from theta, where the primitive is at its minimum.
                const double Pt = P(rep.theta);
                if (Pt < 0.0) {
                    std::uintmax_t iters = 200;
                    auto r = boost::math::tools::toms748_solve(P, rep.theta, u, Pt, Pu, tol, iters);
                    rep.phi = 0.5 * (r.first + r.second);
                }
            }
            break;
        }
        prev_u = u;
        prev_P = Pu;
    }
    rep.fnozero = !std::isnan(rep.s_witness);

    // Behaviour at infinity, probed where u^p stays comfortably finite.
    const double p = F.growth_exponent(alpha);
    const double u_big = std::min(1e8, std::pow(10.0, 250.0 / p));
    rep.lambda_limit = G(u_big);
    rep.ell = std::abs(Fv(u_big)) / std::pow(u_big, p);
    double ratio_sup = 0.0;
    for (double u : grid)
        if (u >= 1.0) ratio_sup = std::max(ratio_sup, std::abs(Fv(u)) / std::pow(u, p));
    rep.fcresce = std::isfinite(rep.ell) && std::isfinite(ratio_sup);

    if (std::isnan(rep.theta)) {
        rep.f2_literal = rep.f2_positive = rep.f3 = rep.g_nonincreasing = false;
        return rep;
    }

    const double theta = rep.theta;
    auto near_theta = [&](double u) { return std::abs(u - theta) < 1e-3 * theta; };

    // sign structure around theta, literal and "F > 0" readings
    bool lit = true;
    bool pos = true;
    for (double u : grid) {
        if (near_theta(u)) continue;
        const double f = Fv(u);
        if (u < theta) {
            if (!(f < 0.0)) {
                lit = pos = false;
                if (std::isnan(rep.f2_literal_witness)) rep.f2_literal_witness = u;
            }
        } else {
            if (!(f > 0.0)) pos = false;
            if (!(f > theta)) {
                lit = false;
                if (std::isnan(rep.f2_literal_witness)) rep.f2_literal_witness = u;
            }
        }
    }
    const bool decreasing_near_zero = at0.deriv <= 0.0 && eval(F, grid.front(), alpha).deriv <= 0.0;
    rep.f2_literal = lit && decreasing_near_zero;
    rep.f2_positive = pos && decreasing_near_zero;

    // G bounded below by G(phi) before phi, nonincreasing after
    bool mono = !std::isnan(rep.phi);
    bool f3 = mono && rep.lambda_limit >= 1.0;
    if (mono) {
        const double G_phi = G(rep.phi);
        double last = G_phi;
        for (double u : grid) {
            if (near_theta(u)) continue;
            const double g = G(u);
            if (u >= rep.phi) {
                if (g > last + 1e-12 * (1.0 + std::abs(last))) {
                    mono = false;
                    if (std::isnan(rep.f3_witness)) rep.f3_witness = u;
                }
                last = g;
            } else if (u >= theta) {
                if (g < G_phi - 1e-12 * (1.0 + std::abs(G_phi))) {
                    f3 = false;
                    if (std::isnan(rep.f3_witness)) rep.f3_witness = u;
                }
            } else if (g > rep.lambda_limit + 1e-12 * (1.0 + std::abs(rep.lambda_limit))) {
                f3 = false;
                if (std::isnan(rep.f3_witness)) rep.f3_witness = u;
            }
        }
    }
    rep.g_nonincreasing = mono;
    rep.f3 = f3 && mono;
    return rep;
}

}  // namespace henon
