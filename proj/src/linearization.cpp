#include "henon/linearization.hpp"

#include "henon/errors.hpp"
#include "henon/format.hpp"
#include "henon/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace henon {
namespace {

constexpr std::size_t kMinNodes = 200;

// Gauss-Legendre 5-point rule on [0, 1].
constexpr std::array<double, 5> kGx = {0.04691007703066800, 0.23076534494715845, 0.5, 0.76923465505284155,
                                       0.95308992296933200};
constexpr std::array<double, 5> kGw = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                                       0.23931433524968324, 0.11846344252809454};

struct ElementMoments {
    double full;   // int_e t^w
    double left;   // int_e t^w (b - t)/h
    double right;  // int_e t^w (t - a)/h
};

ElementMoments moments(double a, double b, double w) {
    const double h = b - a;
    ElementMoments m{0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < kGx.size(); ++q) {
        const double x = a + h * kGx[q];
        const double f = kGw[q] * h * std::pow(x, w);
        m.full += f;
        m.left += f * (1.0 - kGx[q]);
        m.right += f * kGx[q];
    }
    return m;
}

double invert_map(double s, double t0, double H) {
    // Root of g(x) = (e^x - t0)/H + x - ln t0 - s in x = ln t; g is convex and
    // increasing, so Newton from the right converges monotonically.
    const double lt0 = std::log(t0);
    double x = std::min(lt0 + s, std::log(t0 + H * s));
    for (int it = 0; it < 100; ++it) {
        const double ex = std::exp(x);
        const double g = (ex - t0) / H + x - lt0 - s;
        const double dx = g / (ex / H + 1.0);
        x -= dx;
        if (std::fabs(dx) <= 1e-15 * std::max(1.0, std::fabs(x))) break;
    }
    return std::exp(x);
}

// Tridiagonal LU with partial pivoting (LAPACK gttrf/gtts2 layout).
class TridiagLu {
public:
    TridiagLu(std::vector<double> dl, std::vector<double> d, std::vector<double> du, double tiny)
        : dl_(std::move(dl)), d_(std::move(d)), du_(std::move(du)), du2_(d_.size(), 0.0), swap_(d_.size(), 0) {
        const std::size_t n = d_.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::fabs(d_[i]) >= std::fabs(dl_[i])) {
                if (d_[i] == 0.0) d_[i] = tiny;
                const double fact = dl_[i] / d_[i];
                dl_[i] = fact;
                d_[i + 1] -= fact * du_[i];
            } else {
                const double fact = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = fact;
                const double temp = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = temp - fact * d_[i + 1];
                if (i + 2 < n) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -fact * du_[i + 1];
                }
                swap_[i] = 1;
            }
        }
        for (auto& x : d_)
            if (std::fabs(x) < tiny) x = x < 0.0 ? -tiny : tiny;
    }

    void solve(std::vector<double>& b) const {
        const std::size_t n = d_.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swap_[i]) {
                b[i + 1] -= dl_[i] * b[i];
            } else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl_[i] * b[i];
            }
        }
        b[n - 1] /= d_[n - 1];
        if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
        for (std::size_t i = n >= 3 ? n - 3 : 0; n >= 3; --i) {
            b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
            if (i == 0) break;
        }
    }

private:
    std::vector<double> dl_, d_, du_, du2_;
    std::vector<char> swap_;
};

std::vector<double> squared(const std::vector<double>& off) {
    std::vector<double> out(off.size());
    for (std::size_t i = 0; i < off.size(); ++i) out[i] = off[i] * off[i];
    return out;
}

double pivmin_for(const std::vector<double>& off_sq) {
    double mx = 1.0;
    for (double x : off_sq) mx = std::max(mx, x);
    return std::numeric_limits<double>::min() * mx;
}

double b_norm(const std::vector<double>& B, const std::vector<double>& x) {
    return std::sqrt(kernels::weighted_dot(B, x, x));
}

}  // namespace

const char* to_string(Weight w) { return w == Weight::K ? "K_WEIGHT" : "KM2_WEIGHT"; }

// ---------------------------------------------------------------------------
// Mesh

Mesh Mesh::graded(double t0, double T, std::size_t nodes, double H) {
    if (!(t0 > 0.0) || !(T > t0)) throw DomainError("Mesh: need 0 < t0 < T");
    if (nodes < 3) throw DomainError("Mesh: need at least 3 nodes");
    if (!(H > 0.0)) throw DomainError("Mesh: H must be > 0");
    Mesh m;
    m.H_ = H;
    m.t_.resize(nodes);
    const double s_max = (T - t0) / H + std::log(T / t0);
    m.t_.front() = t0;
    m.t_.back() = T;
    for (std::size_t j = 1; j + 1 < nodes; ++j)
        m.t_[j] = invert_map(s_max * static_cast<double>(j) / static_cast<double>(nodes - 1), t0, H);
    return m;
}

Mesh Mesh::refined() const {
    if (!mapped_) throw DomainError("Mesh: only mapped meshes can be refined");
    return graded(t0(), T(), 2 * (size() - 1) + 1, H_);
}

Mesh Mesh::extended_to(double T2) const {
    if (!(T2 > T())) throw DomainError("Mesh: extension must increase T");
    Mesh m = *this;
    m.mapped_ = false;
    const double h = t_[t_.size() - 1] - t_[t_.size() - 2];
    const auto extra = static_cast<std::size_t>(std::ceil((T2 - T()) / h - 1e-9));
    for (std::size_t j = 1; j <= extra; ++j) m.t_.push_back(j == extra ? T2 : T() + static_cast<double>(j) * h);
    return m;
}

Mesh make_mesh(const RadialProfile& profile, const MeshParams& params) {
    const double T = params.T > 0.0 ? params.T : profile.handoff_t() + 10.0 / profile.sqrt_m();
    double t0 = params.t0;
    if (!profile.ddv().empty() && profile.ddv().front() != 0.0 && profile.a_star > 0.0)
        t0 = std::min(t0, 1e-3 * std::sqrt(2.0 * profile.a_star / std::fabs(profile.ddv().front())));
    return Mesh::graded(t0, T, params.nodes, params.H);
}

// ---------------------------------------------------------------------------
// Assembly

DiscreteOperator DiscreteOperator::shifted(double c) const {
    DiscreteOperator out = *this;
    for (std::size_t i = 0; i < out.diag.size(); ++i) out.diag[i] += c * b_km2[i];
    return out;
}

DiscreteOperator assemble_potential(const Mesh& mesh, double k, const Potential& potential) {
    const auto& t = mesh.nodes();
    const std::size_t nn = t.size();
    if (nn < kMinNodes) throw DomainError("assemble: mesh has fewer than 200 nodes");
    if (!(k > 0.0)) throw DomainError("assemble: k must be > 0");
    const std::size_t n = nn - 1;

    DiscreteOperator op;
    op.k = k;
    op.T = t.back();
    op.nodes.assign(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(n));
    op.diag.assign(n, 0.0);
    op.off.assign(n - 1, 0.0);
    op.b_k.assign(n, 0.0);
    op.b_km2.assign(n, 0.0);

    for (std::size_t e = 0; e + 1 < nn; ++e) {
        const double a = t[e], b = t[e + 1], h = b - a;
        const ElementMoments mk = moments(a, b, k);
        const ElementMoments mk2 = moments(a, b, k - 2.0);
        const double stiff = mk.full / (h * h);
        op.diag[e] += stiff;
        op.b_k[e] += mk.left;
        op.b_km2[e] += mk2.left;
        if (e + 1 < n) {
            op.diag[e + 1] += stiff;
            op.off[e] = -stiff;
            op.b_k[e + 1] += mk.right;
            op.b_km2[e + 1] += mk2.right;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double q = potential.q ? potential.q(op.nodes[i]) : 0.0;
        op.diag[i] += q * op.b_k[i] + potential.c_inv_sq * op.b_km2[i];
        if (!std::isfinite(op.diag[i])) throw DomainError("assemble: non-finite matrix entry");
    }
    return op;
}

DiscreteOperator assemble(const RadialProfile& profile, const ProblemSpec& spec, const Mesh& mesh) {
    const double need = profile.handoff_t() + 10.0 / profile.sqrt_m();
    if (mesh.T() < need * (1.0 - 1e-12))
        throw DomainError("assemble: mesh must extend to hand-off + 10/sqrt(m) (T >= " + format_double(need) + ")");
    Potential pot;
    pot.q = [&](double x) { return -spec.f(profile.value(x)).deriv; };
    return assemble_potential(mesh, profile.k(), pot);
}

// ---------------------------------------------------------------------------
// Eigen-solver

std::int64_t sturm_count(const DiscreteOperator& op, Weight weight, double shift) {
    const auto off_sq = squared(op.off);
    const kernels::PencilView pencil{op.diag, off_sq, op.mass(weight), pivmin_for(off_sq)};
    return kernels::sturm_counts(pencil, {shift, shift, shift, shift})[0];
}

EigenPairs eigen(const DiscreteOperator& op, Weight weight, std::size_t n_eigs, bool with_vectors) {
    const std::size_t n = op.size();
    const auto& B = op.mass(weight);
    const auto off_sq = squared(op.off);
    const kernels::PencilView pencil{op.diag, off_sq, B, pivmin_for(off_sq)};
    n_eigs = std::min(n_eigs, n);

    // Gershgorin bounds of B^(-1/2) A B^(-1/2).
    double g_lo = std::numeric_limits<double>::infinity();
    double g_hi = -g_lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(op.off[i - 1]) / std::sqrt(B[i] * B[i - 1]);
        if (i + 1 < n) r += std::fabs(op.off[i]) / std::sqrt(B[i] * B[i + 1]);
        const double c = op.diag[i] / B[i];
        g_lo = std::min(g_lo, c - r);
        g_hi = std::max(g_hi, c + r);
    }
    g_lo -= 1e-12 * std::fabs(g_lo) + 1e-300;
    g_hi += 1e-12 * std::fabs(g_hi) + 1e-300;

    auto count1 = [&](double s) { return kernels::sturm_counts(pencil, {s, s, s, s})[0]; };

    EigenPairs out;
    out.negative_count = count1(0.0);
    out.values.resize(n_eigs);

    double upper = std::min(g_hi, std::max(1.0, std::fabs(g_lo)));
    while (n_eigs > 0 && count1(upper) < static_cast<std::int64_t>(n_eigs) && upper < g_hi)
        upper = std::min(g_hi, 2.0 * upper + 1.0);

    for (std::size_t l = 0; l < n_eigs; ++l) {
        const auto target = static_cast<std::int64_t>(l);
        double lo = l > 0 ? out.values[l - 1] : g_lo;
        double hi = upper;
        if (l > 0 && count1(lo) > target) lo = g_lo;
        for (int pass = 0; pass < 200; ++pass) {
            if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(lo), std::fabs(hi)))
                break;
            kernels::Shifts s;
            for (std::size_t j = 0; j < kernels::kSturmLanes; ++j)
                s[j] = lo + (hi - lo) * static_cast<double>(j + 1) / static_cast<double>(kernels::kSturmLanes + 1);
            const auto c = kernels::sturm_counts(pencil, s);
            double new_lo = lo, new_hi = hi;
            for (std::size_t j = 0; j < kernels::kSturmLanes; ++j) {
                if (c[j] <= target)
                    new_lo = std::max(new_lo, s[j]);
                else
                    new_hi = std::min(new_hi, s[j]);
            }
            if (new_lo == lo && new_hi == hi) break;
            lo = new_lo;
            hi = new_hi;
        }
        out.values[l] = lo + 0.5 * (hi - lo);
    }

    out.converged.assign(n_eigs, true);
    if (!with_vectors) return out;

    double a_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = std::fabs(op.diag[i]);
        if (i > 0) r += std::fabs(op.off[i - 1]);
        if (i + 1 < n) r += std::fabs(op.off[i]);
        a_norm = std::max(a_norm, r);
    }
    double b_max = 0.0;
    for (double b : B) b_max = std::max(b_max, b);

    std::vector<double> ax(n), bx(n);
    for (std::size_t l = 0; l < n_eigs; ++l) {
        const double lam = out.values[l];
        std::vector<double> dl(op.off), du(op.off), d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = op.diag[i] - lam * B[i];
        const TridiagLu lu(std::move(dl), std::move(d), std::move(du),
                           std::numeric_limits<double>::epsilon() * (a_norm + std::fabs(lam) * b_max));
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.25 * std::sin(0.7 * static_cast<double>(i) + l);
        bool ok = false;
        for (int it = 0; it < 8; ++it) {
            for (std::size_t i = 0; i < n; ++i) x[i] *= B[i];
            lu.solve(x);
            for (std::size_t p = 0; p < l; ++p) {
                const double proj = kernels::weighted_dot(B, x, out.vectors[p]);
                for (std::size_t i = 0; i < n; ++i) x[i] -= proj * out.vectors[p][i];
            }
            const double nrm = b_norm(B, x);
            if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
            for (double& xi : x) xi /= nrm;

            kernels::tridiag_matvec(op.diag, op.off, x, ax);
            double res = 0.0, xmax = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                res = std::max(res, std::fabs(ax[i] - lam * B[i] * x[i]));
                xmax = std::max(xmax, std::fabs(x[i]));
            }
            if (it >= 1 && res <= 1e-10 * (a_norm + std::fabs(lam) * b_max) * xmax) {
                ok = true;
                break;
            }
        }
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::fabs(x[i]) > std::fabs(x[imax])) imax = i;
        if (x[imax] < 0.0)
            for (double& xi : x) xi = -xi;
        out.converged[l] = ok;
        out.vectors.push_back(std::move(x));
    }
    return out;
}

double SpectrumResult::mesh_error(std::size_t i) const { return std::fabs(refinement.at(i)) / 3.0; }

SpectrumResult spectrum(const OperatorBuilder& build, const Mesh& coarse, Weight weight, std::size_t n_eigs) {
    const Mesh fine_mesh = coarse.refined();
    const DiscreteOperator op_c = build(coarse);
    const DiscreteOperator op_f = build(fine_mesh);
    const EigenPairs ec = eigen(op_c, weight, n_eigs, false);
    EigenPairs ef = eigen(op_f, weight, n_eigs, true);

    SpectrumResult r;
    r.which = weight;
    r.coarse = ec.values;
    r.fine = ef.values;
    const std::size_t m = std::min(r.coarse.size(), r.fine.size());
    r.eigenvalues.resize(m);
    r.refinement.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        r.eigenvalues[i] = (4.0 * r.fine[i] - r.coarse[i]) / 3.0;
        r.refinement[i] = r.fine[i] - r.coarse[i];
    }
    r.grid = op_f.nodes;
    r.mass_k = op_f.b_k;
    r.mass_km2 = op_f.b_km2;
    r.eigenvectors = std::move(ef.vectors);
    r.converged = std::move(ef.converged);
    r.negative_count = ef.negative_count;
    r.negative_count_coarse = ec.negative_count;
    r.nodes_coarse = coarse.size();
    r.nodes_fine = fine_mesh.size();
    return r;
}

SpectrumResult spectrum(const RadialProfile& profile, const ProblemSpec& spec, Weight weight, std::size_t n_eigs,
                        const MeshParams& params) {
    const Mesh mesh = make_mesh(profile, params);
    return spectrum([&](const Mesh& m) { return assemble(profile, spec, m); }, mesh, weight, n_eigs);
}

double rayleigh_quotient(const DiscreteOperator& op, Weight weight, const std::vector<double>& w) {
    if (w.size() != op.size()) throw DomainError("rayleigh_quotient: size mismatch");
    std::vector<double> aw(w.size());
    kernels::tridiag_matvec(op.diag, op.off, w, aw);
    double num = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) num += w[i] * aw[i];
    return num / kernels::weighted_dot(op.mass(weight), w, w);
}

std::vector<double> sample_derivative(const RadialProfile& profile, const std::vector<double>& nodes) {
    std::vector<double> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = profile.deriv(nodes[i]);
    return out;
}

double eigenvector_error_vs_dv(const SpectrumResult& result, const RadialProfile& profile, std::size_t index) {
    if (index >= result.eigenvectors.size()) throw DomainError("eigenvector_error_vs_dv: no such eigenvector");
    const auto& B = result.mass_km2;
    std::vector<double> v = sample_derivative(profile, result.grid);
    const double nv = b_norm(B, v);
    if (!(nv > 0.0)) throw DomainError("eigenvector_error_vs_dv: V' vanishes on the grid");
    for (double& vi : v) vi /= nv;
    std::vector<double> w = result.eigenvectors[index];
    const double nw = b_norm(B, w);
    for (double& wi : w) wi /= nw;
    if (kernels::weighted_dot(B, v, w) < 0.0)
        for (double& wi : w) wi = -wi;
    std::vector<double> diff(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) diff[i] = w[i] - v[i];
    return b_norm(B, diff);
}

std::int64_t morse_index_in_E(const RadialProfile& profile, const ProblemSpec& spec, const MeshParams& params) {
    const Mesh mesh = make_mesh(profile, params);
    return sturm_count(assemble(profile, spec, mesh.refined()), Weight::K, 0.0);
}

DegeneracyResult degeneracy(const SpectrumResult& k_weight, double zero_band) {
    DegeneracyResult out;
    int count = 0;
    double band_used = 0.0;
    for (std::size_t i = 0; i < k_weight.eigenvalues.size(); ++i) {
        const double lam = k_weight.eigenvalues[i];
        const double band = zero_band > 0.0 ? zero_band : std::max(10.0 * k_weight.mesh_error(i), 1e-9);
        band_used = std::max(band_used, band);
        if (std::fabs(lam) < band) {
            ++count;
            out.near_zero.push_back(lam);
        } else if ((k_weight.coarse[i] < 0.0) != (k_weight.fine[i] < 0.0)) {
            out.unresolved = true;
        }
    }
    out.band = band_used;
    if (count > 2) out.unresolved = true;
    out.n_alpha = std::min(count, 2);
    return out;
}

DegeneracyResult degeneracy(const RadialProfile& profile, const ProblemSpec& spec, const MeshParams& params,
                            double zero_band) {
    return degeneracy(spectrum(profile, spec, Weight::K, 4, params), zero_band);
}

}  // namespace henon
