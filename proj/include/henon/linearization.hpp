#pragma once

#include "henon/radial_ode.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace henon {

/// Which mass matrix the eigenproblem uses: t^k (Morse-index form) or
/// t^(k-2) (degeneracy form).
enum class Weight { K, KM2 };

const char* to_string(Weight w);

/// Graded mesh on [t0, T]: nodes uniform in s(t) = (t - t0)/H + ln(t/t0), so
/// geometric near t0 and uniform in the bulk.
class Mesh {
public:
    static Mesh graded(double t0, double T, std::size_t nodes, double H = 1.0);

    /// Same map with the spacing in s halved (2n - 1 nodes, nested).
    Mesh refined() const;

    /// Appends nodes at the last spacing until T2 is reached; the interior
    /// nodes are unchanged.
    Mesh extended_to(double T2) const;

    const std::vector<double>& nodes() const { return t_; }
    std::size_t size() const { return t_.size(); }
    double t0() const { return t_.front(); }
    double T() const { return t_.back(); }

private:
    std::vector<double> t_;
    double H_ = 1.0;
    bool mapped_ = true;
};

struct MeshParams {
    std::size_t nodes = 4000;
    double t0 = 1e-4;  ///< capped at 1e-3 sqrt(2 a* / |V''(0)|) for concentrated profiles
    double T = 0.0;  ///< 0 selects hand-off + 10/sqrt(m)
    double H = 1.0;
};

/// Resolved mesh for a profile.
Mesh make_mesh(const RadialProfile& profile, const MeshParams& params);

/// Potential of the form q(t) + c / t^2 in -(t^k w')' + t^k (q + c/t^2) w.
struct Potential {
    std::function<double(double)> q;
    double c_inv_sq = 0.0;
};

/// P1 finite elements for -(t^k w')' + t^k q w with lumped masses. Natural
/// condition at t0, Dirichlet at T (the last mesh node is not an unknown).
struct DiscreteOperator {
    std::vector<double> nodes;  ///< unknown nodes t_0 .. t_{n-2}
    std::vector<double> diag;
    std::vector<double> off;
    std::vector<double> b_k;    ///< int t^k phi_i
    std::vector<double> b_km2;  ///< int t^(k-2) phi_i
    double k = 0.0;
    double T = 0.0;

    std::size_t size() const { return diag.size(); }
    const std::vector<double>& mass(Weight w) const { return w == Weight::K ? b_k : b_km2; }

    /// A + c B_km2, i.e. the potential gains c / t^2.
    DiscreteOperator shifted(double c) const;
};

/// Operator for a general potential. Throws DomainError for meshes below 200 nodes.
DiscreteOperator assemble_potential(const Mesh& mesh, double k, const Potential& potential);

/// Linearization at a ground state: q = -F'(V). Throws DomainError when the
/// mesh has fewer than 200 nodes or stops before hand-off + 10/sqrt(m).
DiscreteOperator assemble(const RadialProfile& profile, const ProblemSpec& spec, const Mesh& mesh);

/// Eigenpairs of one discrete operator.
struct EigenPairs {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;  ///< B-normalized
    std::vector<bool> converged;
    std::int64_t negative_count = 0;
};

/// Smallest n_eigs eigenvalues of A v = lambda B v by Sturm bisection,
/// vectors by inverse iteration.
EigenPairs eigen(const DiscreteOperator& op, Weight weight, std::size_t n_eigs, bool with_vectors = true);

/// Number of eigenvalues below `shift`.
std::int64_t sturm_count(const DiscreteOperator& op, Weight weight, double shift);

/// Spectrum on a mesh and its refinement with Richardson extrapolation.
struct SpectrumResult {
    Weight which = Weight::K;
    std::vector<double> eigenvalues;  ///< extrapolated (4 fine - coarse) / 3
    std::vector<double> coarse;
    std::vector<double> fine;
    std::vector<double> refinement;   ///< fine - coarse
    std::vector<double> grid;         ///< fine-mesh unknown nodes
    std::vector<double> mass_k;       ///< fine-mesh lumped t^k masses
    std::vector<double> mass_km2;     ///< fine-mesh lumped t^(k-2) masses
    std::vector<std::vector<double>> eigenvectors;  ///< fine mesh, B-normalized
    std::vector<bool> converged;
    std::int64_t negative_count = 0;  ///< Sturm count at 0 on the fine mesh
    std::int64_t negative_count_coarse = 0;
    std::size_t nodes_coarse = 0;
    std::size_t nodes_fine = 0;

    /// |fine - coarse| / 3, the extrapolation error estimate of eigenvalue i.
    double mesh_error(std::size_t i) const;
};

using OperatorBuilder = std::function<DiscreteOperator(const Mesh&)>;

SpectrumResult spectrum(const OperatorBuilder& build, const Mesh& coarse, Weight weight, std::size_t n_eigs);

SpectrumResult spectrum(const RadialProfile& profile, const ProblemSpec& spec, Weight weight, std::size_t n_eigs,
                        const MeshParams& params = {});

/// Rayleigh quotient w^T A w / w^T B w.
double rayleigh_quotient(const DiscreteOperator& op, Weight weight, const std::vector<double>& w);

/// V' sampled at the operator's unknown nodes.
std::vector<double> sample_derivative(const RadialProfile& profile, const std::vector<double>& nodes);

/// Relative discrete L^2(t^(k-2)) distance between eigenvector `index` and the
/// B-normalized V' (sign aligned), on the fine mesh of `result`.
double eigenvector_error_vs_dv(const SpectrumResult& result, const RadialProfile& profile, std::size_t index = 0);

/// Negative count of the t^k-weighted problem.
std::int64_t morse_index_in_E(const RadialProfile& profile, const ProblemSpec& spec, const MeshParams& params = {});

struct DegeneracyResult {
    int n_alpha = 0;
    bool unresolved = false;
    double band = 0.0;
    std::vector<double> near_zero;  ///< extrapolated eigenvalues inside the band
};

/// Zero eigenvalues of the t^k-weighted problem within a mesh-error band
/// (zero_band <= 0 selects 10x the extrapolation error estimate).
DegeneracyResult degeneracy(const SpectrumResult& k_weight, double zero_band = 0.0);

DegeneracyResult degeneracy(const RadialProfile& profile, const ProblemSpec& spec, const MeshParams& params = {},
                            double zero_band = 0.0);

}  // namespace henon
