#pragma once

#include "henon/linearization.hpp"
#include "henon/radial_ode.hpp"
#include "henon/spectral_geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace henon {

struct SweepSample {
    double alpha = 0.0;            ///< value actually solved
    double alpha_requested = 0.0;  ///< grid value before the even-alpha offset
    bool offset = false;
    bool ok = false;
    std::string error;             ///< failure message when !ok
    double a_star = 0.0;
    double delta_fit = 0.0;
    double k = 0.0;
    std::int64_t m_numeric = 0;    ///< sum_j N_j * #negative of L + c_j / t^2
    std::uint64_t m_closed = 0;
    double lambda1_km2 = 0.0;      ///< extrapolated
    double lambda1_error = 0.0;    ///< extrapolation error estimate
    int degeneracy_flag = 0;       ///< radial kernel dimension found
    bool degeneracy_unresolved = false;
    std::size_t bisections = 0;
    std::size_t integrations = 0;
    bool warm_start = false;
};

struct DetectedJump {
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    std::int64_t size = 0;
};

struct PredictedValue {
    int alpha_i = 0;
    std::uint64_t kernel_dim = 0;
    BranchReport census;
};

struct SweepResult {
    int N = 3;
    std::string F;  ///< canonical nonlinearity string
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    std::size_t n_samples = 0;
    std::size_t mesh_nodes = 0;
    std::vector<SweepSample> samples;
    std::vector<DetectedJump> detected_jumps;
    std::vector<PredictedValue> predicted;
    bool monotone = true;  ///< m_numeric non-decreasing over the successful samples
};

struct SweepOptions {
    MeshParams mesh;
    ShootOptions shoot;
    double even_guard = 1e-6;   ///< samples this close to 2Z are moved
    double even_offset = 1e-3;  ///< by this amount (upwards)
};

/// Uniform samples of alpha on [alpha_lo, alpha_hi]; each is shot (warm
/// started by secant prediction from the previous two successes), its
/// spectra computed and compared with the closed-form index. Failures are
/// recorded per sample. An empty range or n_samples == 0 gives an empty
/// result.
SweepResult sweep(int N, const NonlinearitySpec& F, double alpha_lo, double alpha_hi, std::size_t n_samples,
                  const SweepOptions& opts = {});

/// Morse index in R^N from the radial operator: sum over j of N_j times the
/// number of negative eigenvalues of the t^k-weighted problem with the extra
/// potential 4 mu_j / ((2 + alpha)^2 t^2). Stops at the first j with none.
std::int64_t morse_index_numeric(const DiscreteOperator& op, double alpha, int N);

struct IdentityCheck {
    std::string name;
    bool passed = false;
    bool gating = true;
    std::string detail;
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;
    bool passed = false;  ///< all gating checks passed
};

/// Checks lambda_1 = -k within lambda_tol (relative), m_numeric = m_closed,
/// jump sizes against kernel dimensions, no radial kernel off 2Z, and (non
/// gating) monotonicity of m_numeric. Throws DomainError on an empty sweep.
IdentityReport verify_identity_suite(const SweepResult& sweep, double lambda_tol = 1e-4);

}  // namespace henon
