#pragma once

#include "henon/asymptotics.hpp"
#include "henon/continuation.hpp"
#include "henon/linearization.hpp"
#include "henon/nonlinearity.hpp"
#include "henon/radial_ode.hpp"
#include "henon/spectral_geometry.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace henon {

inline constexpr int kSchemaVersion = 1;

/// Ground-state summary written by `solve`.
struct SolveArtifact {
    int N = 3;
    double alpha = 0.0;
    std::string F;
    double k = 0.0;
    double m = 1.0;
    double a_star = 0.0;
    double delta_fit = 0.0;
    double energy_grad = 0.0;
    double energy_l2 = 0.0;
    double ni_excess = 0.0;
    double handoff_t = 0.0;
    double tail_constant = 0.0;
    double ode_residual = 0.0;
    double bisection_tol = 0.0;
    double integrator_rtol = 0.0;
    std::size_t integrations = 0;
    std::size_t bisections = 0;
    std::size_t nodes = 0;
};

SolveArtifact make_solve_artifact(const RadialProfile& profile, const ProblemSpec& spec);

/// Eigenvalues of one weight written by `spectrum`.
struct SpectrumArtifact {
    int N = 3;
    double alpha = 0.0;
    std::string F;
    double k = 0.0;
    Weight weight = Weight::KM2;
    std::size_t nodes_coarse = 0;
    std::size_t nodes_fine = 0;
    std::vector<double> eigenvalues;
    std::vector<double> coarse;
    std::vector<double> fine;
    std::vector<double> errors;
    std::vector<bool> converged;
    std::int64_t negative_count = 0;
    std::int64_t negative_count_coarse = 0;
    std::optional<double> eigenvector_error;  ///< t^(k-2) weight only
    std::optional<DegeneracyResult> degeneracy;  ///< t^k weight only
};

SpectrumArtifact make_spectrum_artifact(const SpectrumResult& result, const RadialProfile& profile,
                                        const ProblemSpec& spec);

struct MorseTable {
    int N = 3;
    std::vector<MorseReport> rows;
};

struct SweepArtifact {
    SweepResult sweep;
    IdentityReport identities;
};

struct BesselTable {
    std::vector<BesselPair> rows;
};

struct CheckFArtifact {
    std::string F;
    double alpha = 0.0;
    int N = 3;
    AssumptionReport report;
};

void to_json(nlohmann::json& j, const SolveArtifact& a);
void from_json(const nlohmann::json& j, SolveArtifact& a);
void to_json(nlohmann::json& j, const DegeneracyResult& d);
void from_json(const nlohmann::json& j, DegeneracyResult& d);
void to_json(nlohmann::json& j, const SpectrumArtifact& a);
void from_json(const nlohmann::json& j, SpectrumArtifact& a);
void to_json(nlohmann::json& j, const MorseReport& r);
void from_json(const nlohmann::json& j, MorseReport& r);
void to_json(nlohmann::json& j, const MorseTable& t);
void from_json(const nlohmann::json& j, MorseTable& t);
void to_json(nlohmann::json& j, const BranchReport& b);
void from_json(const nlohmann::json& j, BranchReport& b);
void to_json(nlohmann::json& j, const SweepSample& s);
void from_json(const nlohmann::json& j, SweepSample& s);
void to_json(nlohmann::json& j, const DetectedJump& d);
void from_json(const nlohmann::json& j, DetectedJump& d);
void to_json(nlohmann::json& j, const PredictedValue& p);
void from_json(const nlohmann::json& j, PredictedValue& p);
void to_json(nlohmann::json& j, const SweepResult& s);
void from_json(const nlohmann::json& j, SweepResult& s);
void to_json(nlohmann::json& j, const IdentityCheck& c);
void from_json(const nlohmann::json& j, IdentityCheck& c);
void to_json(nlohmann::json& j, const IdentityReport& r);
void from_json(const nlohmann::json& j, IdentityReport& r);
void to_json(nlohmann::json& j, const SweepArtifact& a);
void from_json(const nlohmann::json& j, SweepArtifact& a);
void to_json(nlohmann::json& j, const BesselPair& p);
void from_json(const nlohmann::json& j, BesselPair& p);
void to_json(nlohmann::json& j, const BesselTable& t);
void from_json(const nlohmann::json& j, BesselTable& t);
void to_json(nlohmann::json& j, const DecaySample& s);
void from_json(const nlohmann::json& j, DecaySample& s);
void to_json(nlohmann::json& j, const DecayReport& r);
void from_json(const nlohmann::json& j, DecayReport& r);
void to_json(nlohmann::json& j, const AssumptionReport& r);
void from_json(const nlohmann::json& j, AssumptionReport& r);
void to_json(nlohmann::json& j, const CheckFArtifact& a);
void from_json(const nlohmann::json& j, CheckFArtifact& a);

/// {"schema": 1, "command": ..., "result": ...}. Throws DomainError when the
/// schema or command does not match on read.
std::string wrap_artifact(const std::string& command, const nlohmann::json& result);
nlohmann::json unwrap_artifact(const std::string& text, const std::string& command);

/// CSV tables: header row, '.' decimals, '\n' endings, shortest round-trip numbers.
std::string to_csv(const RadialProfile& profile);
std::string to_csv(const SpectrumArtifact& a);
std::string to_csv(const MorseTable& t);
std::string to_csv(const SweepResult& s);
std::string to_csv(const BesselTable& t);
std::string to_csv(const DecayReport& r);
std::string to_csv(const BranchReport& b);
std::string to_csv(const CheckFArtifact& a);

/// Writes via a temporary file in the same directory and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& data);

}  // namespace henon
