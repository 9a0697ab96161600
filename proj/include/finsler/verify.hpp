#pragma once

// Scenario-driven verification: samples a metric-family scenario over its
// admissible domain, evaluates every claimed identity as a normalized
// residual, and aggregates the outcome into a deterministic report.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "finsler/family.hpp"

namespace finsler {

struct SamplingSpec {
    enum class Mode { Random, Grid } mode = Mode::Random;
    int count = 100;                 // random-mode sample count
    std::array<int, 2> grid = {10, 10};
    std::uint64_t seed = 1;
    int directions = 24;             // 16 equally spaced + the rest random
    int proof_points = 20;           // points used by the identity-chain checks
};

struct StructureSpec {
    bool use_poly = false;
    std::vector<std::complex<double>> f_poly; // u + i v = f(x1 + i x2), lowest degree first
    std::string u, v;                         // expression strings when use_poly = false
    std::string B;
};

struct Scenario {
    FamilyParams params;
    StructureSpec structure;
    Domain domain;
    SamplingSpec sampling;
    std::map<std::string, double> tolerances; // overrides of the defaults
    std::vector<std::string> checks;          // empty = default set
};

// named polynomial constants of the curvature identity chain, as functions
// of (k1, k2, b^2)
struct ProofScalars {
    double D1; // 4 + (k1 + 3 k2) b^2
    double D2; // 2 (1 - k1 k2 b^4) + (k2 - k1) b^2
    double A, A1, A2, T;
};

ProofScalars proof_scalars(double k1, double k2, double b2);

// residuals (normalized) of the curvature identity chain at one admissible
// point and direction; keys are stable, see README for the catalogue
std::map<std::string, double> proof_chain_residuals(const FamilyParams& p, const StructureData& d,
                                                    const Vec2& x, const Vec2& y);
std::map<std::string, double> proof_chain_residuals(const Scenario& sc, const Vec2& x, const Vec2& y);

struct CheckResult {
    std::string name;
    std::size_t samples = 0;
    std::size_t skipped = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    bool has_worst = false;
    Vec2 worst_point = {0.0, 0.0};
};

struct ReportEnvironment {
    std::uint64_t seed = 0;
    int x_order = 2, y_order = 4;
    double phi_quadrature_abs_tol = 1e-12;
    double volume_quadrature_rel_tol = 1e-11;
    int points = 0;
    int directions = 0;
};

struct VerificationReport {
    std::string schema_version = "1";
    FamilyParams params;
    ReportEnvironment env;
    std::vector<CheckResult> checks;
    bool overall = true;

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// default tolerance per check name (pinned here, overridable per scenario)
const std::map<std::string, double>& default_tolerances();

// names of the standard suite checks, in report order
std::vector<std::string> default_checks();

// Build the structure described by a scenario. Residual enforcement is left
// to the suite so that violating scenarios run and fail their checks instead
// of aborting.
StructureData scenario_structure(const Scenario& sc);

// Run the whole verification suite for one scenario. Sampling, direction
// sets and per-point substreams are deterministic functions of the seed;
// FINSLER_THREADS only changes wall time, never results.
VerificationReport theorem1_suite(const Scenario& sc);

enum class ReportFormat { Json, CsvSummary };

// Deterministic bytes: fixed key order, floats at 17 significant digits.
std::string serialize_report(const VerificationReport& r, ReportFormat format);

} // namespace finsler
