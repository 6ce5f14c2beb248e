#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "masi/errors.hpp"
#include "masi/matrix_core.hpp"

namespace masi {

/// PSD slack for the certification tests; the single tunable of this
/// module. The monotone test scales it by max(largest |entry|,
/// max_i |f(x_i)|/x_i) so that it absorbs the rounding of the five-point
/// derivative stencil, which grows like |f(x)|/x at the pinned step; the
/// convexity test scales it by the spectral norm of the function values.
inline constexpr double kPsdTol = 1e-8;

/// Divided-difference matrix of f at a point set:
/// entries (f(x_i) - f(x_j)) / (x_i - x_j), diagonal f'(x_i) by five-point
/// central difference with step 1e-5 * x_i.
struct LoewnerMatrix {
    Eigen::VectorXd points;
    Eigen::MatrixXd entries;  // symmetric
};

LoewnerMatrix loewner_matrix(const std::function<double(double)>& f,
                             const std::vector<double>& points);

enum class Verdict { certified_monotone, certified_decreasing, certified_convex, rejected };

const char* to_string(Verdict v);

/// Outcome of a sampling certification run. Certification is one-sided:
/// "certified" means no violation was found at the stated order and trial
/// count with the stated seed.
struct CertificationReport {
    Verdict verdict = Verdict::rejected;
    int order = 0;   // max point-set size (monotone) or matrix dimension (convex)
    int trials = 0;
    std::uint64_t seed = 0;
    /// Most adverse minimum eigenvalue across all trials, scaled by that
    /// trial's magnitude; certified runs satisfy worst_eigenvalue >= -kPsdTol.
    double worst_eigenvalue = 0.0;
    std::optional<std::vector<double>> witness_points;
    std::optional<std::pair<CMatrix, CMatrix>> witness_pair;
};

/// Samples point sets of sizes 2..max_order, log-uniform in [1e-3, 1e3],
/// and tests each Loewner matrix for positive semidefiniteness. Falls back
/// to the same test on -f (certified_decreasing) when f fails; records the
/// first failing point set as witness when both fail. Trial k of size n
/// draws from its own substream seeded seed + (running trial index).
CertificationReport certify_operator_monotone(const std::function<double(double)>& f,
                                              int max_order, int trials, std::uint64_t seed);

/// Samples Hermitian pairs (X, Y) with log-uniform spectra in [1e-3, 1e3]
/// and tests the midpoint gap (f(X) + f(Y))/2 - f((X+Y)/2) for positive
/// semidefiniteness. Matrix functions go through apply_scalar_function.
CertificationReport certify_operator_convex(const std::function<double(double)>& f, int dim,
                                            int trials, std::uint64_t seed);

/// Re-evaluates a rejection witness; true when the violation reproduces
/// beyond tolerance. Used to validate reports.
bool recheck_witness(const std::function<double(double)>& f, const CertificationReport& report);

} // namespace masi
