#pragma once

#include <map>
#include <optional>
#include <string>

#include "masi/generator_algebra.hpp"
#include "masi/matrix_core.hpp"

namespace masi {

/// Eigenvalues below this fraction of the largest are treated as exact
/// zeros and routed through the boundary kernel values.
inline constexpr double kRankThreshold = 1e-12;

/// Unbounded metrics refuse states with eigenvalues below this.
inline constexpr double kUnboundedFloor = 1e-10;

/// Kernel pair of a monotone metric: c(x,y) = 1/(y f(x/y)) and
/// c_hat(x,y) = (x-y)^2 c(x,y).
///
/// When the metric was produced by the Theorem-1 rule, c_hat is evaluated
/// additively in terms of the perspectives of h and h#,
///   c_hat(x,y) = (x + y - y h(x/y) - y h#(x/y)) / (h'(1)(1-h'(1))),
/// avoiding the cancellation of the product form near the removable point.
class MorozovaCencov {
public:
    explicit MorozovaCencov(MetricFunction metric);

    const MetricFunction& metric() const { return metric_; }
    double metric_constant() const { return metric_.metric_constant(); }

    /// c(x,y), x, y > 0.
    double c(double x, double y) const;

    /// c_hat(x,y), x, y >= 0. Boundary values by continuous extension for
    /// regular symmetric metrics: c_hat(x,0) = x/f(0), c_hat(0,0) = 0.
    double c_hat(double x, double y) const;

private:
    MetricFunction metric_;
    std::optional<GeneratorFunction> h_;
    std::optional<GeneratorFunction> h_sharp_;
    double perspective_scale_ = 1.0;
};

enum class SkewMethod { spectral, modular, commutator, unbounded, bridge };

const char* to_string(SkewMethod m);

/// Value of an information measure with the route taken, term decomposition
/// and rank diagnostics.
struct SkewInfoReport {
    double value = 0.0;
    SkewMethod method = SkewMethod::spectral;
    std::map<std::string, double> terms;
    std::string generator;
    std::string metric;
    struct Diagnostics {
        double min_eigenvalue = 0.0;
        bool boundary_kernel_used = false;
    } diagnostics;
    /// Bridge endpoints only: the Eq.-(3)/(4) canonical value, which departs
    /// from the displayed trace formula by 1/(1 - h(0)) at alpha in {0, 1}.
    std::optional<double> alternate_value;
    bool normalization_discrepancy = false;
};

/// Monotone-metric quadratic form K^c_rho(B, B) = sum c(l_j, l_k) |B~_jk|^2
/// in the eigenbasis of rho. Rank-deficient states are accepted only when B
/// vanishes on the kernel.
double metric_form(const MorozovaCencov& mc, const DensityMatrix& rho, const CMatrix& b);

/// Metric adjusted skew information by the spectral c_hat sum:
/// (m(c)/2) sum c_hat(l_j, l_k) |A~_jk|^2. Handles boundary states through
/// the continuous extension of c_hat; requires a regular metric.
SkewInfoReport masi_spectral(const MorozovaCencov& mc, const DensityMatrix& rho,
                             const HermitianMatrix& a);

/// Same quantity through the modular-operator form
///   C (2 Tr rho A^2 - Tr(A h(D) A rho) - Tr(A h#(D) A rho)),
/// C = f(0) / (2 h'(1)(1-h'(1))), which reduces to 1/(2(1-h(0))) when
/// h#(0) = 0. Strictly positive states only.
SkewInfoReport masi_modular(const GeneratorFunction& h, const DensityMatrix& rho,
                            const HermitianMatrix& a);

/// -(1/2) Tr([rho^p, A][rho^{1-p}, A]) for 0 < p < 1; the independent
/// commutator oracle for the power family.
SkewInfoReport wyd_commutator(const DensityMatrix& rho, const HermitianMatrix& a, double p);

/// Unbounded variant: the quadratic form without the m(c)/2 prefactor, for
/// non-regular constructed metrics (f(0) = 0) on strictly positive states.
SkewInfoReport unbounded_masi(const GeneratorFunction& h, const DensityMatrix& rho,
                              const HermitianMatrix& a);

/// The bridge-family measure
///   Tr rho A^2 - (1/2) Tr[A ((1+D)/2)^{1-2a} rho^a A rho^{1-a} + (a <-> 1-a)]
/// evaluated entrywise in the eigenbasis of rho. At alpha in {0, 1} the
/// report also carries the canonical Eq.-(3)/(4) value and sets the
/// discrepancy flag.
SkewInfoReport bridge_skew_info(double alpha, const DensityMatrix& rho,
                                const HermitianMatrix& a);

} // namespace masi
