#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "masi/errors.hpp"

namespace masi {

/// Fixed grid for numerical function-equality tests: 64 log-spaced points
/// in [1e-4, 1e4]. Pinned so that "equal on the grid" is reproducible.
const std::array<double, 64>& sample_grid();

/// Relative tolerance used for function equality on the sample grid.
inline constexpr double kGridEqualityTol = 1e-9;

/// A scalar function on (0, infinity) with optional analytic metadata.
///
/// Generators h are normalized (h(1) = 1 within 1e-12) and positive; both
/// properties are checked at construction on the probe grid {10^k, k=-6..6}.
/// The flags exist because the raw (unnormalized) Theorem-1 construction is
/// also carried as a GeneratorFunction: it has f(1) = 1/(h'(1)(1-h'(1))) and
/// is negative-valued when h is operator convex.
class GeneratorFunction {
public:
    GeneratorFunction(std::function<double(double)> evaluate, std::string name,
                      std::optional<double> analytic_derivative_at_one = std::nullopt,
                      std::optional<double> analytic_limit_at_zero = std::nullopt,
                      bool normalized = true, bool positive = true);

    double operator()(double t) const { return evaluate_(t); }
    const std::string& name() const { return name_; }
    const std::optional<double>& analytic_derivative_at_one() const { return d1_; }
    const std::optional<double>& analytic_limit_at_zero() const { return lim0_; }
    bool normalized() const { return normalized_; }
    bool positive() const { return positive_; }

private:
    std::function<double(double)> evaluate_;
    std::string name_;
    std::optional<double> d1_;
    std::optional<double> lim0_;
    bool normalized_;
    bool positive_;
};

/// Normalized symmetric-metric candidate produced by the Theorem-1 rule.
class MetricFunction {
public:
    MetricFunction(GeneratorFunction base, double metric_constant, double normalization,
                   bool symmetric, std::optional<GeneratorFunction> source_generator);

    double operator()(double t) const { return base_(t); }
    const GeneratorFunction& base() const { return base_; }
    /// f(0); the metric is regular when this is > 1e-12.
    double metric_constant() const { return metric_constant_; }
    bool regular() const { return metric_constant_ > 1e-12; }
    /// h'(1)(1 - h'(1)) recorded at construction; negative for operator
    /// convex h ("the normalization changes the sign").
    double normalization() const { return normalization_; }
    bool symmetric() const { return symmetric_; }
    const std::optional<GeneratorFunction>& source_generator() const { return source_; }
    /// True when the stored base is the normalized form (prefactor applied).
    bool normalized() const { return base_.normalized(); }

private:
    GeneratorFunction base_;
    double metric_constant_;
    double normalization_;
    bool symmetric_;
    std::optional<GeneratorFunction> source_;
};

/// h#(t) = t / h(t). Involution on normalized positive functions.
GeneratorFunction sharp(const GeneratorFunction& h);

/// f*(t) = t f(1/t). f is symmetric when f* = f.
GeneratorFunction star(const GeneratorFunction& f);

/// h~(t) = h(1/t)^{-1}.
GeneratorFunction tilde(const GeneratorFunction& h);

/// h'(1): analytic metadata when present, else five-point central difference
/// with step 1e-5, cross-checked at half step (numerical_error if the two
/// estimates differ by more than 1e-6).
double derivative_at_one(const GeneratorFunction& h);

/// lim_{t -> 0+} h(t), possibly +infinity.
///
/// Analytic metadata wins when present. Otherwise samples t = 10^{-k} from
/// k = 4 downward: returns the first value whose successive difference is
/// below 1e-7; declares +infinity when the samples grow beyond 1e12; applies
/// Aitken extrapolation when the sequence contracts geometrically without
/// reaching the threshold. Oscillation raises numerical_error.
double limit_at_zero(const GeneratorFunction& h);

/// The Theorem-1 rule f(t) = (t-1)^2 / ((h(t)-1)(h#(t)-1)).
///
/// With normalize = true the prefactor h'(1)(1-h'(1)) is applied, making
/// f(1) = 1. Near t = 1 (|t-1| < 1e-4) the removable singularity is
/// evaluated by a second-order Taylor expansion whose coefficients come from
/// Richardson-extrapolated finite differences at steps 1e-3 and 5e-4.
MetricFunction construct_f(const GeneratorFunction& h, bool normalize);

/// The divided-difference auxiliary of the Theorem-1 proof:
/// g(t) = (h(t)-1)/(t-1) + (h#(t)-1)/(t-1), g(1) = 1.
GeneratorFunction g_auxiliary(const GeneratorFunction& h);

struct SymmetryReport {
    bool star_symmetric = false;   // h == h* on the pinned grid
    bool tilde_symmetric = false;  // h == h~ on the pinned grid
    bool f_symmetric = false;      // constructed f satisfies f == f*
};

/// Classifies h against the two sufficient symmetry conditions and checks
/// the constructed f directly when construction succeeds.
SymmetryReport symmetry_class(const GeneratorFunction& h);

/// h(t) = t^p for p in (-1, 2), p not 0 or 1. Operator monotone for
/// p in (0, 1); h and h# operator convex for p in (-1,0) and (1,2).
GeneratorFunction builtin_power(double p);

/// Bridge family f_alpha(t) = t^alpha ((1+t)/2)^(1-2alpha), alpha in [0,1].
/// Satisfies sharp(f_alpha) = f_{1-alpha}.
GeneratorFunction builtin_bridge(double alpha);

/// The operator monotone function (t/(1+t))^{1+t} (1+t)^{1+1/t}, which
/// satisfies h = h~. Evaluated in the log domain.
GeneratorFunction builtin_exotic();

} // namespace masi
