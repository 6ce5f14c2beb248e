#include "masi/generator_algebra.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "masi/format.hpp"

namespace masi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Probe points for constructor-time sanity checks: {10^k, k = -6..6}.
const std::array<double, 13>& probe_grid() {
    static const std::array<double, 13> grid = [] {
        std::array<double, 13> g{};
        for (int k = -6; k <= 6; ++k) g[static_cast<std::size_t>(k + 6)] = std::pow(10.0, k);
        return g;
    }();
    return grid;
}

bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

double fd5(const std::function<double(double)>& f, double x, double s) {
    return (f(x - 2 * s) - 8 * f(x - s) + 8 * f(x + s) - f(x + 2 * s)) / (12 * s);
}

double aitken(double a, double b, double c) {
    const double d2 = c - b;
    const double d1 = b - a;
    const double den = d2 - d1;
    if (den == 0.0) return c;
    return c - d2 * d2 / den;
}

} // namespace

const std::array<double, 64>& sample_grid() {
    static const std::array<double, 64> grid = [] {
        std::array<double, 64> g{};
        for (int i = 0; i < 64; ++i) {
            g[static_cast<std::size_t>(i)] = std::pow(10.0, -4.0 + 8.0 * i / 63.0);
        }
        return g;
    }();
    return grid;
}

GeneratorFunction::GeneratorFunction(std::function<double(double)> evaluate, std::string name,
                                     std::optional<double> analytic_derivative_at_one,
                                     std::optional<double> analytic_limit_at_zero,
                                     bool normalized, bool positive)
    : evaluate_(std::move(evaluate)),
      name_(std::move(name)),
      d1_(analytic_derivative_at_one),
      lim0_(analytic_limit_at_zero),
      normalized_(normalized),
      positive_(positive) {
    if (!evaluate_) {
        throw validation_error("GeneratorFunction: empty evaluator");
    }
    if (normalized_) {
        const double at_one = evaluate_(1.0);
        if (!(std::abs(at_one - 1.0) <= 1e-12)) {
            throw validation_error("GeneratorFunction '" + name_ + "': value at 1 is " +
                                   format_double(at_one) + ", must be 1");
        }
    }
    if (positive_) {
        for (double t : probe_grid()) {
            const double v = evaluate_(t);
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw validation_error("GeneratorFunction '" + name_ +
                                       "': not positive at t = " + format_double(t));
            }
        }
    }
}

MetricFunction::MetricFunction(GeneratorFunction base, double metric_constant,
                               double normalization, bool symmetric,
                               std::optional<GeneratorFunction> source_generator)
    : base_(std::move(base)),
      metric_constant_(metric_constant),
      normalization_(normalization),
      symmetric_(symmetric),
      source_(std::move(source_generator)) {}

GeneratorFunction sharp(const GeneratorFunction& h) {
    for (double t : probe_grid()) {
        if (h(t) == 0.0) {
            throw domain_error("sharp: h vanishes at t = " + format_double(t));
        }
    }
    auto eval = [h](double t) {
        if (t <= 0.0) throw domain_error("sharp: t must be positive");
        const double ht = h(t);
        if (ht == 0.0) throw domain_error("sharp: h vanishes at t = " + format_double(t));
        return t / ht;
    };
    return GeneratorFunction(eval, "sharp[" + h.name() + "]", std::nullopt, std::nullopt,
                             h.normalized(), h.positive());
}

GeneratorFunction star(const GeneratorFunction& f) {
    auto eval = [f](double t) {
        if (t <= 0.0) throw domain_error("star: t must be positive");
        return t * f(1.0 / t);
    };
    return GeneratorFunction(eval, "star[" + f.name() + "]", std::nullopt, std::nullopt,
                             f.normalized(), f.positive());
}

GeneratorFunction tilde(const GeneratorFunction& h) {
    for (double t : probe_grid()) {
        if (h(t) == 0.0) {
            throw domain_error("tilde: h vanishes at t = " + format_double(t));
        }
    }
    auto eval = [h](double t) {
        if (t <= 0.0) throw domain_error("tilde: t must be positive");
        const double hv = h(1.0 / t);
        if (hv == 0.0) throw domain_error("tilde: h vanishes at t = " + format_double(1.0 / t));
        return 1.0 / hv;
    };
    return GeneratorFunction(eval, "tilde[" + h.name() + "]", std::nullopt, std::nullopt,
                             h.normalized(), h.positive());
}

double derivative_at_one(const GeneratorFunction& h) {
    if (h.analytic_derivative_at_one()) return *h.analytic_derivative_at_one();
    auto f = [&h](double t) { return h(t); };
    const double d_full = fd5(f, 1.0, 1e-5);
    const double d_half = fd5(f, 1.0, 5e-6);
    if (!(std::abs(d_full - d_half) <= 1e-6)) {
        throw numerical_error("derivative_at_one('" + h.name() +
                              "'): finite-difference estimates differ by " +
                              format_double(std::abs(d_full - d_half)));
    }
    return d_full;
}

double limit_at_zero(const GeneratorFunction& h) {
    if (h.analytic_limit_at_zero()) return *h.analytic_limit_at_zero();

    std::vector<double> samples;
    samples.reserve(40);
    for (int k = 4; k <= 40; ++k) {
        const double t = std::pow(10.0, -k);
        const double v = h(t);
        if (std::isnan(v)) {
            throw numerical_error("limit_at_zero('" + h.name() + "'): NaN at t = 1e-" +
                                  std::to_string(k));
        }
        if (std::isinf(v)) return kInf;
        if (!samples.empty()) {
            const double prev = samples.back();
            if (std::abs(v - prev) < 1e-7) {
                // Converged. Power-law tails still carry a bias of the order
                // of the last step; Aitken on the final three samples removes
                // it when the tail contracts geometrically.
                if (samples.size() >= 2) {
                    const double a = aitken(samples[samples.size() - 2], prev, v);
                    if (std::isfinite(a) && std::abs(a - v) <= 10.0 * std::abs(v - prev)) {
                        return a;
                    }
                }
                return v;
            }
            if (v > 1e12 && v > prev) return kInf;
        }
        samples.push_back(v);
    }
    // No direct convergence within the sample range: accelerate. A sequence
    // contracting geometrically (t^p tails) extrapolates cleanly; anything
    // else is reported as non-convergent.
    const std::size_t n = samples.size();
    const double a1 = aitken(samples[n - 3], samples[n - 2], samples[n - 1]);
    const double a2 = aitken(samples[n - 4], samples[n - 3], samples[n - 2]);
    if (std::isfinite(a1) && std::isfinite(a2) && std::abs(a1 - a2) < 1e-6) {
        return a1;
    }
    throw numerical_error("limit_at_zero('" + h.name() +
                          "'): samples neither converge nor diverge");
}

namespace {

// Rejects generators excluded by the construction rule ("neither constant
// nor the identity") by sampling the probe grid.
void reject_degenerate_generator(const GeneratorFunction& h) {
    bool constant_like = true;
    bool identity_like = true;
    for (double t : probe_grid()) {
        const double v = h(t);
        if (std::abs(v - 1.0) > 1e-12) constant_like = false;
        if (std::abs(v - t) > 1e-12 * std::max(1.0, t)) identity_like = false;
    }
    if (constant_like || identity_like) {
        throw validation_error("generator '" + h.name() +
                               "' must be neither constant nor the identity");
    }
}

} // namespace

MetricFunction construct_f(const GeneratorFunction& h, bool normalize) {
    reject_degenerate_generator(h);
    const GeneratorFunction hs = sharp(h);
    const double a1 = derivative_at_one(h);
    const double prefactor = a1 * (1.0 - a1);
    if (prefactor == 0.0 || !std::isfinite(prefactor)) {
        throw validation_error("construct_f: h'(1) = " + format_double(a1) +
                               " makes the normalization degenerate");
    }

    auto raw = [h, hs](double t) {
        const double denom = (h(t) - 1.0) * (hs(t) - 1.0);
        if (denom == 0.0) {
            throw domain_error("construct_f: denominator vanishes at t = " + format_double(t));
        }
        const double v = (t - 1.0) * (t - 1.0) / denom;
        if (!std::isfinite(v)) {
            throw domain_error("construct_f: non-finite value at t = " + format_double(t));
        }
        return v;
    };

    // Second-order Taylor model about the removable singularity at t = 1.
    // The constant term is exact from h'(1); the slope and curvature come
    // from Richardson-extrapolated differences of the raw rule at steps
    // 1e-3 and 5e-4, where direct evaluation still holds ~12 digits.
    const double c0 = 1.0 / prefactor;
    const double fp1 = raw(1.0 + 1e-3), fm1 = raw(1.0 - 1e-3);
    const double fp2 = raw(1.0 + 5e-4), fm2 = raw(1.0 - 5e-4);
    const double d_full = (fp1 - fm1) / 2e-3;
    const double d_half = (fp2 - fm2) / 1e-3;
    const double c1 = (4.0 * d_half - d_full) / 3.0;
    const double s_full = (fp1 - 2.0 * c0 + fm1) / 1e-6;
    const double s_half = (fp2 - 2.0 * c0 + fm2) / 2.5e-7;
    const double c2 = (4.0 * s_half - s_full) / 6.0;

    const double scale = normalize ? prefactor : 1.0;
    auto eval = [raw, c0, c1, c2, scale](double t) {
        if (t <= 0.0) throw domain_error("construct_f: t must be positive");
        const double u = t - 1.0;
        const double v = (std::abs(u) < 1e-4) ? c0 + u * (c1 + u * c2) : raw(t);
        return scale * v;
    };

    // f(0) by the algebraic limit of the rule: with h(0) and h#(0) finite,
    // raw f(0) = 1 / ((1 - h(0))(1 - h#(0))); an infinite limit on either
    // side forces f(0) = 0. Falls back to the numeric limit of f itself.
    double raw_f0 = std::numeric_limits<double>::quiet_NaN();
    try {
        const double h0 = limit_at_zero(h);
        const double s0 = limit_at_zero(hs);
        if (std::isinf(h0) || std::isinf(s0)) {
            raw_f0 = 0.0;
        } else {
            const double denom0 = (1.0 - h0) * (1.0 - s0);
            if (denom0 > 0.0 && std::isfinite(denom0)) raw_f0 = 1.0 / denom0;
        }
    } catch (const numerical_error&) {
        // handled by the fallback below
    }
    if (std::isnan(raw_f0)) {
        GeneratorFunction probe(
            [eval](double t) { return eval(t); }, "f-probe[" + h.name() + "]", std::nullopt,
            std::nullopt, false, false);
        raw_f0 = limit_at_zero(probe) / scale;
    }
    const double metric_constant = scale * raw_f0;

    const std::string name = (normalize ? "f[" : "f-raw[") + h.name() + "]";
    GeneratorFunction base(eval, name, std::nullopt, metric_constant, normalize,
                           normalize || prefactor > 0.0);

    bool symmetric = true;
    for (double t : sample_grid()) {
        if (!rel_close(base(t), t * base(1.0 / t), kGridEqualityTol)) {
            symmetric = false;
            break;
        }
    }
    return MetricFunction(std::move(base), metric_constant, prefactor, symmetric, h);
}

GeneratorFunction g_auxiliary(const GeneratorFunction& h) {
    reject_degenerate_generator(h);
    const GeneratorFunction hs = sharp(h);
    auto eval = [h, hs](double t) {
        if (t <= 0.0) throw domain_error("g_auxiliary: t must be positive");
        if (std::abs(t - 1.0) < 1e-9) return 1.0;
        return ((h(t) - 1.0) + (hs(t) - 1.0)) / (t - 1.0);
    };
    bool positive = true;
    for (double t : probe_grid()) {
        if (!(eval(t) > 0.0)) {
            positive = false;
            break;
        }
    }
    return GeneratorFunction(eval, "g[" + h.name() + "]", std::nullopt, std::nullopt, true,
                             positive);
}

SymmetryReport symmetry_class(const GeneratorFunction& h) {
    const GeneratorFunction h_star = star(h);
    const GeneratorFunction h_tilde = tilde(h);
    SymmetryReport report;
    report.star_symmetric = true;
    report.tilde_symmetric = true;
    for (double t : sample_grid()) {
        const double v = h(t);
        if (!rel_close(v, h_star(t), kGridEqualityTol)) report.star_symmetric = false;
        if (!rel_close(v, h_tilde(t), kGridEqualityTol)) report.tilde_symmetric = false;
        if (!report.star_symmetric && !report.tilde_symmetric) break;
    }
    try {
        report.f_symmetric = construct_f(h, true).symmetric();
    } catch (const std::exception&) {
        // construction not possible; the lemma's sufficient condition stands
        report.f_symmetric = report.star_symmetric || report.tilde_symmetric;
    }
    return report;
}

GeneratorFunction builtin_power(double p) {
    if (p == 0.0 || p == 1.0) {
        throw validation_error("builtin_power: h(t) = t^" + format_double(p) +
                               " is constant or the identity");
    }
    if (!(p > -1.0 && p < 2.0)) {
        throw validation_error("builtin_power: p = " + format_double(p) +
                               " outside (-1, 2)");
    }
    auto eval = [p](double t) {
        if (t <= 0.0) throw domain_error("power: t must be positive");
        return std::pow(t, p);
    };
    const double lim0 = (p > 0.0) ? 0.0 : kInf;
    return GeneratorFunction(eval, "power:" + format_double(p), p, lim0);
}

GeneratorFunction builtin_bridge(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw validation_error("builtin_bridge: alpha = " + format_double(alpha) +
                               " outside [0, 1]");
    }
    auto eval = [alpha](double t) {
        if (t <= 0.0) throw domain_error("bridge: t must be positive");
        return std::pow(t, alpha) * std::pow(0.5 * (1.0 + t), 1.0 - 2.0 * alpha);
    };
    const double lim0 = (alpha == 0.0) ? 0.5 : 0.0;
    return GeneratorFunction(eval, "bridge:" + format_double(alpha), 0.5, lim0);
}

GeneratorFunction builtin_exotic() {
    // (t/(1+t))^{1+t} (1+t)^{1+1/t}. The log-domain exponent
    // (1+t) ln t + (1/t - t) ln(1+t) cancels two ~t ln t sized terms at
    // large t; the regrouped form below keeps every term O(ln t).
    auto eval = [](double t) {
        if (t <= 0.0) throw domain_error("exotic: t must be positive");
        return std::exp(std::log(t) - t * std::log1p(1.0 / t) + std::log1p(t) / t);
    };
    return GeneratorFunction(eval, "exotic", 2.0 - 2.0 * std::log(2.0), 0.0);
}

} // namespace masi
