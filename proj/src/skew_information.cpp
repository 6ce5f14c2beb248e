#include "masi/skew_information.hpp"

#include <cmath>

#include "masi/format.hpp"

namespace masi {

namespace {

struct EigenBasis {
    RVector lambda;
    CMatrix a_tilde;       // A in the eigenbasis of rho
    double lambda_max = 0.0;
    double zero_cut = 0.0; // eigenvalues at or below count as exact zeros
};

EigenBasis to_eigenbasis(const DensityMatrix& rho, const HermitianMatrix& a) {
    if (rho.dim() != a.dim()) {
        throw validation_error("skew_information: state and observable dimensions differ");
    }
    const SpectralDecomposition sd = eigh(rho.base());
    EigenBasis basis;
    basis.lambda = sd.eigenvalues;
    basis.a_tilde = sd.eigenvectors.adjoint() * a.mat() * sd.eigenvectors;
    basis.lambda_max = sd.eigenvalues(sd.eigenvalues.size() - 1);
    basis.zero_cut = kRankThreshold * std::max(basis.lambda_max, 0.0);
    return basis;
}

double tr_rho_a2(const EigenBasis& basis) {
    double sum = 0.0;
    const Eigen::Index n = basis.lambda.size();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            sum += std::max(basis.lambda(j), 0.0) * std::norm(basis.a_tilde(j, k));
        }
    }
    return sum;
}

} // namespace

const char* to_string(SkewMethod m) {
    switch (m) {
        case SkewMethod::spectral: return "spectral";
        case SkewMethod::modular: return "modular";
        case SkewMethod::commutator: return "commutator";
        case SkewMethod::unbounded: return "unbounded";
        case SkewMethod::bridge: return "bridge";
    }
    return "unknown";
}

MorozovaCencov::MorozovaCencov(MetricFunction metric) : metric_(std::move(metric)) {
    if (metric_.source_generator()) {
        h_ = metric_.source_generator();
        h_sharp_ = sharp(*h_);
        perspective_scale_ = metric_.normalized() ? metric_.normalization() : 1.0;
    }
}

double MorozovaCencov::c(double x, double y) const {
    if (!(x > 0.0) || !(y > 0.0)) {
        throw domain_error("MorozovaCencov::c: arguments must be positive");
    }
    return 1.0 / (y * metric_(x / y));
}

double MorozovaCencov::c_hat(double x, double y) const {
    if (x < 0.0 || y < 0.0) {
        throw domain_error("MorozovaCencov::c_hat: arguments must be nonnegative");
    }
    if (x == y) return 0.0;
    if (x == 0.0 || y == 0.0) {
        if (!metric_.regular()) {
            throw domain_error(
                "MorozovaCencov::c_hat: boundary value requires a regular metric "
                "(f(0) = " + format_double(metric_.metric_constant()) + ")");
        }
        return std::max(x, y) / metric_.metric_constant();
    }
    if (h_) {
        const double t = x / y;
        return (x + y - y * (*h_)(t) - y * (*h_sharp_)(t)) / perspective_scale_;
    }
    const double d = x - y;
    return d * d / (y * metric_(x / y));
}

double metric_form(const MorozovaCencov& mc, const DensityMatrix& rho, const CMatrix& b) {
    if (rho.dim() != b.rows() || b.rows() != b.cols()) {
        throw validation_error("metric_form: dimension mismatch");
    }
    const SpectralDecomposition sd = eigh(rho.base());
    const CMatrix bt = sd.eigenvectors.adjoint() * b * sd.eigenvectors;
    const Eigen::Index n = sd.eigenvalues.size();
    const double lambda_max = sd.eigenvalues(n - 1);
    const double zero_cut = kRankThreshold * std::max(lambda_max, 0.0);
    const double b_scale = std::max(bt.cwiseAbs().maxCoeff(), 1e-300);

    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double w = std::norm(bt(j, k));
            if (w == 0.0) continue;
            const double lj = sd.eigenvalues(j);
            const double lk = sd.eigenvalues(k);
            if (lj <= zero_cut || lk <= zero_cut) {
                if (std::sqrt(w) <= 1e-12 * b_scale) continue;
                throw domain_error(
                    "metric_form: rank-deficient state with B not supported on the range "
                    "(entry magnitude " + format_double(std::sqrt(w)) + ")");
            }
            sum += mc.c(lj, lk) * w;
        }
    }
    return sum;
}

SkewInfoReport masi_spectral(const MorozovaCencov& mc, const DensityMatrix& rho,
                             const HermitianMatrix& a) {
    if (!mc.metric().regular()) {
        throw validation_error(
            "masi_spectral: metric is not regular (f(0) = " +
            format_double(mc.metric_constant()) + "); use unbounded_masi");
    }
    const EigenBasis basis = to_eigenbasis(rho, a);
    const Eigen::Index n = basis.lambda.size();

    double kernel_sum = 0.0;
    bool boundary = false;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double w = std::norm(basis.a_tilde(j, k));
            if (w == 0.0) continue;
            double lj = basis.lambda(j);
            double lk = basis.lambda(k);
            if (lj <= basis.zero_cut) { lj = 0.0; }
            if (lk <= basis.zero_cut) { lk = 0.0; }
            if (lj == 0.0 || lk == 0.0) boundary = true;
            kernel_sum += mc.c_hat(lj, lk) * w;
        }
    }
    const double m = mc.metric_constant();

    SkewInfoReport report;
    report.value = 0.5 * m * kernel_sum;
    report.method = SkewMethod::spectral;
    report.metric = mc.metric().base().name();
    if (mc.metric().source_generator()) {
        report.generator = mc.metric().source_generator()->name();
    }
    report.terms["kernel_sum"] = kernel_sum;
    report.terms["metric_constant"] = m;
    report.diagnostics.min_eigenvalue = basis.lambda(0);
    report.diagnostics.boundary_kernel_used = boundary;
    return report;
}

SkewInfoReport masi_modular(const GeneratorFunction& h, const DensityMatrix& rho,
                            const HermitianMatrix& a) {
    const MetricFunction f = construct_f(h, true);
    const GeneratorFunction hs = sharp(h);
    const EigenBasis basis = to_eigenbasis(rho, a);
    if (basis.lambda(0) <= basis.zero_cut) {
        throw domain_error("masi_modular: state is rank-deficient (min eigenvalue " +
                           format_double(basis.lambda(0)) + "); use masi_spectral");
    }

    const Eigen::Index n = basis.lambda.size();
    double h_term = 0.0;
    double hs_term = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double w = std::norm(basis.a_tilde(j, k));
            if (w == 0.0) continue;
            const double ratio = basis.lambda(j) / basis.lambda(k);
            h_term += basis.lambda(k) * h(ratio) * w;
            hs_term += basis.lambda(k) * hs(ratio) * w;
        }
    }
    const double two_tr = 2.0 * tr_rho_a2(basis);
    const double coeff = f.metric_constant() / (2.0 * f.normalization());

    SkewInfoReport report;
    report.value = coeff * (two_tr - h_term - hs_term);
    report.method = SkewMethod::modular;
    report.generator = h.name();
    report.metric = f.base().name();
    report.terms["two_tr_rho_a2"] = two_tr;
    report.terms["h_term"] = h_term;
    report.terms["h_sharp_term"] = hs_term;
    report.terms["coefficient"] = coeff;
    report.diagnostics.min_eigenvalue = basis.lambda(0);
    return report;
}

SkewInfoReport wyd_commutator(const DensityMatrix& rho, const HermitianMatrix& a, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw validation_error("wyd_commutator: p = " + format_double(p) +
                               " outside (0, 1)");
    }
    if (rho.dim() != a.dim()) {
        throw validation_error("wyd_commutator: dimension mismatch");
    }
    auto clamped_pow = [](double e) {
        return [e](double l) { return l <= 0.0 ? 0.0 : std::pow(l, e); };
    };
    const CMatrix rp = apply_scalar_function(clamped_pow(p), rho.base()).mat();
    const CMatrix rq = apply_scalar_function(clamped_pow(1.0 - p), rho.base()).mat();
    const CMatrix k1 = commutator(rp, a.mat());
    const CMatrix k2 = commutator(rq, a.mat());

    SkewInfoReport report;
    report.value = -0.5 * (k1 * k2).trace().real();
    report.method = SkewMethod::commutator;
    report.generator = "power:" + format_double(p);
    report.terms["p"] = p;
    const SpectralDecomposition sd = eigh(rho.base());
    report.diagnostics.min_eigenvalue = sd.eigenvalues(0);
    return report;
}

SkewInfoReport unbounded_masi(const GeneratorFunction& h, const DensityMatrix& rho,
                              const HermitianMatrix& a) {
    const MetricFunction f = construct_f(h, true);
    if (f.regular()) {
        throw validation_error("unbounded_masi: constructed metric is regular (f(0) = " +
                               format_double(f.metric_constant()) +
                               "); use masi_spectral");
    }
    if (rho.dim() != a.dim()) {
        throw validation_error("unbounded_masi: dimension mismatch");
    }
    const SpectralDecomposition sd = eigh(rho.base());
    const double min_eig = sd.eigenvalues(0);
    if (!(min_eig > kUnboundedFloor)) {
        throw domain_error("unbounded_masi: state not strictly positive (min eigenvalue " +
                           format_double(min_eig) + ", floor " +
                           format_double(kUnboundedFloor) + ")");
    }
    const MorozovaCencov mc(f);
    const CMatrix b = Complex(0.0, 1.0) * commutator(rho.mat(), a.mat());

    SkewInfoReport report;
    report.value = metric_form(mc, rho, b);
    report.method = SkewMethod::unbounded;
    report.generator = h.name();
    report.metric = f.base().name();
    report.terms["metric_constant"] = f.metric_constant();
    report.diagnostics.min_eigenvalue = min_eig;
    return report;
}

SkewInfoReport bridge_skew_info(double alpha, const DensityMatrix& rho,
                                const HermitianMatrix& a) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw validation_error("bridge_skew_info: alpha = " + format_double(alpha) +
                               " outside [0, 1]");
    }
    const EigenBasis basis = to_eigenbasis(rho, a);
    const Eigen::Index n = basis.lambda.size();

    // Entrywise kernel of the two trace terms,
    //   ((x+y)/2)^{1-2a} (xy)^a  and  ((x+y)/2)^{2a-1} (xy)^{1-a},
    // extended continuously to zero eigenvalues (both terms are bounded by
    // (x+y)/2, so the kernel vanishes when both arguments do).
    auto term = [](double x, double y, double expnt) {
        // ((x+y)/2)^{1-2a} (xy)^a with a implied by expnt = a
        if (x == 0.0 && y == 0.0) return 0.0;
        if (x == 0.0 || y == 0.0) {
            if (expnt == 0.0) return 0.5 * (x + y);
            return 0.0;
        }
        return std::pow(0.5 * (x + y), 1.0 - 2.0 * expnt) * std::pow(x * y, expnt);
    };

    double term_a = 0.0;
    double term_b = 0.0;
    bool boundary = false;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double w = std::norm(basis.a_tilde(j, k));
            if (w == 0.0) continue;
            double lj = std::max(basis.lambda(j), 0.0);
            double lk = std::max(basis.lambda(k), 0.0);
            if (lj <= basis.zero_cut) lj = 0.0;
            if (lk <= basis.zero_cut) lk = 0.0;
            if (lj == 0.0 || lk == 0.0) boundary = true;
            term_a += term(lj, lk, alpha) * w;
            term_b += term(lj, lk, 1.0 - alpha) * w;
        }
    }
    const double tr2 = tr_rho_a2(basis);

    SkewInfoReport report;
    report.value = tr2 - 0.5 * (term_a + term_b);
    report.method = SkewMethod::bridge;
    report.generator = "bridge:" + format_double(alpha);
    report.terms["tr_rho_a2"] = tr2;
    report.terms["term_alpha"] = term_a;
    report.terms["term_one_minus_alpha"] = term_b;
    report.diagnostics.min_eigenvalue = basis.lambda(0);
    report.diagnostics.boundary_kernel_used = boundary;

    if (alpha == 0.0 || alpha == 1.0) {
        // Canonical Eq.-(3)/(4) value: m(c)/N times the half-bracket, with
        // m(c) the constructed metric constant. At the endpoints one of
        // h(0), h#(0) equals 1/2, making this twice the displayed formula.
        const MetricFunction f = construct_f(builtin_bridge(alpha), true);
        const double canonical = (f.metric_constant() / f.normalization()) * report.value;
        report.alternate_value = canonical;
        report.normalization_discrepancy = true;
        report.metric = f.base().name();
        report.terms["canonical_metric_constant"] = f.metric_constant();
    }
    return report;
}

} // namespace masi
