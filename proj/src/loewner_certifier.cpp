#include "masi/loewner_certifier.hpp"

#include <algorithm>
#include <cmath>

#include "masi/format.hpp"
#include "masi/rng.hpp"

namespace masi {

namespace {

double deriv5(const std::function<double(double)>& f, double x) {
    const double s = 1e-5 * x;
    return (f(x - 2 * s) - 8 * f(x - s) + 8 * f(x + s) - f(x + 2 * s)) / (12 * s);
}

double min_eigenvalue_sym(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

double min_eigenvalue_herm(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

// Scaled minimum eigenvalue of the Loewner matrix at a point set. The scale
// covers both the entries and max |f(x_i)|/x_i: the five-point stencil at
// step 1e-5 x rounds at ~1e-11 |f(x)|/x, which dwarfs max|entry| for regular
// metrics (bounded slope, f(0) > 0) sampled near the left end of the range.
double scaled_min_eig(const std::function<double(double)>& f, const std::vector<double>& pts) {
    const LoewnerMatrix lm = loewner_matrix(f, pts);
    double scale = lm.entries.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < lm.points.size(); ++i) {
        scale = std::max(scale, std::abs(f(lm.points(i))) / lm.points(i));
    }
    return min_eigenvalue_sym(lm.entries) / std::max(scale, 1e-300);
}

std::vector<double> sample_points(Rng& rng, int n) {
    std::vector<double> pts(static_cast<std::size_t>(n));
    bool ok = false;
    while (!ok) {
        for (auto& p : pts) p = rng.log_uniform(1e-3, 1e3);
        ok = true;
        for (std::size_t i = 0; i < pts.size() && ok; ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                if (std::abs(pts[i] - pts[j]) <= 1e-8) {
                    ok = false;
                    break;
                }
            }
        }
    }
    return pts;
}

HermitianMatrix random_spectrum_matrix(Rng& rng, int dim, double lo, double hi) {
    const CMatrix u = random_unitary(dim, rng);
    RVector ev(dim);
    for (int i = 0; i < dim; ++i) ev(i) = rng.log_uniform(lo, hi);
    CMatrix m = u * ev.asDiagonal() * u.adjoint();
    return HermitianMatrix(((m + m.adjoint()) * 0.5).eval());
}

} // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::certified_monotone: return "certified_monotone";
        case Verdict::certified_decreasing: return "certified_decreasing";
        case Verdict::certified_convex: return "certified_convex";
        case Verdict::rejected: return "rejected";
    }
    return "unknown";
}

LoewnerMatrix loewner_matrix(const std::function<double(double)>& f,
                             const std::vector<double>& points) {
    const int n = static_cast<int>(points.size());
    if (n == 0) {
        throw validation_error("loewner_matrix: empty point set");
    }
    for (int i = 0; i < n; ++i) {
        if (!(points[static_cast<std::size_t>(i)] > 0.0)) {
            throw validation_error("loewner_matrix: points must be positive");
        }
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(points[static_cast<std::size_t>(i)] -
                         points[static_cast<std::size_t>(j)]) <= 1e-8) {
                throw validation_error("loewner_matrix: coincident points " +
                                       format_double(points[static_cast<std::size_t>(i)]) +
                                       " and " +
                                       format_double(points[static_cast<std::size_t>(j)]));
            }
        }
    }
    Eigen::VectorXd x(n);
    Eigen::VectorXd fx(n);
    for (int i = 0; i < n; ++i) {
        x(i) = points[static_cast<std::size_t>(i)];
        fx(i) = f(x(i));
        if (!std::isfinite(fx(i))) {
            throw domain_error("loewner_matrix: f not finite at " + format_double(x(i)));
        }
    }
    Eigen::MatrixXd entries(n, n);
    for (int i = 0; i < n; ++i) {
        entries(i, i) = deriv5(f, x(i));
        if (!std::isfinite(entries(i, i))) {
            throw domain_error("loewner_matrix: derivative not finite at " + format_double(x(i)));
        }
        for (int j = i + 1; j < n; ++j) {
            const double d = (fx(i) - fx(j)) / (x(i) - x(j));
            entries(i, j) = d;
            entries(j, i) = d;
        }
    }
    return LoewnerMatrix{std::move(x), std::move(entries)};
}

CertificationReport certify_operator_monotone(const std::function<double(double)>& f,
                                              int max_order, int trials, std::uint64_t seed) {
    if (max_order < 2 || max_order > 8) {
        throw validation_error("certify_operator_monotone: max_order must be in [2, 8]");
    }
    if (trials < 1) {
        throw validation_error("certify_operator_monotone: trials must be >= 1");
    }

    CertificationReport report;
    report.order = max_order;
    report.trials = trials;
    report.seed = seed;

    auto run = [&](const std::function<double(double)>& g, double& worst,
                   std::optional<std::vector<double>>& witness) {
        worst = 0.0;
        std::uint64_t index = 0;
        for (int n = 2; n <= max_order; ++n) {
            for (int k = 0; k < trials; ++k, ++index) {
                Rng rng(seed + index);
                const std::vector<double> pts = sample_points(rng, n);
                const double m = scaled_min_eig(g, pts);
                worst = std::min(worst, m);
                if (m < -kPsdTol) {
                    witness = pts;
                    return false;
                }
            }
        }
        return true;
    };

    double worst_f = 0.0;
    std::optional<std::vector<double>> witness_f;
    if (run(f, worst_f, witness_f)) {
        report.verdict = Verdict::certified_monotone;
        report.worst_eigenvalue = worst_f;
        return report;
    }

    auto neg = [&f](double t) { return -f(t); };
    double worst_neg = 0.0;
    std::optional<std::vector<double>> witness_neg;
    if (run(neg, worst_neg, witness_neg)) {
        report.verdict = Verdict::certified_decreasing;
        report.worst_eigenvalue = worst_neg;
        return report;
    }

    report.verdict = Verdict::rejected;
    report.worst_eigenvalue = std::min(worst_f, worst_neg);
    report.witness_points = witness_f;
    return report;
}

CertificationReport certify_operator_convex(const std::function<double(double)>& f, int dim,
                                            int trials, std::uint64_t seed) {
    if (dim < 1 || dim > 8) {
        throw validation_error("certify_operator_convex: dim must be in [1, 8]");
    }
    if (trials < 1) {
        throw validation_error("certify_operator_convex: trials must be >= 1");
    }

    CertificationReport report;
    report.order = dim;
    report.trials = trials;
    report.seed = seed;
    report.verdict = Verdict::certified_convex;
    report.worst_eigenvalue = 0.0;

    for (int k = 0; k < trials; ++k) {
        Rng rng(seed + static_cast<std::uint64_t>(k));
        const HermitianMatrix x = random_spectrum_matrix(rng, dim, 1e-3, 1e3);
        const HermitianMatrix y = random_spectrum_matrix(rng, dim, 1e-3, 1e3);
        HermitianMatrix mid(((x.mat() + y.mat()) * 0.5).eval());
        CMatrix fx, fy, fmid;
        try {
            fx = apply_scalar_function(f, x).mat();
            fy = apply_scalar_function(f, y).mat();
            fmid = apply_scalar_function(f, mid).mat();
        } catch (const domain_error& e) {
            throw domain_error("certify_operator_convex: trial " + std::to_string(k) + ": " +
                               e.what());
        }
        const CMatrix gap = (fx + fy) * 0.5 - fmid;
        const double scale =
            std::max({fx.cwiseAbs().maxCoeff(), fy.cwiseAbs().maxCoeff(), 1e-300});
        const double m = min_eigenvalue_herm(gap) / scale;
        report.worst_eigenvalue = std::min(report.worst_eigenvalue, m);
        if (m < -kPsdTol) {
            report.verdict = Verdict::rejected;
            report.witness_pair = std::make_pair(x.mat(), y.mat());
            return report;
        }
    }
    return report;
}

bool recheck_witness(const std::function<double(double)>& f, const CertificationReport& report) {
    if (report.verdict != Verdict::rejected) return false;
    if (report.witness_points) {
        return scaled_min_eig(f, *report.witness_points) < -kPsdTol;
    }
    if (report.witness_pair) {
        const HermitianMatrix x(report.witness_pair->first);
        const HermitianMatrix y(report.witness_pair->second);
        const HermitianMatrix mid(((x.mat() + y.mat()) * 0.5).eval());
        const CMatrix fx = apply_scalar_function(f, x).mat();
        const CMatrix fy = apply_scalar_function(f, y).mat();
        const CMatrix fmid = apply_scalar_function(f, mid).mat();
        const double scale =
            std::max({fx.cwiseAbs().maxCoeff(), fy.cwiseAbs().maxCoeff(), 1e-300});
        return min_eigenvalue_herm((fx + fy) * 0.5 - fmid) / scale < -kPsdTol;
    }
    return false;
}

} // namespace masi
