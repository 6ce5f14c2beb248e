#include "masi/matrix_core.hpp"

#include <cmath>
#include <sstream>

namespace masi {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

HermitianMatrix::HermitianMatrix(CMatrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() == 0) {
        throw validation_error("HermitianMatrix: matrix must be square and non-empty");
    }
    double max_asym = 0.0;
    for (Eigen::Index j = 0; j < mat_.rows(); ++j) {
        for (Eigen::Index k = j; k < mat_.cols(); ++k) {
            max_asym = std::max(max_asym, std::abs(mat_(j, k) - std::conj(mat_(k, j))));
        }
    }
    if (!(max_asym <= kHermitianTol)) {
        throw validation_error("HermitianMatrix: not Hermitian, max asymmetry " + fmt(max_asym));
    }
    // Exact symmetrization so downstream solvers see M == M*.
    mat_ = ((mat_ + mat_.adjoint()) * 0.5).eval();
}

DensityMatrix::DensityMatrix(HermitianMatrix base, double rank_tolerance)
    : base_(std::move(base)), rank_tolerance_(rank_tolerance) {
    const double tr = base_.mat().trace().real();
    if (!(std::abs(tr - 1.0) <= kTraceTol)) {
        throw validation_error("DensityMatrix: trace is " + fmt(tr) + ", must be 1 within " +
                               fmt(kTraceTol));
    }
    const auto sd = eigh(base_);
    const double lambda_max = sd.eigenvalues(sd.eigenvalues.size() - 1);
    const double floor = -rank_tolerance_ * std::max(lambda_max, 0.0);
    const double lambda_min = sd.eigenvalues(0);
    if (!(lambda_min >= floor)) {
        throw validation_error("DensityMatrix: negative eigenvalue " + fmt(lambda_min));
    }
}

SpectralDecomposition eigh_raw(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw numerical_error("eigh: eigensolver failed to converge");
    }
    return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

SpectralDecomposition eigh(const HermitianMatrix& m) { return eigh_raw(m.mat()); }

HermitianMatrix apply_scalar_function(const std::function<double(double)>& f,
                                      const HermitianMatrix& m) {
    const auto sd = eigh(m);
    RVector mapped(sd.eigenvalues.size());
    for (Eigen::Index j = 0; j < sd.eigenvalues.size(); ++j) {
        const double v = f(sd.eigenvalues(j));
        if (!std::isfinite(v)) {
            throw domain_error("apply_scalar_function: f is not finite at eigenvalue " +
                               fmt(sd.eigenvalues(j)));
        }
        mapped(j) = v;
    }
    CMatrix out = sd.eigenvectors * mapped.asDiagonal() * sd.eigenvectors.adjoint();
    return HermitianMatrix((out + out.adjoint()) * 0.5);
}

CMatrix commutator(const CMatrix& x, const CMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols()) {
        throw validation_error("commutator: dimension mismatch");
    }
    return x * y - y * x;
}

double variance(const DensityMatrix& rho, const HermitianMatrix& a) {
    if (rho.dim() != a.dim()) {
        throw validation_error("variance: dimension mismatch");
    }
    const CMatrix& r = rho.mat();
    const CMatrix& m = a.mat();
    const double mean = (r * m).trace().real();
    const double second = (r * m * m).trace().real();
    return second - mean * mean;
}

DensityMatrix random_density_matrix(int dim, Rng& rng, std::optional<int> rank) {
    if (dim < 1) {
        throw validation_error("random_density_matrix: dim must be >= 1");
    }
    const int r = rank.value_or(dim);
    if (r < 1 || r > dim) {
        throw validation_error("random_density_matrix: rank out of range [1, dim]");
    }
    CMatrix g(dim, r);
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < r; ++k) {
            g(j, k) = Complex(rng.normal(), rng.normal());
        }
    }
    CMatrix w = g * g.adjoint();
    w = ((w + w.adjoint()) * 0.5).eval();
    w /= w.trace().real();
    return DensityMatrix(HermitianMatrix(std::move(w)));
}

DensityMatrix random_density_matrix(int dim, std::uint64_t seed, std::optional<int> rank) {
    Rng rng(seed);
    return random_density_matrix(dim, rng, rank);
}

HermitianMatrix random_hermitian(int dim, Rng& rng) {
    if (dim < 1) {
        throw validation_error("random_hermitian: dim must be >= 1");
    }
    CMatrix g(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
            g(j, k) = Complex(rng.normal(), rng.normal());
        }
    }
    return HermitianMatrix(((g + g.adjoint()) * 0.5).eval());
}

HermitianMatrix random_hermitian(int dim, std::uint64_t seed) {
    Rng rng(seed);
    return random_hermitian(dim, rng);
}

CMatrix random_unitary(int dim, Rng& rng) {
    CMatrix g(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
            g(j, k) = Complex(rng.normal(), rng.normal());
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
    }
    return q;
}

} // namespace masi
