#pragma once

#include <complex>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "masi/errors.hpp"
#include "masi/rng.hpp"

namespace masi {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Complex Hermitian matrix, validated at construction.
/// Entries must satisfy M == M* within absolute tolerance 1e-12.
class HermitianMatrix {
public:
    static constexpr double kHermitianTol = 1e-12;

    explicit HermitianMatrix(CMatrix m);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const CMatrix& mat() const { return mat_; }

private:
    CMatrix mat_;
};

/// Density matrix: Hermitian, PSD up to rank_tolerance, unit trace.
/// Eigenvalues below rank_tolerance * (largest eigenvalue) count as zero.
class DensityMatrix {
public:
    static constexpr double kTraceTol = 1e-10;

    explicit DensityMatrix(HermitianMatrix base, double rank_tolerance = 1e-12);
    explicit DensityMatrix(CMatrix m, double rank_tolerance = 1e-12)
        : DensityMatrix(HermitianMatrix(std::move(m)), rank_tolerance) {}

    int dim() const { return base_.dim(); }
    const CMatrix& mat() const { return base_.mat(); }
    const HermitianMatrix& base() const { return base_; }
    double rank_tolerance() const { return rank_tolerance_; }

private:
    HermitianMatrix base_;
    double rank_tolerance_;
};

/// Eigendecomposition with ascending eigenvalues and orthonormal columns.
struct SpectralDecomposition {
    RVector eigenvalues;   // ascending
    CMatrix eigenvectors;  // unitary, columns are eigenvectors
};

/// Dense Hermitian eigensolver. Throws validation_error (naming the largest
/// asymmetry) if the raw matrix is not Hermitian within tolerance.
SpectralDecomposition eigh(const HermitianMatrix& m);
SpectralDecomposition eigh_raw(const CMatrix& m);

/// Spectral calculus: U diag(f(lambda_j)) U*. f must be defined and finite at
/// every eigenvalue, otherwise a domain_error reporting the eigenvalue.
HermitianMatrix apply_scalar_function(const std::function<double(double)>& f,
                                      const HermitianMatrix& m);

/// XY - YX. Anti-Hermitian when both arguments are Hermitian.
CMatrix commutator(const CMatrix& x, const CMatrix& y);

/// Tr(rho A^2) - (Tr rho A)^2.
double variance(const DensityMatrix& rho, const HermitianMatrix& a);

/// Normalized G G* with G complex standard-normal of shape dim x rank.
/// Deterministic per seed; rank defaults to dim.
DensityMatrix random_density_matrix(int dim, std::uint64_t seed,
                                    std::optional<int> rank = std::nullopt);
DensityMatrix random_density_matrix(int dim, Rng& rng,
                                    std::optional<int> rank = std::nullopt);

/// Gaussian Hermitian matrix (GUE-style), deterministic per seed.
HermitianMatrix random_hermitian(int dim, std::uint64_t seed);
HermitianMatrix random_hermitian(int dim, Rng& rng);

/// Unitary from the QR decomposition of a complex Gaussian matrix,
/// phases fixed by the R diagonal.
CMatrix random_unitary(int dim, Rng& rng);

} // namespace masi
