#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace lcp {

/// y = M x for the (symmetric) linear map under iteration.
using LinearMap = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

struct PowerOptions {
    double tol = 1e-10;
    int max_iter = 0;  // 0 -> 10*n + 1000
    std::uint64_t seed = 0;
    /// Added to the map during iteration and removed from the reported value.
    /// Choose it so the shifted spectrum is non-negative; otherwise the
    /// iteration may lock onto the most negative eigenvalue.
    double shift = 0.0;
    /// Optional warm start; orthogonalized against the deflation set. Empty ->
    /// random start from `seed`.
    Eigen::VectorXd start;
};

struct PowerResult {
    double value = 0.0;
    Eigen::VectorXd vector;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;  // ||A v - value*v||_2 at exit
};

/// Power iteration for the dominant eigenpair of a symmetric map restricted to
/// the orthogonal complement of `deflate` (mutually orthonormal vectors). The
/// iterate is re-orthogonalized against the deflation set every step; exit on
/// ||A v - lambda v|| <= tol*|lambda| or after max_iter steps (flagged).
PowerResult power_leading(const LinearMap& apply, int n, const std::vector<Eigen::VectorXd>& deflate,
                          const PowerOptions& opts = {});

struct SymEigs {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // orthonormal columns, aligned with values
};

/// Full symmetric eigendecomposition, values descending. Throws
/// std::invalid_argument if the input is not symmetric within 1e-10
/// (relative to the largest entry) or exceeds 4000x4000.
SymEigs dense_sym_eigs(const Eigen::MatrixXd& m);

/// Full complex spectrum of a general square matrix (unordered).
std::vector<std::complex<double>> dense_nonsym_eigs(const Eigen::MatrixXd& m);

/// Spectral output of the clustering operator W - diag(Wu): the second and
/// third largest eigenvalues and the unit eigenvector of the second.
struct SpectralSummary {
    double beta2 = 0.0;
    double beta3 = 0.0;
    Eigen::VectorXd y2;
    bool converged = true;  // false if either power iteration hit max_iter
};

}  // namespace lcp
