#include "lcp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "lcp/rng.hpp"

namespace lcp {

namespace {

void project_out(Eigen::VectorXd& v, const std::vector<Eigen::VectorXd>& basis) {
    for (const auto& b : basis) v -= b.dot(v) * b;
}

}  // namespace

PowerResult power_leading(const LinearMap& apply, int n, const std::vector<Eigen::VectorXd>& deflate,
                          const PowerOptions& opts) {
    if (n <= 0) throw std::invalid_argument("power_leading needs a positive dimension");
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * n + 1000;

    Eigen::VectorXd v;
    if (opts.start.size() == n) {
        v = opts.start;
    } else {
        v.resize(n);
        SplitMix64 rng(opts.seed);
        for (int i = 0; i < n; ++i) v[i] = rng.next_symmetric();
    }
    project_out(v, deflate);
    double norm = v.norm();
    if (norm == 0.0) {
        // Start vector fell entirely inside the deflation span; perturb.
        SplitMix64 rng(opts.seed + 0x6a09e667f3bcc908ULL);
        for (int i = 0; i < n; ++i) v[i] = rng.next_symmetric();
        project_out(v, deflate);
        norm = v.norm();
        if (norm == 0.0) throw std::invalid_argument("deflation set spans the whole space");
    }
    v /= norm;

    PowerResult result;
    result.vector = v;
    Eigen::VectorXd w(n);
    for (int iter = 1; iter <= max_iter; ++iter) {
        apply(v, w);
        if (opts.shift != 0.0) w += opts.shift * v;
        project_out(w, deflate);
        const double lambda = v.dot(w);
        const double residual = (w - lambda * v).norm();
        result.iterations = iter;
        result.value = lambda - opts.shift;
        result.residual = residual;
        const double wnorm = w.norm();
        if (wnorm == 0.0) {
            // Map annihilates the complement: eigenvalue 0 (-shift removed).
            result.vector = v;
            result.converged = true;
            return result;
        }
        v = w / wnorm;
        result.vector = v;
        if (residual <= opts.tol * std::max(std::abs(lambda), 1e-300)) {
            result.converged = true;
            return result;
        }
    }
    result.converged = false;
    return result;
}

SymEigs dense_sym_eigs(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("dense_sym_eigs needs a square matrix");
    if (m.rows() > 4000) throw std::invalid_argument("dense_sym_eigs capped at 4000x4000");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("dense_sym_eigs input is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver failed");

    const Eigen::Index n = m.rows();
    SymEigs out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values[i] = solver.eigenvalues()[n - 1 - i];
        out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return out;
}

std::vector<std::complex<double>> dense_nonsym_eigs(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("dense_nonsym_eigs needs a square matrix");
    if (m.rows() > 4000) throw std::invalid_argument("dense_nonsym_eigs capped at 4000x4000");
    if (m.rows() == 0) return {};
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("general eigensolver failed");
    std::vector<std::complex<double>> values(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) values[i] = solver.eigenvalues()[i];
    return values;
}

}  // namespace lcp
