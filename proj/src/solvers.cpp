#include "nmfkit/solvers.hpp"

namespace nmfkit {

namespace {
constexpr double kMuGuard = 1e-12;
}

double objective(const DataMatrix& X, const Factorization& F) {
    require_compatible(X, F);
    return 0.5 * (X.values() - F.W * F.H).squaredNorm();
}

double fitting_error_percent(const DataMatrix& X, const Factorization& F) {
    require_compatible(X, F);
    const double denom = X.values().squaredNorm();
    if (denom <= 0.0) throw DomainError("fitting_error_percent: all-zero X");
    return 100.0 * (X.values() - F.W * F.H).squaredNorm() / denom;
}

Factorization hals_sweep(const DataMatrix& X, Factorization F) {
    require_compatible(X, F);
    Matrix& W = F.W;
    Matrix& H = F.H;
    const Eigen::Index r = F.rank();

    // W pass: exact block minimizer per column given fixed H.
    {
        const Matrix XHt = X.values() * H.transpose();  // m x r
        const Matrix HHt = H * H.transpose();           // r x r
        for (Eigen::Index j = 0; j < r; ++j) {
            const double d = HHt(j, j);
            if (d <= 0.0) continue;  // dead row of H; keep column as is
            W.col(j) = ((W.col(j) * d + XHt.col(j) - W * HHt.col(j)) / d)
                           .cwiseMax(0.0);
        }
    }
    // H pass.
    {
        const Matrix WtX = W.transpose() * X.values();  // r x n
        const Matrix WtW = W.transpose() * W;           // r x r
        for (Eigen::Index j = 0; j < r; ++j) {
            const double d = WtW(j, j);
            if (d <= 0.0) continue;
            H.row(j) = ((H.row(j) * d + WtX.row(j) - WtW.row(j) * H) / d)
                           .cwiseMax(0.0);
        }
    }
    return F;
}

Factorization mu_sweep(const DataMatrix& X, Factorization F) {
    require_compatible(X, F);
    Matrix& W = F.W;
    Matrix& H = F.H;

    {
        const Matrix num = W.transpose() * X.values();
        const Matrix den = (W.transpose() * W) * H;
        H.array() *= num.array() / (den.array() + kMuGuard);
    }
    {
        const Matrix num = X.values() * H.transpose();
        const Matrix den = W * (H * H.transpose());
        W.array() *= num.array() / (den.array() + kMuGuard);
    }
    return F;
}

namespace {

bool component_converged(const Vector& prev, const Vector& next, double epsilon) {
    const double diff = (next - prev).squaredNorm();
    const double sum = (next + prev).squaredNorm();
    if (sum == 0.0) return true;  // both vectors zero
    return diff <= epsilon * sum;
}

}  // namespace

bool converged(const Factorization& prev, const Factorization& next, double epsilon) {
    if (prev.W.rows() != next.W.rows() || prev.W.cols() != next.W.cols() ||
        prev.H.rows() != next.H.rows() || prev.H.cols() != next.H.cols())
        throw DimensionError("converged: shape mismatch");
    const Eigen::Index r = prev.rank();
    for (Eigen::Index j = 0; j < r; ++j) {
        if (!component_converged(prev.W.col(j), next.W.col(j), epsilon)) return false;
        if (!component_converged(prev.H.row(j).transpose(), next.H.row(j).transpose(), epsilon))
            return false;
    }
    return true;
}

SolveResult solve(const DataMatrix& X, Factorization F0, const SolverConfig& cfg,
                  const std::string& stage_label) {
    cfg.validate();
    require_compatible(X, F0);

    SolveResult result;
    result.trace.stage_label = stage_label;
    const bool tracing = cfg.trace_stride > 0;
    if (tracing)
        result.trace.samples.push_back({0, 0.0, objective(X, F0)});

    Factorization current = std::move(F0);
    for (std::int64_t it = 1; it <= cfg.max_iterations; ++it) {
        Factorization next = (cfg.algorithm == Algorithm::HALS)
                                 ? hals_sweep(X, current)
                                 : mu_sweep(X, current);
        result.iterations = it;
        if (tracing && it % cfg.trace_stride == 0)
            result.trace.samples.push_back({it, 0.0, objective(X, next)});
        const bool done = converged(current, next, cfg.epsilon);
        current = std::move(next);
        if (done) {
            result.converged = true;
            break;
        }
    }
    if (tracing && result.trace.samples.back().iteration != result.iterations)
        result.trace.samples.push_back({result.iterations, 0.0, objective(X, current)});
    result.factors = std::move(current);
    return result;
}

}  // namespace nmfkit
