#include "samd/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "samd/errors.hpp"
#include "samd/random.hpp"

namespace samd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Drawn once from N(0, 1) (numpy default_rng(20171030), rounded to 6 digits);
// mirrored in data/sum_exp_default.txt.
constexpr double kDefaultSumExp[3][3] = {
    {-1.201272, 1.736024, -0.077109},
    {-1.221178, 0.489424, 1.176581},
    {2.930729, 0.757386, 1.222449},
};

constexpr double kDefaultRank1[3] = {1.0, -0.5, 0.25};

double sup_norm(const Eigen::Ref<const Vector>& v) { return v.cwiseAbs().maxCoeff(); }

// Exact pairwise line search along e_to - e_from: moves mass from the
// coordinate with the largest partial derivative to the one with the smallest,
// stopping where the directional derivative changes sign.
void pairwise_step(const Objective& objective, Vector& x) {
    const Vector g = objective.gradient(x);
    int from = -1;
    for (int i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && (from < 0 || g[i] > g[from])) {
            from = i;
        }
    }
    int to = 0;
    g.minCoeff(&to);
    if (from < 0 || from == to) {
        return;
    }
    auto slope = [&](double tau) {
        Vector y = x;
        y[from] -= tau;
        y[to] += tau;
        const Vector gy = objective.gradient(y);
        return gy[to] - gy[from];
    };
    double lo = 0.0;
    double hi = x[from];
    if (slope(hi) <= 0.0) {
        x[to] += x[from];
        x[from] = 0.0;
        return;
    }
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (slope(mid) < 0.0 ? lo : hi) = mid;
    }
    const double tau = 0.5 * (lo + hi);
    x[from] -= tau;
    x[to] += tau;
}

}  // namespace

std::string to_string(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::SumExp:
            return "sum-exp";
        case ObjectiveKind::Rank1Quadratic:
            return "rank1-quadratic";
        case ObjectiveKind::Quadratic:
            return "quadratic";
    }
    return "unknown";
}

Objective Objective::sum_exp(Matrix coefficients) {
    if (coefficients.rows() < 1 || coefficients.cols() < 1) {
        throw Error("sum-exp objective needs at least one term and one coordinate");
    }
    if (!coefficients.allFinite()) {
        throw Error("sum-exp coefficients must be finite");
    }
    return Objective(ObjectiveKind::SumExp, std::move(coefficients));
}

Objective Objective::rank1_quadratic(Vector c) {
    if (c.size() < 1 || !c.allFinite()) {
        throw Error("rank-one quadratic needs a finite, non-empty c");
    }
    return Objective(ObjectiveKind::Rank1Quadratic, c.transpose());
}

Objective Objective::quadratic(Vector weights) {
    if (weights.size() < 1 || !weights.allFinite() || weights.minCoeff() < 0.0) {
        throw Error("quadratic weights must be finite and non-negative");
    }
    return Objective(ObjectiveKind::Quadratic, weights.transpose());
}

Objective Objective::default_sum_exp() {
    Matrix c(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            c(i, j) = kDefaultSumExp[i][j];
        }
    }
    return sum_exp(std::move(c));
}

Objective Objective::default_rank1() {
    return rank1_quadratic(Vector{{kDefaultRank1[0], kDefaultRank1[1], kDefaultRank1[2]}});
}

Objective Objective::seeded_sum_exp(int n, int k, std::uint64_t seed) {
    if (n < 1 || k < 1) {
        throw Error("seeded sum-exp needs n >= 1 and k >= 1");
    }
    const CounterRng rng(stream_key(seed, 0x5E7ULL));
    Matrix c(k, n);
    std::uint64_t counter = 0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < n; ++j) {
            c(i, j) = rng.normal(counter++);
        }
    }
    return sum_exp(std::move(c));
}

bool Objective::operator==(const Objective& other) const {
    return kind_ == other.kind_ && coefficients_.rows() == other.coefficients_.rows() &&
           coefficients_.cols() == other.coefficients_.cols() &&
           coefficients_ == other.coefficients_;
}

void Objective::check_point(const Vector& x) const {
    if (x.size() != dim() || !x.allFinite()) {
        throw InfeasiblePoint("objective evaluated at a point of wrong size or with non-finite entries");
    }
}

double Objective::value(const Vector& x) const {
    check_point(x);
    switch (kind_) {
        case ObjectiveKind::SumExp:
            return (coefficients_ * x).array().exp().sum();
        case ObjectiveKind::Rank1Quadratic: {
            const double u = coefficients_.row(0).dot(x);
            return 0.5 * u * u;
        }
        case ObjectiveKind::Quadratic:
            return 0.5 * (coefficients_.row(0).transpose().array() * x.array().square()).sum();
    }
    return 0.0;
}

Vector Objective::gradient(const Vector& x) const {
    check_point(x);
    switch (kind_) {
        case ObjectiveKind::SumExp: {
            const Vector w = (coefficients_ * x).array().exp();
            return coefficients_.transpose() * w;
        }
        case ObjectiveKind::Rank1Quadratic: {
            const Vector c = coefficients_.row(0).transpose();
            return c.dot(x) * c;
        }
        case ObjectiveKind::Quadratic:
            return coefficients_.row(0).transpose().cwiseProduct(x);
    }
    return Vector::Zero(x.size());
}

double Objective::analytic_grad_lipschitz(const MirrorMap& map) const {
    const bool all_zero = coefficients_.isZero(0.0);
    switch (kind_) {
        case ObjectiveKind::SumExp: {
            if (all_zero) {
                return 0.0;
            }
            if (!map.is_entropic()) {
                return kInf;
            }
            // Hessian sum_i e^{<c_i,x>} c_i c_i^T; |<c_i, v>| <= |c_i|_inf |v|_1 and
            // <c_i, x> <= max_j c_ij on the simplex.
            double bound = 0.0;
            for (Eigen::Index i = 0; i < coefficients_.rows(); ++i) {
                const double s = sup_norm(coefficients_.row(i).transpose());
                bound += std::exp(coefficients_.row(i).maxCoeff()) * s * s;
            }
            return bound;
        }
        case ObjectiveKind::Rank1Quadratic: {
            const Vector c = coefficients_.row(0).transpose();
            return map.is_entropic() ? std::pow(sup_norm(c), 2) : c.squaredNorm();
        }
        case ObjectiveKind::Quadratic:
            return coefficients_.row(0).maxCoeff();
    }
    return kInf;
}

double Objective::analytic_gradient_bound(const MirrorMap& map) const {
    if (coefficients_.isZero(0.0)) {
        return 0.0;
    }
    if (!map.is_entropic()) {
        return kInf;
    }
    switch (kind_) {
        case ObjectiveKind::SumExp: {
            double bound = 0.0;
            for (Eigen::Index i = 0; i < coefficients_.rows(); ++i) {
                bound += std::exp(coefficients_.row(i).maxCoeff()) *
                         sup_norm(coefficients_.row(i).transpose());
            }
            return bound;
        }
        case ObjectiveKind::Rank1Quadratic:
            return std::pow(sup_norm(coefficients_.row(0).transpose()), 2);
        case ObjectiveKind::Quadratic:
            return coefficients_.row(0).maxCoeff();
    }
    return kInf;
}

double optimality_residual(const Objective& objective, const MirrorMap& map, const Vector& x) {
    const Vector g = objective.gradient(x);
    if (map.is_entropic()) {
        return std::max(0.0, g.dot(x) - g.minCoeff());
    }
    return g.norm();
}

MinimizerCertificate solve_minimizer(const Objective& objective, const MirrorMap& map,
                                     double tol, long max_iterations) {
    if (!(tol > 0.0)) {
        throw Error("solve_minimizer: tolerance must be positive");
    }
    if (objective.dim() != map.dim()) {
        throw Error("solve_minimizer: objective and mirror map dimensions differ");
    }
    const int n = map.dim();
    const double lipschitz = objective.analytic_grad_lipschitz(map);
    if (!std::isfinite(lipschitz)) {
        throw NoConvergence("solve_minimizer: no finite gradient Lipschitz bound on this set");
    }
    const double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

    MinimizerCertificate cert;
    Vector x = map.is_entropic() ? Vector::Constant(n, 1.0 / n) : Vector::Zero(n);
    double residual = optimality_residual(objective, map, x);
    long it = 0;

    // The mirror iteration alone converges linearly but stalls around the
    // rounding floor; hand off to the polishing phase well before that.
    const double handoff = std::max(tol, 1e-7);
    for (; it < max_iterations && residual >= handoff; ++it) {
        const Vector g = objective.gradient(x);
        if (map.is_entropic()) {
            // x <- grad psi*(grad psi(x) - step g), written multiplicatively.
            const Vector shifted = -step * (g.array() - g.minCoeff());
            x = x.array() * shifted.array().exp();
            x /= x.sum();
        } else {
            x -= step * g;
        }
        residual = optimality_residual(objective, map, x);
    }
    cert.method = map.is_entropic() ? "entropic mirror iteration + pairwise line search"
                                    : "gradient iteration";
    for (long pass = 0; pass < 20000 && residual >= tol; ++pass, ++it) {
        if (map.is_entropic()) {
            pairwise_step(objective, x);
        } else {
            x -= step * objective.gradient(x);
        }
        residual = optimality_residual(objective, map, x);
    }
    if (!(residual < tol)) {
        throw NoConvergence("solve_minimizer: residual " + std::to_string(residual) +
                            " above tolerance after " + std::to_string(it) + " iterations");
    }
    cert.x_star = x;
    cert.f_star = objective.value(x);
    cert.residual = residual;
    cert.iterations = it;
    try {
        cert.z_star = map.dual_of(x);
    } catch (const BoundaryMinimizer&) {
        cert.z_star.reset();
    }
    return cert;
}

LipschitzEstimate lipschitz_constants(const Objective& objective, const MirrorMap& map,
                                      int samples, std::uint64_t seed) {
    if (samples < 1000) {
        throw Error("lipschitz_constants: at least 1000 samples are required");
    }
    std::mt19937_64 rng(seed);
    LipschitzEstimate est;
    est.analytic_grad_lipschitz = objective.analytic_grad_lipschitz(map);
    est.analytic_gradient_bound = objective.analytic_gradient_bound(map);
    for (int k = 0; k < samples; ++k) {
        const Vector x = sample_feasible(map, rng);
        const Vector y = sample_feasible(map, rng);
        const Vector gx = objective.gradient(x);
        const Vector gy = objective.gradient(y);
        est.sampled_gradient_bound = std::max(est.sampled_gradient_bound, map.dual_norm(gx));
        const double dist = map.primal_norm(x - y);
        if (dist > 0.0) {
            est.sampled_grad_lipschitz =
                std::max(est.sampled_grad_lipschitz, map.dual_norm(gx - gy) / dist);
        }
    }
    est.grad_lipschitz = std::min(est.analytic_grad_lipschitz, 1.01 * est.sampled_grad_lipschitz);
    est.gradient_bound = std::min(est.analytic_gradient_bound, 1.01 * est.sampled_gradient_bound);
    return est;
}

}  // namespace samd
