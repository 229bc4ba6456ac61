#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "samd/mirror.hpp"

namespace samd {

enum class ObjectiveKind {
    SumExp,          ///< f(x) = sum_i exp(<c_i, x>), rows of the coefficient matrix are c_i
    Rank1Quadratic,  ///< f(x) = <c, x>^2 / 2
    Quadratic,       ///< f(x) = sum_i w_i x_i^2 / 2, used for unconstrained checks
};

/// Smooth convex test objective. Immutable; evaluation is pure.
class Objective {
public:
    static Objective sum_exp(Matrix coefficients);
    static Objective rank1_quadratic(Vector c);
    static Objective quadratic(Vector weights);

    /// The stored n = 3, k = 3 sum-exp instance (data/sum_exp_default.txt).
    static Objective default_sum_exp();
    /// Rank-one quadratic with a fixed mixed-sign c in R^3.
    static Objective default_rank1();
    /// k x n coefficients with N(0, 1) entries drawn from a seeded generator.
    static Objective seeded_sum_exp(int n, int k, std::uint64_t seed);

    ObjectiveKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return static_cast<int>(coefficients_.cols()); }

    /// Sum-exp: k x n matrix; rank-one: 1 x n (c); quadratic: 1 x n (weights).
    const Matrix& coefficients() const noexcept { return coefficients_; }

    double value(const Vector& x) const;
    Vector gradient(const Vector& x) const;

    /// Analytic upper bound on the gradient Lipschitz constant over the
    /// map's feasible set, w.r.t. the map's norm pair. May be infinite.
    double analytic_grad_lipschitz(const MirrorMap& map) const;
    /// Analytic upper bound on sup_x |grad f(x)|_* over the feasible set.
    double analytic_gradient_bound(const MirrorMap& map) const;

    bool operator==(const Objective&) const;

private:
    Objective(ObjectiveKind kind, Matrix coefficients)
        : kind_(kind), coefficients_(std::move(coefficients)) {}

    void check_point(const Vector& x) const;

    ObjectiveKind kind_;
    Matrix coefficients_;
};

std::string to_string(ObjectiveKind kind);

struct MinimizerCertificate {
    Vector x_star;
    double f_star = 0.0;
    std::optional<Vector> z_star;  ///< empty when the minimizer is on the boundary
    std::string method;
    double residual = 0.0;
    long iterations = 0;

    bool interior() const noexcept { return z_star.has_value(); }
};

/// Independent minimizer oracle. Runs the fixed-point mirror iteration
/// x <- grad psi*(grad psi(x) - gamma grad f(x)) and then polishes with exact
/// pairwise line searches (simplex) or plain gradient steps (R^n).
///
/// The residual is the simplex Frank-Wolfe gap <grad f, x> - min_i grad_i f,
/// or |grad f|_2 on R^n. Throws NoConvergence if it stays >= tol.
MinimizerCertificate solve_minimizer(const Objective& objective, const MirrorMap& map,
                                     double tol, long max_iterations = 1'000'000);

/// Optimality residual used by solve_minimizer.
double optimality_residual(const Objective& objective, const MirrorMap& map, const Vector& x);

struct LipschitzEstimate {
    double grad_lipschitz = 0.0;   ///< L_f = min(analytic, 1.01 * sampled)
    double gradient_bound = 0.0;   ///< G = min(analytic, 1.01 * sampled)
    double analytic_grad_lipschitz = 0.0;
    double analytic_gradient_bound = 0.0;
    double sampled_grad_lipschitz = 0.0;
    double sampled_gradient_bound = 0.0;
};

/// Sampled + analytic estimates of L_f and G. Diagnostics only.
LipschitzEstimate lipschitz_constants(const Objective& objective, const MirrorMap& map,
                                      int samples, std::uint64_t seed = 1);

/// Uniform sample from the feasible set (Dirichlet(1) on the simplex,
/// standard normal on R^n). Used by the property suites.
template <class Rng>
Vector sample_feasible(const MirrorMap& map, Rng& rng);

}  // namespace samd

#include "samd/detail/sampling.hpp"
