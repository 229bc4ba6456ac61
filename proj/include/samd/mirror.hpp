#pragma once

#include <Eigen/Dense>

namespace samd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class MirrorKind { EntropicSimplex, Euclidean };

/// A strongly convex regularizer psi on a closed convex set, together with its
/// conjugate psi* and the mirror map grad psi* : E* -> X.
///
/// Two instances are provided:
///  - entropic simplex: psi(x) = sum x_i ln x_i + ln n on the probability
///    simplex (non-negative, zero at the barycenter), psi*(z) = lse(z) - ln n,
///    mirror map = softmax. Primal norm l1, dual norm l_inf.
///  - euclidean: psi(x) = |x|^2 / 2 on R^n, mirror map = identity. l2 / l2.
///
/// Both have strong-convexity constant mu = 1 and a 1-Lipschitz mirror map.
/// Values are immutable; all member functions are pure.
class MirrorMap {
public:
    static constexpr double kSimplexTolerance = 1e-9;
    static constexpr double kInteriorThreshold = 1e-8;

    static MirrorMap entropic_simplex(int n);
    static MirrorMap euclidean(int n);

    MirrorKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return dim_; }
    bool is_entropic() const noexcept { return kind_ == MirrorKind::EntropicSimplex; }

    double strong_convexity() const noexcept { return 1.0; }
    double conjugate_lipschitz() const noexcept { return 1.0; }

    /// Diameter of the feasible set in the primal norm (infinite for R^n).
    double diameter() const noexcept;

    /// sup of psi over the feasible set (ln n on the simplex, infinite on R^n).
    double psi_sup() const noexcept;

    double primal_norm(const Vector& x) const;
    double dual_norm(const Vector& z) const;

    bool is_feasible(const Vector& x, double tol = kSimplexTolerance) const;

    double psi(const Vector& x) const;
    double psi_star(const Vector& z) const;
    Vector grad_psi_star(const Vector& z) const;

    /// D_{psi*}(z', z) = psi*(z') - psi*(z) - <grad psi*(z), z' - z>.
    double bregman_div_star(const Vector& z_prime, const Vector& z) const;

    /// Zero-sum representative of z for the entropic map (identity otherwise).
    /// The mirror map is unchanged by this projection.
    Vector dual_projection(const Vector& z) const;

    /// A dual point z with grad_psi_star(z) = x. Throws BoundaryMinimizer when
    /// an entropic coordinate is below kInteriorThreshold.
    Vector dual_of(const Vector& x) const;

    bool operator==(const MirrorMap&) const = default;

private:
    MirrorMap(MirrorKind kind, int n) : kind_(kind), dim_(n) {}

    void check_dual(const Vector& z) const;
    void check_primal(const Vector& x) const;

    MirrorKind kind_;
    int dim_;
};

/// Numerically stable ln sum_i exp(z_i).
double log_sum_exp(const Vector& z);

}  // namespace samd
