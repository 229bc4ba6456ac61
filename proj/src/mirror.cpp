#include "samd/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "samd/errors.hpp"

namespace samd {

namespace {

std::string describe(const Vector& v) {
    std::ostringstream os;
    os << "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        os << (i ? ", " : "") << v[i];
    }
    os << ")";
    return os.str();
}

}  // namespace

double log_sum_exp(const Vector& z) {
    const double m = z.maxCoeff();
    return m + std::log((z.array() - m).exp().sum());
}

MirrorMap MirrorMap::entropic_simplex(int n) {
    if (n < 1) {
        throw Error("mirror map dimension must be positive");
    }
    return MirrorMap(MirrorKind::EntropicSimplex, n);
}

MirrorMap MirrorMap::euclidean(int n) {
    if (n < 1) {
        throw Error("mirror map dimension must be positive");
    }
    return MirrorMap(MirrorKind::Euclidean, n);
}

double MirrorMap::diameter() const noexcept {
    return is_entropic() ? 2.0 : std::numeric_limits<double>::infinity();
}

double MirrorMap::psi_sup() const noexcept {
    return is_entropic() ? std::log(static_cast<double>(dim_))
                         : std::numeric_limits<double>::infinity();
}

double MirrorMap::primal_norm(const Vector& x) const {
    return is_entropic() ? x.lpNorm<1>() : x.norm();
}

double MirrorMap::dual_norm(const Vector& z) const {
    return is_entropic() ? z.lpNorm<Eigen::Infinity>() : z.norm();
}

bool MirrorMap::is_feasible(const Vector& x, double tol) const {
    if (x.size() != dim_ || !x.allFinite()) {
        return false;
    }
    if (!is_entropic()) {
        return true;
    }
    return x.minCoeff() >= 0.0 && std::abs(x.sum() - 1.0) <= tol;
}

void MirrorMap::check_primal(const Vector& x) const {
    if (!is_feasible(x)) {
        throw InfeasiblePoint("point " + describe(x) + " is not in the feasible set");
    }
}

void MirrorMap::check_dual(const Vector& z) const {
    if (z.size() != dim_ || !z.allFinite()) {
        throw NonFinite("dual point " + describe(z) + " has wrong size or non-finite entries");
    }
}

double MirrorMap::psi(const Vector& x) const {
    check_primal(x);
    if (!is_entropic()) {
        return 0.5 * x.squaredNorm();
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0) {
            sum += x[i] * std::log(x[i]);
        }
    }
    // Shift so that the minimum (at the barycenter) is exactly zero.
    return std::max(0.0, sum + std::log(static_cast<double>(dim_)));
}

double MirrorMap::psi_star(const Vector& z) const {
    check_dual(z);
    if (!is_entropic()) {
        return 0.5 * z.squaredNorm();
    }
    return log_sum_exp(z) - std::log(static_cast<double>(dim_));
}

Vector MirrorMap::grad_psi_star(const Vector& z) const {
    check_dual(z);
    if (!is_entropic()) {
        return z;
    }
    Vector p = (z.array() - z.maxCoeff()).exp();
    p /= p.sum();
    return p;
}

double MirrorMap::bregman_div_star(const Vector& z_prime, const Vector& z) const {
    check_dual(z_prime);
    check_dual(z);
    if (!is_entropic()) {
        return 0.5 * (z_prime - z).squaredNorm();
    }
    // D is invariant under shifting either argument along 1, and equals
    // ln E_p[exp(u)] with u = d - E_p[d], d = z' - z, p = softmax(z).
    const Vector p = grad_psi_star(z);
    const Vector d = z_prime - z;
    const double mean = p.dot(d);
    const Vector u = d.array() - mean;
    const double spread = u.cwiseAbs().maxCoeff();
    double value = 0.0;
    if (spread < 1.0) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            acc += p[i] * std::expm1(u[i]);
        }
        value = std::log1p(acc);
    } else {
        const double top = u.maxCoeff();
        value = top + std::log(p.dot((u.array() - top).exp().matrix()));
    }
    return value;
}

Vector MirrorMap::dual_projection(const Vector& z) const {
    check_dual(z);
    if (!is_entropic()) {
        return z;
    }
    return z.array() - z.mean();
}

Vector MirrorMap::dual_of(const Vector& x) const {
    check_primal(x);
    if (!is_entropic()) {
        return x;
    }
    if (x.minCoeff() < kInteriorThreshold) {
        throw BoundaryMinimizer("point " + describe(x) +
                                " has a coordinate below the interior threshold");
    }
    Vector z = x.array().log();
    return z.array() - z.mean();
}

}  // namespace samd
