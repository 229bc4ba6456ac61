#include "samd/noise.hpp"

#include <cmath>
#include <functional>

#include "samd/errors.hpp"

namespace samd {

namespace {

double state_factor(const Vector& weights, const Vector& x) {
    return 1.0 + 0.5 * std::tanh(weights.dot(x));
}

// Visits every point of the simplex grid with the given resolution
// (all vertices and edge midpoints included).
void for_each_simplex_grid_point(int n, int resolution, const std::function<void(const Vector&)>& fn) {
    std::vector<int> counts(n, 0);
    std::function<void(int, int)> recurse = [&](int coord, int remaining) {
        if (coord == n - 1) {
            counts[coord] = remaining;
            Vector x(n);
            for (int i = 0; i < n; ++i) {
                x[i] = static_cast<double>(counts[i]) / resolution;
            }
            fn(x);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[coord] = c;
            recurse(coord + 1, remaining - c);
        }
    };
    recurse(0, resolution);
}

}  // namespace

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Scalar:
            return "scalar";
        case NoiseKind::Diagonal:
            return "diagonal";
        case NoiseKind::StateScaled:
            return "state-scaled";
    }
    return "unknown";
}

NoiseModel NoiseModel::zero(int n) { return scalar(n, 0.0, 0.0); }

NoiseModel NoiseModel::scalar(int n, double sigma0, double alpha_sigma) {
    if (n < 1 || !(sigma0 >= 0.0) || !std::isfinite(sigma0) || !std::isfinite(alpha_sigma)) {
        throw Error("scalar noise needs n >= 1, finite sigma0 >= 0 and a finite exponent");
    }
    NoiseModel m;
    m.kind_ = NoiseKind::Scalar;
    m.sigma0_ = Vector::Constant(n, sigma0);
    m.alpha_ = Vector::Constant(n, alpha_sigma);
    return m;
}

NoiseModel NoiseModel::diagonal(Vector sigma0, Vector alpha_sigma) {
    if (sigma0.size() < 1 || sigma0.size() != alpha_sigma.size() || !sigma0.allFinite() ||
        !alpha_sigma.allFinite() || sigma0.minCoeff() < 0.0) {
        throw Error("diagonal noise needs matching, finite, non-negative coefficient vectors");
    }
    NoiseModel m;
    m.kind_ = NoiseKind::Diagonal;
    m.sigma0_ = std::move(sigma0);
    m.alpha_ = std::move(alpha_sigma);
    return m;
}

NoiseModel NoiseModel::state_scaled(const MirrorMap& map, double sigma0, double alpha_sigma,
                                    Vector weights) {
    const int n = map.dim();
    if (weights.size() != n || !weights.allFinite()) {
        throw Error("state-scaled noise needs one finite weight per coordinate");
    }
    NoiseModel m = scalar(n, sigma0, alpha_sigma);
    m.kind_ = NoiseKind::StateScaled;
    m.weights_ = std::move(weights);
    if (map.is_entropic()) {
        const int resolution = n <= 3 ? 60 : (n <= 5 ? 12 : 1);
        double sup = 0.0;
        for_each_simplex_grid_point(n, resolution, [&](const Vector& x) {
            sup = std::max(sup, state_factor(m.weights_, x));
        });
        m.factor_sup_ = 1.01 * sup;
    } else {
        m.factor_sup_ = 1.5;
    }
    return m;
}

bool NoiseModel::operator==(const NoiseModel& other) const {
    auto same = [](const Vector& a, const Vector& b) {
        return a.size() == b.size() && (a.size() == 0 || a == b);
    };
    return kind_ == other.kind_ && same(sigma0_, other.sigma0_) && same(alpha_, other.alpha_) &&
           same(weights_, other.weights_) && factor_sup_ == other.factor_sup_;
}

Matrix NoiseModel::sigma(const Vector& x, double t) const {
    if (!(t > 0.0)) {
        throw NonPositiveTime("noise model evaluated at non-positive time");
    }
    const int n = dim();
    Vector diag(n);
    for (int i = 0; i < n; ++i) {
        diag[i] = sigma0_[i] == 0.0 ? 0.0 : sigma0_[i] * std::pow(t, alpha_[i]);
    }
    if (kind_ == NoiseKind::StateScaled) {
        diag *= state_factor(weights_, x);
    }
    return diag.asDiagonal();
}

Vector NoiseModel::apply(const Vector& x, double t, const Vector& dw) const {
    if (!(t > 0.0)) {
        throw NonPositiveTime("noise model evaluated at non-positive time");
    }
    const int n = dim();
    Vector out(n);
    const double factor = kind_ == NoiseKind::StateScaled ? state_factor(weights_, x) : 1.0;
    for (int i = 0; i < n; ++i) {
        const double level = sigma0_[i] == 0.0 ? 0.0 : sigma0_[i] * std::pow(t, alpha_[i]);
        out[i] = factor * level * dw[i];
    }
    return out;
}

double NoiseModel::sigma_star(double t) const {
    if (!(t > 0.0)) {
        throw NonPositiveTime("noise bound evaluated at non-positive time");
    }
    double level = 0.0;
    for (int i = 0; i < dim(); ++i) {
        if (sigma0_[i] != 0.0) {
            level = std::max(level, sigma0_[i] * std::pow(t, alpha_[i]));
        }
    }
    return kind_ == NoiseKind::StateScaled ? level * factor_sup_ : level;
}

double NoiseModel::sigma_star_sq(double t) const {
    const double s = sigma_star(t);
    return s * s;
}

std::optional<Schedule> NoiseModel::sigma_star_schedule() const {
    if (is_zero()) {
        return Schedule::constant(0.0);
    }
    if (kind_ == NoiseKind::Diagonal) {
        // A common exponent keeps the maximum a power law.
        for (int i = 1; i < dim(); ++i) {
            if (alpha_[i] != alpha_[0] && sigma0_[i] != 0.0) {
                return std::nullopt;
            }
        }
    }
    double coef = sigma0_.maxCoeff();
    if (kind_ == NoiseKind::StateScaled) {
        coef *= factor_sup_;
    }
    return Schedule::power_law(coef, alpha_[0]);
}

double NoiseModel::state_lipschitz() const noexcept {
    return kind_ == NoiseKind::StateScaled ? 0.5 * weights_.norm() : 0.0;
}

Vector NoiseStream::increments(double h, int n) {
    if (!(h > 0.0)) {
        throw Error("Wiener increments need h > 0");
    }
    const double scale = std::sqrt(h);
    Vector dw(n);
    for (int i = 0; i < n; ++i) {
        dw[i] = scale * rng_.normal(position_ + static_cast<std::uint64_t>(i));
    }
    position_ += static_cast<std::uint64_t>(n);
    return dw;
}

}  // namespace samd
