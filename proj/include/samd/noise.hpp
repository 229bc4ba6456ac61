#pragma once

#include <cstdint>
#include <optional>

#include "samd/mirror.hpp"
#include "samd/random.hpp"
#include "samd/schedules.hpp"

namespace samd {

enum class NoiseKind {
    Scalar,       ///< sigma(x, t) = sigma0 t^alpha I
    Diagonal,     ///< sigma(x, t) = diag(sigma0_i t^alpha_i)
    StateScaled,  ///< sigma0 t^alpha phi(x) I, phi(x) = 1 + tanh(<w, x>) / 2 in [0.5, 1.5]
};

/// Volatility model sigma(x, t) of the gradient noise dG = grad f dt + sigma dB.
///
/// The covariance bound sigma*^2(t) = sup_x |Sigma(x, t)| uses the spectral
/// norm of Sigma = sigma sigma^T, which for every kind here is the largest
/// diagonal entry; for the scalar kind it is sigma0^2 t^(2 alpha).
class NoiseModel {
public:
    NoiseModel() = default;

    static NoiseModel zero(int n);
    static NoiseModel scalar(int n, double sigma0, double alpha_sigma);
    static NoiseModel diagonal(Vector sigma0, Vector alpha_sigma);
    /// The bound for the state-scaled kind is the maximum of phi over a dense
    /// sample of the feasible set (vertices included) times 1.01.
    static NoiseModel state_scaled(const MirrorMap& map, double sigma0, double alpha_sigma,
                                   Vector weights);

    NoiseKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return static_cast<int>(sigma0_.size()); }
    bool is_zero() const noexcept { return sigma0_.size() == 0 || sigma0_.isZero(0.0); }

    const Vector& sigma0() const noexcept { return sigma0_; }
    const Vector& alpha() const noexcept { return alpha_; }
    const Vector& weights() const noexcept { return weights_; }

    Matrix sigma(const Vector& x, double t) const;
    /// sigma(x, t) * dw without forming the matrix.
    Vector apply(const Vector& x, double t, const Vector& dw) const;

    double sigma_star_sq(double t) const;
    double sigma_star(double t) const;
    bool sigma_star_is_estimate() const noexcept { return kind_ == NoiseKind::StateScaled; }
    /// sigma*(t) as a power law when it is one (scalar, state-scaled, or
    /// diagonal with a common exponent).
    std::optional<Schedule> sigma_star_schedule() const;

    /// Lipschitz constant of x -> sigma(x, t) / (sigma0 t^alpha) (0 unless state-scaled).
    double state_lipschitz() const noexcept;

    bool operator==(const NoiseModel&) const;

private:
    NoiseKind kind_ = NoiseKind::Scalar;
    Vector sigma0_;
    Vector alpha_;
    Vector weights_;
    double factor_sup_ = 1.0;
};

std::string to_string(NoiseKind kind);

/// Reproducible Gaussian increments for one trajectory. The draws are a pure
/// function of (base seed, trajectory index, position), so a stream can be
/// replayed from any position and distinct indices are independent.
class NoiseStream {
public:
    NoiseStream(std::uint64_t base_seed, std::uint64_t trajectory_index)
        : base_seed_(base_seed), index_(trajectory_index),
          rng_(stream_key(base_seed, trajectory_index)) {}

    std::uint64_t base_seed() const noexcept { return base_seed_; }
    std::uint64_t trajectory_index() const noexcept { return index_; }
    std::uint64_t key() const noexcept { return rng_.key(); }
    std::uint64_t position() const noexcept { return position_; }
    void seek(std::uint64_t position) noexcept { position_ = position; }

    /// n independent N(0, h) draws; advances the position by n.
    Vector increments(double h, int n);

private:
    std::uint64_t base_seed_;
    std::uint64_t index_;
    CounterRng rng_;
    std::uint64_t position_ = 0;
};

}  // namespace samd
