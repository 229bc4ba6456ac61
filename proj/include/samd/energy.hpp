#pragma once

#include "samd/mirror.hpp"
#include "samd/objectives.hpp"
#include "samd/schedules.hpp"

namespace samd {

/// Everything needed to evaluate the Lyapunov energy
///   L(x, z, t) = r(t) (f(x) - f*) + s(t) D_{psi*}(z / s(t), z*).
/// For the non-accelerated kinds (MD, SMD) the gap term is dropped and
/// L = s(t) D_{psi*}(z / s(t), z*).
class EnergyContext {
public:
    /// Throws BoundaryMinimizer when the certificate has no dual anchor, and
    /// Error when grad psi*(z*) is further than 1e-8 from x*.
    EnergyContext(MirrorMap map, Objective objective, MinimizerCertificate certificate,
                  RateBundle rates, bool accelerated = true);

    const MirrorMap& map() const noexcept { return map_; }
    const Objective& objective() const noexcept { return objective_; }
    const MinimizerCertificate& certificate() const noexcept { return certificate_; }
    const RateBundle& rates() const noexcept { return rates_; }
    bool accelerated() const noexcept { return accelerated_; }

    const Vector& x_star() const noexcept { return certificate_.x_star; }
    const Vector& z_star() const noexcept { return *certificate_.z_star; }
    double f_star() const noexcept { return certificate_.f_star; }
    /// psi(x*), the constant in front of s-dot in the drift bound.
    double psi_x_star() const { return map_.psi(certificate_.x_star); }

private:
    MirrorMap map_;
    Objective objective_;
    MinimizerCertificate certificate_;
    RateBundle rates_;
    bool accelerated_;
};

double energy(const EnergyContext& ctx, const Vector& x, const Vector& z, double t);

}  // namespace samd
