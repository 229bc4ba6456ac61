#include "samd/energy.hpp"

#include "samd/errors.hpp"

namespace samd {

EnergyContext::EnergyContext(MirrorMap map, Objective objective, MinimizerCertificate certificate,
                             RateBundle rates, bool accelerated)
    : map_(std::move(map)),
      objective_(std::move(objective)),
      certificate_(std::move(certificate)),
      rates_(std::move(rates)),
      accelerated_(accelerated) {
    if (!certificate_.interior()) {
        throw BoundaryMinimizer("energy needs an interior minimizer with a dual anchor z*");
    }
    const double mismatch = (map_.grad_psi_star(*certificate_.z_star) - certificate_.x_star)
                                .cwiseAbs()
                                .maxCoeff();
    if (mismatch > 1e-8) {
        throw Error("dual anchor does not map to x*: mismatch " + std::to_string(mismatch));
    }
}

double energy(const EnergyContext& ctx, const Vector& x, const Vector& z, double t) {
    if (!(t > 0.0)) {
        throw NonPositiveTime("energy evaluated at non-positive time");
    }
    const double s = ctx.rates().s(t);
    double value = s * ctx.map().bregman_div_star(z / s, ctx.z_star());
    if (ctx.accelerated()) {
        value += ctx.rates().r(t) * (ctx.objective().value(x) - ctx.f_star());
    }
    return value;
}

}  // namespace samd
