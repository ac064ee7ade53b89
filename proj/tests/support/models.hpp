#pragma once

#include "levyerg/levy_kernel.hpp"

namespace levyerg::testing {

inline KernelComponent stable(double alpha, double c = 1.0) {
    KernelComponent k;
    k.family = KernelFamily::StableLike;
    k.alpha = StateFunction::constant(alpha);
    k.c = StateFunction::constant(c);
    return k;
}

inline KernelComponent pareto(double alpha, double c = 1.0) {
    KernelComponent k = stable(alpha, c);
    k.family = KernelFamily::Pareto;
    return k;
}

inline KernelComponent tempered(double alpha, double theta, double c = 1.0, double zeta = 0.0) {
    KernelComponent k = stable(alpha, c);
    k.family = KernelFamily::Tempered;
    k.theta = theta;
    k.temper_zeta = zeta;
    return k;
}

inline LevyTypeModel model(Drift drift, std::vector<KernelComponent> comps) {
    LevyTypeModel m;
    m.drift = std::move(drift);
    auto [s, d] = KernelSpec::implied_indices(comps);
    m.kernel.components = std::move(comps);
    m.kernel.sigma = s;
    m.kernel.delta = d;
    return m;
}

inline LevyTypeModel stable_model(double alpha, Drift drift = Drift::power(0.0, 1.0), double c = 1.0) {
    return model(std::move(drift), {stable(alpha, c)});
}

}  // namespace levyerg::testing
