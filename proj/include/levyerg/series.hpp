#pragma once

namespace levyerg {

/// Generalized binomial coefficient C_p^k = p (p-1) ... (p-k+1) / k!, real p.
inline double generalized_binomial(double p, int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c *= (p - i) / (i + 1);
    return c;
}

}  // namespace levyerg
