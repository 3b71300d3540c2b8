#include "shadowtouch/rng.hpp"

#include <algorithm>
#include <cmath>

namespace shadowtouch {

double Rng::probit(double p) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    static constexpr double p_low = 0.02425;

    p = std::clamp(p, 1.0e-300, 1.0 - 1.0e-16);
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

GaussianTable::GaussianTable(double sigma) : sigma_(sigma), table_(65536) {
    const double bound = 4.0 * sigma;
    for (int i = 0; i < 65536; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / 65536.0;
        double v = sigma * Rng::probit(p);
        v = std::clamp(v, -bound, bound);
        const int q = static_cast<int>(std::lround(v));
        table_[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(q);
        max_abs_ = std::max(max_abs_, std::abs(q));
    }
}

} // namespace shadowtouch
