#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace gembed {

using ScalarFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<std::vector<double>(std::span<const double>)>;

/// Max over coordinates of |central difference - analytic| / max(1, |analytic|).
inline double grad_check(const ScalarFn& f, const GradientFn& g,
                         std::span<const double> x, double eps = 1e-5) {
    std::vector<double> point(x.begin(), x.end());
    std::vector<double> analytic = g(point);
    double worst = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
        double saved = point[i];
        point[i] = saved + eps;
        double fp = f(point);
        point[i] = saved - eps;
        double fm = f(point);
        point[i] = saved;
        double numeric = (fp - fm) / (2.0 * eps);
        double err = std::fabs(numeric - analytic[i]) / std::max(1.0, std::fabs(analytic[i]));
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace gembed
