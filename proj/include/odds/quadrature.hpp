#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace odds {

/// Composite Simpson rule on [a,b] with an even number of subintervals.
/// Exact on polynomials of degree <= 3; error O((b-a)^5 / intervals^4) for C^4
/// integrands. Throws if the integrand is non-finite at a node, naming it.
template <class F>
double simpson(F&& f, double a, double b, int intervals) {
    if (intervals < 2 || intervals % 2 != 0)
        throw std::invalid_argument("simpson: interval count must be even and >= 2");
    const double h = (b - a) / intervals;
    auto eval = [&](int i) {
        const double x = (i == intervals) ? b : a + i * h;
        const double y = f(x);
        if (!std::isfinite(y))
            throw std::runtime_error("simpson: non-finite integrand at x = " + std::to_string(x));
        return y;
    };
    double sum = eval(0) + eval(intervals);
    for (int i = 1; i < intervals; i += 2) sum += 4.0 * eval(i);
    for (int i = 2; i < intervals; i += 2) sum += 2.0 * eval(i);
    return sum * h / 3.0;
}

}  // namespace odds
