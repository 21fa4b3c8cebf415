#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sta::quad {

// Composite Simpson rule of f over [a, b] with n subintervals (n rounded up to even).
template <typename F>
auto simpson(F&& f, double a, double b, std::size_t n)
{
    if (n < 2)
        n = 2;
    if (n % 2 != 0)
        ++n;
    const double h = (b - a) / static_cast<double>(n);
    auto odd = f(a) * 0.0;
    auto even = odd;
    for (std::size_t k = 1; k < n; ++k) {
        const double x = a + h * static_cast<double>(k);
        if (k % 2 != 0)
            odd += f(x);
        else
            even += f(x);
    }
    return (h / 3.0) * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

// Running integral of samples on a uniform grid with spacing h, starting at 0.
// Pairs of intervals use Simpson's rule; an odd trailing interval uses the
// three-point formula h/12 (-f0 + 8 f1 + 5 f2) over its last two points.
template <typename T>
std::vector<T> cumulative_simpson(std::span<const T> f, double h)
{
    const std::size_t n = f.size();
    std::vector<T> out(n, T{});
    if (n < 2)
        return out;
    if (n == 2) {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    for (std::size_t k = 1; k < n; ++k) {
        if (k % 2 == 0) {
            out[k] = out[k - 2] + (h / 3.0) * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
        } else if (k == 1) {
            out[1] = (h / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2]);
        } else {
            out[k] = out[k - 1] + (h / 12.0) * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
        }
    }
    return out;
}

} // namespace sta::quad
