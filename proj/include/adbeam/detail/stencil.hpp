#pragma once

#include <cstddef>

namespace adbeam::detail {

// Undivided second differences s_i = u_{i-1} - 2u_i + u_{i+1}, with s = 0 at
// both ends (the discrete u_xx = 0 closure).
inline void undivided_second_difference(const double* u, double* s, std::size_t n) noexcept
{
    s[0] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) s[i] = (u[i - 1] - 2.0 * u[i]) + u[i + 1];
    s[n - 1] = 0.0;
}

// Undivided D4 written as the second difference of `s`. The end rows use the
// mirrored ghost s_{-1} = s_1 that the u_xxx = 0 closure produces. Building
// D4 from D2 keeps constant vectors in the kernel bit-exactly.
inline double undivided_fourth_difference(const double* s, std::size_t i, std::size_t n) noexcept
{
    if (i == 0) return 2.0 * s[1];
    if (i + 1 == n) return 2.0 * s[n - 2];
    return (s[i - 1] - 2.0 * s[i]) + s[i + 1];
}

} // namespace adbeam::detail
