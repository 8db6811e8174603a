#ifndef FRANSON_TEST_ORACLES_HPP
#define FRANSON_TEST_ORACLES_HPP

// Reference values computed independently of the library: long double
// arithmetic and closed forms in place of the engine's summation loops.

#include <cmath>
#include <cstddef>

namespace oracle
{

inline constexpr long double c = 299792458.0L;
inline constexpr long double pi = 3.141592653589793238462643383279502884L;

inline long double ideal(long double f0, long double dl)
{
    return 0.5L * (1.0L + std::cos(2.0L * pi * f0 * dl / c));
}

// Mean of 1/2(1 + cos(A + B k)) over k = -h..h, summed in closed form
// (Dirichlet kernel). A is the f0 fringe argument, B the detuning phase per
// grid step.
inline long double equal_grid_average(long double a, long double b, std::size_t n)
{
    const long double h = 0.5L * b;
    const long double dirichlet =
        std::abs(std::sin(h)) < 1e-300L ? 1.0L : std::sin(n * h) / (n * std::sin(h));
    return 0.5L * (1.0L + std::cos(a) * dirichlet);
}

// Equal-weight n-point grid over [-df, df] for the worst-case (X = dL1 + dL2)
// or symmetric (X = dL1 - dL2) kernel.
inline long double grid_g2(long double f0, long double df, long double dl1, long double dl2, bool worst_case,
                           std::size_t n)
{
    const long double x = worst_case ? dl1 + dl2 : dl1 - dl2;
    const long double a = pi / c * f0 * (dl1 + dl2);
    if (n == 1) return 0.5L * (1.0L + std::cos(a));
    const long double step = df / ((n - 1) / 2);
    return equal_grid_average(a, 2.0L * pi / c * step * x, n);
}

// Fringe amplitude (half peak-to-peak) of the same grid average.
inline long double grid_amplitude(long double df, long double x, std::size_t n)
{
    if (n == 1) return 0.5L;
    const long double b = 2.0L * pi / c * (df / ((n - 1) / 2)) * x;
    const long double h = 0.5L * b;
    return 0.5L * std::abs(std::sin(n * h) / (n * std::sin(h)));
}

// Continuous-density amplitude: 1/2 |sinc(2 pi df x / c)|.
inline long double uniform_amplitude(long double df, long double x)
{
    const long double u = 2.0L * pi * df * x / c;
    return 0.5L * std::abs(std::sin(u) / u);
}

} // namespace oracle

#endif
