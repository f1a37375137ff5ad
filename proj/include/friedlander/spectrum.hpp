#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "friedlander/airy.hpp"

namespace friedlander::spectrum {

/// Lattice point (m,n) with its eigenvalue lambda = n^2 + |n|^{4/3} t_m.
struct SpectralPoint {
    std::int64_t m = 0;
    std::int64_t n = 0;
    double lambda = 0;
    double sqrt_lambda = 0;
};

struct BohrSommerfeldPoint {
    std::int64_t m = 0;
    std::int64_t n = 0;
    double Lambda = 0;  // n^2 + (3 pi/2)^{2/3} m^{2/3} |n|^{4/3}
};

/// Invariant-torus data: energy H, angular momentum J, actions I1, I2.
struct ActionPoint {
    double H = 0;
    double J = 0;
    double I1 = 0;  // (4/3) (H^2 - J^2)^{3/2} / J^2
    double I2 = 0;  // 2 pi J
};

SpectralPoint eigenvalue(std::int64_t m, std::int64_t n, const airy::ZeroTable& zeros);
BohrSommerfeldPoint bohr_sommerfeld(std::int64_t m, std::int64_t n);

/// Forward action map; throws std::domain_error unless 0 < |J| < H.
ActionPoint actions_from_energy(double H, double J);

/// Inverse branch H^2(I1, I2) = I2^2/(4 pi^2) + (3 I1 I2^2 / (16 pi^2))^{2/3}.
double energy_sq_from_actions(double I1, double I2);

/// phi_{m,n}(x,y) = Ai(|n|^{2/3} x - t_m) e^{i n y},  x >= 0.
std::complex<double> eigenfunction_eval(std::int64_t m, std::int64_t n, double x, double y,
                                        const airy::ZeroTable& zeros);

struct WkbResidual {
    double sup_residual = 0;  // sup over the grid, mod 2pi, after the optimal shift
    double shift = 0;         // the optimal constant shift, in (-pi, pi]
};

/// Compares the oscillation phase (2/3)(t_m - |n|^{2/3}x)^{3/2} of phi_{m,n}
/// with the torus generating-function phase (2/3)((3 pi m/2)^{2/3} - |n|^{2/3}x)^{3/2}.
/// Grid points closer to the caustic than caustic_margin * t_m are rejected.
WkbResidual wkb_phase_residual(std::int64_t m, std::int64_t n, const std::vector<double>& x_grid,
                               const airy::ZeroTable& zeros, double caustic_margin = 0.1);

/// All (m,n), n != 0, with lambda(m,n) <= E, sorted by (lambda, m, n).
/// Extends the zero table in chunks as needed.
std::vector<SpectralPoint> enumerate_below(double E, airy::ZeroTable& zeros);

}  // namespace friedlander::spectrum
