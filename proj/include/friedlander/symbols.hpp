#pragma once

#include <functional>
#include <vector>

namespace friedlander::symbols {

using Fn2 = std::function<double(double, double)>;

enum class Cone { gamma1, gamma2, gamma3 };

/// The Friedlander dispersion symbol F(xi, eta) = (eta^2 + eta^{4/3} tau(xi))^{1/2},
/// built on the exact theta-inversion tau (no interpolation of the zero table).
double phase_F(double xi, double eta);

/// Principal part sqrt(eta^2 + (3 pi xi/2)^{2/3} eta^{4/3}).
double phase_F0(double xi, double eta);

/// G = F - eta.
double phase_G(double xi, double eta);

/// Central difference d^j/dxi^j d^k/deta^k with Richardson extrapolation and
/// steps proportional to (1+xi), (1+eta).  Supports j, k <= 2 (j + k <= 4).
double finite_diff_derivative(const Fn2& fn, int j, int k, double xi, double eta,
                              double rel_step = 1e-3);

struct SymbolEstimate {
    double alpha = 0, beta = 0;
    int order_j = 0, order_k = 0;
    double fitted_constant = 0;
    double max_violation_ratio = 0;   // held-out max of |D|/weight divided by the fit
    Cone cone = Cone::gamma1;
    bool pass = false;
    std::vector<double> shell_ratios;     // one per held-out dyadic shell
    std::vector<double> shell_constants;  // extremal |D|/weight per shell, all shells
};

struct GridSpec {
    int shell_lo_exp = 4;   // fitting shells 2^4 .. 2^fit_hi
    int fit_hi_exp = 8;
    int shell_hi_exp = 12;  // held-out shells 2^(fit_hi+1) .. 2^shell_hi
    int rays = 8;           // directions per shell
    double margin = 0.15;   // fractional shrink of the cone at its edges
    double kappa1 = 0.5;
    double kappa2 = 2.0;
    double tolerance = 1.1;
};

/// Product-type bound |d^j d^k a| <= C (1+xi)^{alpha-j} (1+eta)^{beta-k}:
/// constants fitted on the low shells, validated on held-out shells.
std::vector<SymbolEstimate> check_sigma_bound(const Fn2& fn, double alpha, double beta, int j_max,
                                              int k_max, Cone cone, const GridSpec& grid = {});

/// Isotropic classical bound |d^alpha a| <= C (1+|omega|)^{m-|alpha|}, |alpha| <= 2.
SymbolEstimate check_classical_symbol(const Fn2& fn, double m_order, Cone cone,
                                      const GridSpec& grid = {});

/// Elliptic lower bound a >= c (1+xi)^alpha (1+eta)^beta with c > 0.
SymbolEstimate check_elliptic_lower(const Fn2& fn, double alpha, double beta, Cone cone,
                                    const GridSpec& grid = {});

}  // namespace friedlander::symbols
