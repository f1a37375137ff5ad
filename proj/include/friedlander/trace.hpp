#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "friedlander/airy.hpp"
#include "friedlander/geodesics.hpp"

namespace friedlander::trace {

enum class Mollifier { gaussian_freq, sharp_energy };
enum class Sector { all = 0, gamma1 = 1, gamma2 = 2, gamma3 = 3 };

/// Smooth partition of unity chi_1 + chi_2 + chi_3 = 1 subordinate to the
/// overlapping cones Gamma_1 = {xi < kappa1 eta}, Gamma_2 = {kappa1/2 eta < xi
/// < 2 kappa2 eta}, Gamma_3 = {xi > kappa2 eta}, plus the radial cutoff psi.
struct ConePartition {
    double kappa1 = 0.5;
    double kappa2 = 2.0;
    double transition_width = 1.0;  // fraction of each overlap used for the ramp

    double chi(int j, double xi, double eta) const;
    double psi(double x) const;  // 1 for x >= 1, 0 for x <= 1/2
};

struct TraceRequest {
    Eigen::ArrayXd t_grid;           // uniformly spaced except for tiny grids
    double freq_cutoff = 50.0;       // Lambda
    Mollifier mollifier = Mollifier::gaussian_freq;
    Sector sector = Sector::all;
    ConePartition cone;
    double radius_factor = 4.0;      // lattice truncation radius / Lambda (gaussian window)
};

struct TraceResult {
    Eigen::ArrayXcd values;          // includes the +-n symmetry factor 2
    std::int64_t lattice_count = 0;  // points visited with nonzero weight
    double cutoff_used = 0;          // lattice truncation radius in sqrt(lambda)
};

/// Alternative dispersion for control experiments.
enum class Phase { friedlander, flat };

/// Z(t) = 2 sum_{m,n>=1} w(sqrt(lambda)/Lambda) psi(m) psi(n) chi_sector(m,n)
/// e^{it sqrt(lambda(m,n))}, streamed over the lattice in a fixed deterministic
/// order with compensated accumulation.
TraceResult windowed_trace(const TraceRequest& req, const airy::ZeroTable& zeros,
                           Phase phase = Phase::friedlander);

/// I_j, j in {1,2,3}.
TraceResult sector_trace(int j, TraceRequest req, const airy::ZeroTable& zeros);

// ---- Poisson summation verifier ------------------------------------------

/// Lattice test function with its Fourier transform under the convention
/// ghat(p,q) = integral g(x,y) e^{-2 pi i (p x + q y)} dx dy (any imaginary
/// part must cancel over the symmetric lattice; metric summand is the real part).
struct PoissonTestFunction {
    std::string name;
    std::function<double(double, double)> g;
    std::function<double(double, double)> g_hat;
    double radius = 8.0;  // truncation; |g| must have decayed below 1e-16 there
};

PoissonTestFunction gaussian_self_dual();
PoissonTestFunction shifted_gaussian(double a);
PoissonTestFunction anisotropic_gaussian();

struct PoissonCheck {
    double lhs = 0;  // sum of g over Z^2
    double rhs = 0;  // sum of ghat over Z^2
    double gap = 0;
};

/// Direct double-sum comparison; throws std::domain_error on slow decay.
PoissonCheck poisson_check(const PoissonTestFunction& fn);

// ---- peaks and the one-sided smoothness diagnostic ------------------------

struct Peak {
    double t = 0;
    double height = 0;
};

/// Three-point local maxima of |Z| above floor_factor times the median.
std::vector<Peak> detect_peaks(const Eigen::ArrayXd& t_grid, const Eigen::ArrayXd& abs_values,
                               double floor_factor = 5.0);

struct PeakMatch {
    double t_peak = 0;
    double height = 0;
    int k = 0, ell = 0;   // 0,0 when unmatched
    double offset = 0;    // t_peak - L_{k,ell}
};

std::vector<PeakMatch> match_peaks(const std::vector<Peak>& peaks,
                                   const geodesics::LengthSpectrumTable& table, double tol);

struct AsymmetryRow {
    double cutoff = 0;
    double left_metric = 0;   // max |second difference|/h^2 of Re Z on [2 pi l - d, 2 pi l - d/8]
    double right_metric = 0;  // same on [2 pi l + d/8, 2 pi l + d]
};

/// One-sided smoothness proxy at t = 2 pi ell: second-difference growth on the
/// left (accumulating lengths) versus the right (inside the verified gap).
/// Sampling step is 1/(4 Lambda); delta must stay below the verified gap.
std::vector<AsymmetryRow> smoothness_asymmetry(int ell, double delta,
                                               const std::vector<double>& cutoffs,
                                               const airy::ZeroTable& zeros,
                                               Phase phase = Phase::friedlander);

}  // namespace friedlander::trace
