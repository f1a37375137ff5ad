#pragma once

#include <stdexcept>
#include <vector>

namespace friedlander::geodesics {

/// Point of the billiard phase space; on the unit level xi^2 + (1+x) eta^2 = 1.
struct PhasePoint {
    double x = 0;
    double y = 0;
    double xi = 0;
    double eta = 0;
};

double energy(const PhasePoint& p);

/// eta = 0 launches escape to x = infinity and never return to the boundary.
struct NoReflectionError : std::domain_error {
    using std::domain_error::domain_error;
};

/// One exact arc between boundary contacts: x(t) = xi0 t - eta0^2 t^2/4.
struct FreeFlight {
    PhasePoint endpoint;    // back on x = 0 with velocity (-xi0, eta0)
    double T = 0;           // flight time 4 xi0 / eta0^2
    double delta_y = 0;     // 4 xi0/eta0 + (8/3) xi0^3/eta0^3
    double caustic_height = 0;  // xi0^2 / eta0^2
};

FreeFlight free_flight(const PhasePoint& start);

struct FlowSample {
    double t = 0;
    PhasePoint p;
};

struct FlowResult {
    std::vector<FlowSample> samples;
    int reflections = 0;
    double max_energy_drift = 0;
};

/// Adaptive embedded Runge-Kutta integration of the Hamiltonian flow with the
/// reflection law at x = 0 (xi flips, eta continuous).  Verification oracle;
/// production paths use the exact arcs.
FlowResult integrate_flow(PhasePoint start, double t_end, bool reflect);

/// Closed geodesic with k reflections and winding number ell.
struct ClosedGeodesic {
    int k = 0;
    int ell = 0;
    double eta0 = 0;
    double xi0 = 0;
    double length = 0;
    double residual1 = 0;  // relative defect in L eta0^2/sqrt(1-eta0^2) = 4k
    double residual2 = 0;  // relative defect in L (eta0/3 + 2/(3 eta0)) = 2 pi ell
};

/// Solves the monotone ratio equation for the launch direction (bisection to
/// ulp resolution in xi0) and evaluates L = 6 pi ell eta0/(eta0^2 + 2).
ClosedGeodesic closed_geodesic(int k, int ell);

struct LengthSpectrumTable {
    int k_max = 0;
    int ell_max = 0;
    std::vector<ClosedGeodesic> entries;  // sorted by length
};

LengthSpectrumTable length_spectrum(int k_max, int ell_max);

struct TableExhaustedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// inf{L in table : L > 2 pi ell} - 2 pi ell; throws TableExhaustedError when
/// the table holds nothing above 2 pi ell.
double gap_below(int ell, const LengthSpectrumTable& table);

}  // namespace friedlander::geodesics
