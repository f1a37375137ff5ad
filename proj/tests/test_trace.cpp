#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "friedlander/spectrum.hpp"
#include "friedlander/trace.hpp"

using namespace friedlander;

namespace {
constexpr double kPi = 3.14159265358979323846;

airy::ZeroTable& shared_table() {
    static airy::ZeroTable table(1000);
    return table;
}

Eigen::ArrayXd uniform_grid(double lo, double hi, double lambda_max) {
    double h = 0.9 * kPi / (4.0 * lambda_max);
    auto n = static_cast<Eigen::Index>(std::ceil((hi - lo) / h)) + 1;
    return Eigen::ArrayXd::LinSpaced(n, lo, lo + h * static_cast<double>(n - 1));
}
}  // namespace

TEST_CASE("partition of unity: chi_1 + chi_2 + chi_3 = 1 outside radius 1/2") {
    trace::ConePartition cone;
    for (double eta = 0.5; eta < 300.0; eta *= 1.7) {
        for (double rho : {0.01, 0.26, 0.5, 1.0, 2.5, 4.1, 40.0}) {
            double xi = rho * eta;
            double sum = cone.chi(1, xi, eta) + cone.chi(2, xi, eta) + cone.chi(3, xi, eta);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
            // supports subordinate to the cones of the decomposition
            if (rho >= cone.kappa1) CHECK(cone.chi(1, xi, eta) == 0.0);
            if (rho <= 0.5 * cone.kappa1 || rho >= 2.0 * cone.kappa2)
                CHECK(cone.chi(2, xi, eta) == 0.0);
            if (rho <= cone.kappa2) CHECK(cone.chi(3, xi, eta) == 0.0);
        }
    }
    CHECK(cone.psi(1.0) == 1.0);
    CHECK(cone.psi(17.0) == 1.0);
    CHECK(cone.psi(0.5) == 0.0);
    CHECK(cone.psi(0.75) > 0.0);
    CHECK(cone.psi(0.75) < 1.0);
}

TEST_CASE("sharp window at t = 0 counts the lattice") {
    auto& zeros = shared_table();
    trace::TraceRequest req;
    req.t_grid = Eigen::ArrayXd::Constant(1, 0.0);
    req.freq_cutoff = 10.0;  // sqrt(lambda) <= 10, i.e. lambda <= 100
    req.mollifier = trace::Mollifier::sharp_energy;
    auto z = trace::windowed_trace(req, zeros);

    airy::ZeroTable scratch(4);
    auto pts = spectrum::enumerate_below(100.0, scratch);
    CHECK(z.lattice_count == static_cast<std::int64_t>(pts.size() / 2));
    CHECK(z.values[0].real() == doctest::Approx(2.0 * double(z.lattice_count)).epsilon(1e-14));
    CHECK(z.values[0].imag() == 0.0);
}

TEST_CASE("single-frequency lattice gives constant modulus") {
    auto& zeros = shared_table();
    double r11 = spectrum::eigenvalue(1, 1, zeros).sqrt_lambda;
    trace::TraceRequest req;
    req.freq_cutoff = r11 + 0.01;
    req.mollifier = trace::Mollifier::sharp_energy;
    req.t_grid = uniform_grid(0.0, 3.0, req.freq_cutoff);
    auto z = trace::windowed_trace(req, zeros);
    CHECK(z.lattice_count == 1);
    for (Eigen::Index i = 0; i < z.values.size(); ++i) {
        CHECK(std::abs(z.values[i]) == doctest::Approx(2.0).epsilon(1e-13));
        // phase advances with the single frequency sqrt(lambda(1,1))
        std::complex<double> expected =
            2.0 * std::exp(std::complex<double>(0.0, req.t_grid[i] * r11));
        CHECK(std::abs(z.values[i] - expected) < 1e-10);
    }
}

TEST_CASE("sector traces reassemble the full trace pointwise") {
    auto& zeros = shared_table();
    trace::TraceRequest req;
    req.freq_cutoff = 20.0;
    req.t_grid = uniform_grid(1.0, 4.0, req.freq_cutoff);
    auto full = trace::windowed_trace(req, zeros);
    auto i1 = trace::sector_trace(1, req, zeros);
    auto i2 = trace::sector_trace(2, req, zeros);
    auto i3 = trace::sector_trace(3, req, zeros);
    for (Eigen::Index i = 0; i < full.values.size(); ++i) {
        std::complex<double> sum = i1.values[i] + i2.values[i] + i3.values[i];
        INFO("t = ", req.t_grid[i], " |Z| = ", std::abs(full.values[i]));
        CHECK(std::abs(sum - full.values[i]) <= 1e-10 * std::abs(full.values[i]));
    }
}

TEST_CASE("time reversal: Z(-t) is the exact conjugate") {
    auto& zeros = shared_table();
    trace::TraceRequest req;
    req.freq_cutoff = 15.0;
    req.t_grid = uniform_grid(0.5, 2.0, req.freq_cutoff);
    auto fwd = trace::windowed_trace(req, zeros);

    trace::TraceRequest neg = req;
    neg.t_grid = -req.t_grid;  // same order, negated: rotations are conjugate
    auto bwd = trace::windowed_trace(neg, zeros);
    for (Eigen::Index i = 0; i < fwd.values.size(); ++i) {
        CHECK(bwd.values[i].real() == fwd.values[i].real());
        CHECK(bwd.values[i].imag() == -fwd.values[i].imag());
    }
}

TEST_CASE("doubling the truncation radius moves Z by less than the dropped weight") {
    auto& zeros = shared_table();
    trace::TraceRequest req;
    req.freq_cutoff = 15.0;
    req.t_grid = uniform_grid(2.0, 2.5, req.freq_cutoff);
    req.radius_factor = 3.0;
    auto z3 = trace::windowed_trace(req, zeros);
    req.radius_factor = 6.0;
    auto z6 = trace::windowed_trace(req, zeros);

    // the weight mass of the annulus is the t = 0 value difference
    trace::TraceRequest at0 = req;
    at0.t_grid = Eigen::ArrayXd::Constant(1, 0.0);
    at0.radius_factor = 3.0;
    double mass3 = trace::windowed_trace(at0, zeros).values[0].real();
    at0.radius_factor = 6.0;
    double mass6 = trace::windowed_trace(at0, zeros).values[0].real();
    double bound = mass6 - mass3;
    CHECK(bound > 0.0);
    for (Eigen::Index i = 0; i < z3.values.size(); ++i)
        CHECK(std::abs(z6.values[i] - z3.values[i]) <= bound * (1.0 + 1e-12));
}

TEST_CASE("trace peaks sit on the length spectrum") {
    auto& zeros = shared_table();
    trace::TraceRequest req;
    req.freq_cutoff = 40.0;
    req.t_grid = uniform_grid(5.1, 6.05, req.freq_cutoff);
    auto z = trace::windowed_trace(req, zeros);
    // at this modest cutoff the mollified humps are broad, so the median of the
    // window is already signal; a floor of 2x suffices here
    auto peaks = trace::detect_peaks(req.t_grid, z.values.abs(), 2.0);
    REQUIRE(!peaks.empty());

    auto table = geodesics::length_spectrum(200, 3);
    double tol = 2.0 * kPi / req.freq_cutoff;
    auto matches = trace::match_peaks(peaks, table, tol);
    bool found_11 = false;
    for (const auto& m : matches) {
        INFO("peak at t = ", m.t_peak);
        CHECK(m.k != 0);  // every detected peak matches some closed geodesic
        if (m.k == 1 && m.ell == 1) found_11 = true;
    }
    CHECK(found_11);
}

TEST_CASE("I_2 is smooth where only Gamma_1 lengths live, singular at its own") {
    auto& zeros = shared_table();
    // on [5.1, 6.26] the only lengths are the L_{k,1} family (Gamma_1 cone):
    // doubling the cutoff grows the full trace like a singularity, I_2 not
    double i2_max[2], z_max[2];
    int idx = 0;
    for (double lam : {40.0, 80.0}) {
        trace::TraceRequest req;
        req.freq_cutoff = lam;
        req.t_grid = uniform_grid(5.1, 6.26, lam);
        i2_max[idx] = trace::sector_trace(2, req, zeros).values.abs().maxCoeff();
        z_max[idx] = trace::windowed_trace(req, zeros).values.abs().maxCoeff();
        ++idx;
    }
    CHECK(i2_max[1] < 1.4 * i2_max[0]);
    CHECK(z_max[1] > 1.6 * z_max[0]);

    // and I_2 does peak near L_{1,2} = 9.4297, which lies in its cone
    trace::TraceRequest req2;
    req2.freq_cutoff = 40.0;
    req2.t_grid = uniform_grid(9.0, 9.9, req2.freq_cutoff);
    auto i2b = trace::sector_trace(2, req2, zeros);
    auto peaks = trace::detect_peaks(req2.t_grid, i2b.values.abs(), 2.0);
    REQUIRE(!peaks.empty());
    bool near = false;
    for (const auto& p : peaks)
        if (std::abs(p.t - 9.429741488766719) < 2.0 * kPi / req2.freq_cutoff) near = true;
    CHECK(near);
}

TEST_CASE("I_3 stays uniformly small as the cutoff doubles") {
    auto& zeros = shared_table();
    double worst = 0;
    double prev = 0;
    for (double lam : {15.0, 30.0}) {
        trace::TraceRequest req;
        req.freq_cutoff = lam;
        req.t_grid = uniform_grid(0.6, 6.0, lam);
        auto i3 = trace::sector_trace(3, req, zeros);
        worst = i3.values.abs().maxCoeff();
        if (prev > 0) CHECK(worst < 3.0 * prev);  // no singular growth anywhere on the window
        prev = worst;
    }
    CHECK(worst > 0.0);
}

TEST_CASE("poisson: self-dual, shifted and anisotropic Gaussians") {
    auto a = trace::poisson_check(trace::gaussian_self_dual());
    CHECK(a.gap < 1e-12);
    CHECK(a.lhs == doctest::Approx(a.rhs).epsilon(1e-14));

    auto b = trace::poisson_check(trace::shifted_gaussian(0.37));
    CHECK(b.gap < 1e-12);

    auto c = trace::poisson_check(trace::anisotropic_gaussian());
    CHECK(c.gap < 1e-12);
}

TEST_CASE("poisson rejects slowly decaying input") {
    trace::PoissonTestFunction slow;
    slow.name = "cauchy";
    slow.g = [](double x, double y) { return 1.0 / (1.0 + x * x + y * y); };
    slow.g_hat = slow.g;
    slow.radius = 8.0;
    CHECK_THROWS_AS((void)trace::poisson_check(slow), std::domain_error);
}

TEST_CASE("asymmetry diagnostic: left metric grows with the cutoff, right stays put") {
    auto& zeros = shared_table();
    auto rows = trace::smoothness_asymmetry(1, 0.05, {25.0, 50.0}, zeros);
    REQUIRE(rows.size() == 2);
    double ratio0 = rows[0].left_metric / rows[0].right_metric;
    double ratio1 = rows[1].left_metric / rows[1].right_metric;
    CHECK(ratio1 > ratio0);
    CHECK(rows[1].left_metric > rows[0].left_metric);
}

TEST_CASE("flat-torus control shows no one-sided asymmetry at 2 pi") {
    auto& zeros = shared_table();
    auto rows =
        trace::smoothness_asymmetry(1, 0.05, {25.0, 50.0}, zeros, trace::Phase::flat);
    for (const auto& r : rows) {
        double ratio = r.left_metric / r.right_metric;
        INFO("cutoff = ", r.cutoff, " ratio = ", ratio);
        CHECK(ratio < 3.0);
        CHECK(ratio > 1.0 / 3.0);
    }
}

TEST_CASE("request validation") {
    auto& zeros = shared_table();
    trace::TraceRequest req;
    req.freq_cutoff = 20.0;
    req.t_grid = Eigen::ArrayXd::LinSpaced(10, 0.0, 9.0);  // spacing 1 >> pi/80
    CHECK_THROWS_AS((void)trace::windowed_trace(req, zeros), std::domain_error);
    req.t_grid = uniform_grid(0.0, 0.3, 20.0);
    req.freq_cutoff = -1.0;
    CHECK_THROWS_AS((void)trace::windowed_trace(req, zeros), std::domain_error);
    CHECK_THROWS_AS((void)trace::sector_trace(4, req, zeros), std::domain_error);
    CHECK_THROWS_AS((void)trace::smoothness_asymmetry(1, 5.0, {25.0}, zeros), std::domain_error);
    CHECK_THROWS_AS((void)trace::smoothness_asymmetry(1, 0.05, {50.0, 25.0}, zeros),
                    std::domain_error);
}
