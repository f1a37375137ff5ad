#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "friedlander/spectrum.hpp"

using namespace friedlander;

namespace {
constexpr double kPi = 3.14159265358979323846;

airy::ZeroTable& shared_table() {
    static airy::ZeroTable table(600);
    return table;
}
}  // namespace

TEST_CASE("eigenvalue formula on reference points") {
    auto& zeros = shared_table();
    auto p11 = spectrum::eigenvalue(1, 1, zeros);
    CHECK(p11.lambda == doctest::Approx(3.338107410459767).epsilon(1e-14));
    CHECK(p11.sqrt_lambda == doctest::Approx(std::sqrt(3.338107410459767)).epsilon(1e-14));

    auto p23 = spectrum::eigenvalue(2, 3, zeros);
    CHECK(p23.lambda == doctest::Approx(26.68752998770890396).epsilon(1e-13));

    CHECK_THROWS_AS((void)spectrum::eigenvalue(1, 0, zeros), std::domain_error);
    CHECK_THROWS_AS((void)spectrum::eigenvalue(0, 1, zeros), std::domain_error);
    CHECK_THROWS_AS((void)spectrum::eigenvalue(100000, 1, zeros), std::out_of_range);
}

TEST_CASE("n -> -n symmetry is exact") {
    auto& zeros = shared_table();
    for (std::int64_t m : {1, 2, 7}) {
        for (std::int64_t n : {1, 2, 5, 11}) {
            CHECK(spectrum::eigenvalue(m, n, zeros).lambda ==
                  spectrum::eigenvalue(m, -n, zeros).lambda);
            CHECK(spectrum::bohr_sommerfeld(m, n).Lambda ==
                  spectrum::bohr_sommerfeld(m, -n).Lambda);
        }
    }
}

TEST_CASE("monotonicity in m and |n|") {
    auto& zeros = shared_table();
    for (std::int64_t m = 1; m < 40; ++m) {
        for (std::int64_t n = 1; n < 12; ++n) {
            CHECK(spectrum::eigenvalue(m + 1, n, zeros).lambda >
                  spectrum::eigenvalue(m, n, zeros).lambda);
            CHECK(spectrum::eigenvalue(m, n + 1, zeros).lambda >
                  spectrum::eigenvalue(m, n, zeros).lambda);
            CHECK(spectrum::bohr_sommerfeld(m + 1, n).Lambda > spectrum::bohr_sommerfeld(m, n).Lambda);
        }
    }
}

TEST_CASE("Bohr-Sommerfeld value and the (1,1) deviation") {
    auto& zeros = shared_table();
    auto b = spectrum::bohr_sommerfeld(1, 1);
    CHECK(b.Lambda == doctest::Approx(3.810783666401909).epsilon(1e-14));
    double dev = std::abs(spectrum::eigenvalue(1, 1, zeros).sqrt_lambda - std::sqrt(b.Lambda));
    CHECK(dev == doctest::Approx(0.1250740360852252).epsilon(1e-12));
}

TEST_CASE("sector deviation sup stays bounded (sqrt(lambda) = sqrt(Lambda) + O(1))") {
    auto& zeros = shared_table();
    auto sup_dev = [&](std::int64_t m_lo, std::int64_t m_hi) {
        double sup = 0;
        for (std::int64_t m = m_lo; m <= m_hi; ++m) {
            for (std::int64_t n = (m + 1) / 2; n <= 2 * m && n >= 1; ++n) {
                double d = std::abs(spectrum::eigenvalue(m, n, zeros).sqrt_lambda -
                                    std::sqrt(spectrum::bohr_sommerfeld(m, n).Lambda));
                sup = std::max(sup, d);
            }
        }
        return sup;
    };
    double low = sup_dev(10, 50);
    double all = sup_dev(10, 500);
    CHECK(all <= 2.0 * low);
    // sup over tails cannot grow: subset monotonicity at cutoffs 10/50/200
    CHECK(sup_dev(50, 500) <= all);
    CHECK(sup_dev(200, 500) <= sup_dev(50, 500));
}

TEST_CASE("action map: plug-in values and numerical loop integral") {
    auto a = spectrum::actions_from_energy(1.0, 1.0 / std::sqrt(2.0));
    CHECK(a.I1 == doctest::Approx((2.0 / 3.0) * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(a.I2 == doctest::Approx(2.0 * kPi / std::sqrt(2.0)).epsilon(1e-14));

    // oracle: I1 = integral of xi(t)^2 dt over one arc, xi(t) = xi0 - eta0^2 t/2,
    // by composite Simpson (exact for quadratics)
    double xi0 = std::sqrt(1.0 - 0.5), eta0 = 1.0 / std::sqrt(2.0);
    double T = 4.0 * xi0 / (eta0 * eta0);
    auto integrand = [&](double t) {
        double xi = xi0 - 0.5 * eta0 * eta0 * t;
        return xi * xi;
    };
    double h = T / 64.0, quad = 0.0;
    for (int i = 0; i < 64; ++i) {
        double t0 = i * h;
        quad += h / 6.0 * (integrand(t0) + 4.0 * integrand(t0 + 0.5 * h) + integrand(t0 + h));
    }
    CHECK(a.I1 == doctest::Approx(quad).epsilon(1e-13));
}

TEST_CASE("action map degenerate tori are rejected") {
    CHECK_THROWS_AS((void)spectrum::actions_from_energy(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS((void)spectrum::actions_from_energy(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)spectrum::actions_from_energy(1.0, 1.5), std::domain_error);
}

TEST_CASE("vanishing caustic gap as J -> H") {
    double prev = spectrum::actions_from_energy(1.0, 0.9).I1;
    for (double J : {0.99, 0.999, 0.9999}) {
        double I1 = spectrum::actions_from_energy(1.0, J).I1;
        CHECK(I1 < prev);
        prev = I1;
    }
    CHECK(prev < 1e-5);
}

TEST_CASE("action round trip over a random sample") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> uh(0.1, 50.0), uf(0.01, 0.99);
    for (int i = 0; i < 200; ++i) {
        double H = uh(rng);
        double J = H * uf(rng) * (i % 2 ? 1.0 : -1.0);
        auto a = spectrum::actions_from_energy(H, J);
        double H2 = spectrum::energy_sq_from_actions(a.I1, a.I2);
        CHECK(H2 == doctest::Approx(H * H).epsilon(1e-12));
    }
}

TEST_CASE("actions on the integer lattice reproduce the Bohr-Sommerfeld values") {
    for (std::int64_t m : {1, 2, 5, 30}) {
        for (std::int64_t n : {1, 3, 8}) {
            double H2 = spectrum::energy_sq_from_actions(2.0 * kPi * m, 2.0 * kPi * n);
            CHECK(H2 == doctest::Approx(spectrum::bohr_sommerfeld(m, n).Lambda).epsilon(1e-13));
        }
    }
}

TEST_CASE("eigenfunction: Dirichlet condition, caustic value, tail decay") {
    auto& zeros = shared_table();
    for (std::int64_t m : {1, 4}) {
        for (std::int64_t n : {2, -3}) {
            double an = std::abs(double(n));
            double tm = zeros.t(m);
            // x = 0: |phi| = |Ai(-t_m)| ~ 0
            CHECK(std::abs(spectrum::eigenfunction_eval(m, n, 0.0, 0.7, zeros)) < 1e-9);
            // caustic: |phi| = Ai(0)
            double xc = tm / std::pow(an, 2.0 / 3.0);
            CHECK(std::abs(spectrum::eigenfunction_eval(m, n, xc, -0.2, zeros)) ==
                  doctest::Approx(0.3550280538878172).epsilon(1e-12));
            // beyond the caustic: positive, monotone decay
            double prev = std::abs(spectrum::eigenfunction_eval(m, n, xc, 0.0, zeros));
            for (double x = xc * 1.05; x < xc * 3.0; x += 0.1 * xc) {
                double cur = std::abs(spectrum::eigenfunction_eval(m, n, x, 0.0, zeros));
                CHECK(cur < prev);
                CHECK(cur > 0.0);
                prev = cur;
            }
        }
    }
}

TEST_CASE("WKB phase residual: O(1) along the diagonal, explicit value at x = 0") {
    auto& zeros = shared_table();
    zeros.ensure(200);

    double last = 0;
    for (std::int64_t scale : {50, 100, 200}) {
        std::vector<double> grid;
        double xc = zeros.t(scale) / std::pow(double(scale), 2.0 / 3.0);
        for (int i = 0; i <= 50; ++i) grid.push_back(xc * 0.85 * i / 50.0);
        auto r = spectrum::wkb_phase_residual(scale, scale, grid, zeros);
        INFO("m = n = ", scale);
        CHECK(r.sup_residual < 1.0);  // bounded, independently of the scale
        last = r.sup_residual;
    }
    CHECK(last < 1.0);

    // single point x = 0: residual 0 after shifting; the shift is the phase gap
    auto r0 = spectrum::wkb_phase_residual(10, 10, {0.0}, zeros);
    double expected =
        (2.0 / 3.0) * (std::pow(zeros.t(10), 1.5) - 1.5 * kPi * 10.0);
    CHECK(r0.sup_residual == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r0.shift == doctest::Approx(expected).epsilon(1e-9));
    CHECK(std::abs(r0.shift) < kPi);

    // grids touching the caustic are rejected
    double xc = zeros.t(3) / std::pow(2.0, 2.0 / 3.0);
    CHECK_THROWS_AS((void)spectrum::wkb_phase_residual(3, 2, {0.99 * xc}, zeros),
                    std::domain_error);
}

TEST_CASE("enumerate_below: edge cases pinned by hand") {
    airy::ZeroTable zeros(4);
    CHECK(spectrum::enumerate_below(3.0, zeros).empty());

    auto two = spectrum::enumerate_below(3.5, zeros);
    REQUIRE(two.size() == 2);
    CHECK(two[0].m == 1);
    CHECK(two[0].n == -1);
    CHECK(two[1].n == 1);
    CHECK(two[0].lambda == doctest::Approx(3.338107410459767).epsilon(1e-14));

    auto sorted = spectrum::enumerate_below(400.0, zeros);
    for (std::size_t i = 1; i < sorted.size(); ++i) CHECK(sorted[i].lambda >= sorted[i - 1].lambda);
    for (const auto& p : sorted) CHECK(p.lambda <= 400.0);
}

TEST_CASE("enumerate_below: counting exponent is 3/2 (dominant |n|=1 columns)") {
    airy::ZeroTable zeros(4);
    auto c1 = static_cast<double>(spectrum::enumerate_below(500.0, zeros).size());
    auto c2 = static_cast<double>(spectrum::enumerate_below(2000.0, zeros).size());
    auto c3 = static_cast<double>(spectrum::enumerate_below(8000.0, zeros).size());
    CHECK(c2 / c1 == doctest::Approx(8.0).epsilon(0.12));
    CHECK(c3 / c2 == doctest::Approx(8.0).epsilon(0.08));
    // the table was extended on demand well past its initial four entries
    CHECK(zeros.size() > 1000);
}
