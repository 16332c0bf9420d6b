#include "catch_amalgamated.hpp"
#include "lgce/bounds.hpp"

using namespace lgce;
using Catch::Approx;

namespace {

double scan_max(double u) {
    double best = 0;
    // log-spaced, relative step 1e-5
    for (double t = std::log(1e-8); t <= std::log(20.0); t += 1e-5) best = std::max(best, F_objective(u, std::exp(t)));
    return best;
}

}  // namespace

TEST_CASE("objective at u = 1", "[bounds]") {
    for (double a : {0.1, 0.5, 2.0}) {
        const double q = 2 - std::exp(-a);
        CHECK(F_objective(1.0, a) == Approx(std::log(q) / (std::exp(a) * q)));
    }
}

TEST_CASE("maximizer against a dense scan", "[bounds]") {
    for (double u : {1e-4, 0.01, 0.3, 1.0, 5.0, 1e3}) {
        auto m = maximize_F(u);
        CHECK(m.a_star > 0);
        CHECK(m.value == Approx(scan_max(u)).epsilon(1e-9));
        const double h = 1e-5 * std::max(1.0, m.a_star);
        CHECK(m.value >= F_objective(u, m.a_star + h));
        CHECK(m.value >= F_objective(u, std::max(1e-9, m.a_star - h)));
    }
    CHECK_THROWS(maximize_F(0.0));
}

TEST_CASE("radii at beta = 0", "[bounds]") {
    auto p = PotentialSpec::standard(1.0);
    const double F1 = maximize_F(1.0).value;
    for (int d : {1, 2, 3}) {
        CHECK(radius_canonical(d, p, 0.0) == Approx(F1).epsilon(1e-14));
        CHECK(radius_canonical_penrose(d, p, 0.0) == Approx(F1).epsilon(1e-14));
        CHECK(radius_virial(d, p, 0.0) == Approx(1.0 / (2 * std::exp(1.0))));
        CHECK(lattice_gas_threshold(d, p, 0.0) == -inf);
        CHECK(contour_threshold(d, p, 0.0).second == -inf);
    }
}

TEST_CASE("closed-form thresholds", "[bounds]") {
    auto p = PotentialSpec::standard(1.0);
    auto [h, M] = contour_threshold(1, p, 1.0);
    CHECK(h == Approx(-(3 + 3 * std::log(2.0)) / 2).epsilon(1e-14));
    CHECK(M == Approx(2 * h - 4).epsilon(1e-14));
    CHECK(contour_threshold(2, p, 2.0).first == Approx(contour_threshold(2, p, 1.0).first / 2));
    CHECK(lattice_gas_threshold(1, p, 1.0) == Approx(-(9 + std::log(1 + 2 * (1 - std::exp(-4.0))))).epsilon(1e-14));
    const double Cbar = 1 + 4 * (1 - std::exp(-2.0));
    CHECK(radius_virial(2, p, 0.5) == Approx(1 / (2 * std::exp(1 + 0.5 * 20) * Cbar)));
    CHECK(radius_canonical(2, p, 0.5) == Approx(maximize_F(std::exp(-8.0)).value / (std::exp(8.0) * Cbar)));
}

TEST_CASE("monotone trends on the beta grid", "[bounds]") {
    auto p = PotentialSpec::standard(1.0);
    auto grid = linear_grid(0.0, 1.0, 101);
    CHECK(grid.size() == 101);
    CHECK(grid[50] == Approx(0.5));
    double prevR = inf, prevM = -inf;
    for (double b : grid) {
        auto r = radius_report(1, p, b);
        CHECK(r.R_C > 0);
        CHECK(r.R_C_bar > 0);
        CHECK(r.R_V > r.R_C);
        CHECK(r.R_C < prevR);
        // M_LG = -B - (1 + log Cbar)/beta rises from -inf
        if (b > 0) CHECK(r.M_LG > prevM);
        prevR = r.R_C;
        prevM = r.M_LG;
    }
}

TEST_CASE("Penrose crossover in d = 1", "[bounds]") {
    auto p = PotentialSpec::standard(1.0);
    std::vector<double> diff;
    for (double b : linear_grid(0.01, 1.0, 100)) diff.push_back(radius_canonical(1, p, b) - radius_canonical_penrose(1, p, b));
    CHECK(diff.front() < 0);
    CHECK(diff.back() > 0);
    CHECK(sign_changes(diff) == 1);
}

TEST_CASE("sign change counting", "[bounds]") {
    CHECK(sign_changes({1, 2, -1, 0, -3, 4}) == 2);
    CHECK(sign_changes({0, 0, 1}) == 0);
    CHECK(sign_changes({}) == 0);
    CHECK_THROWS_AS(linear_grid(0, 1, 0), config_error);
}
