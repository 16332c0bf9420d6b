#include "catch_amalgamated.hpp"
#include "lgce/correlation.hpp"

using namespace lgce;
using Catch::Approx;

TEST_CASE("bound right-hand side", "[correlation]") {
    const double x = std::expm1(0.8);
    // r = 0: s = 1
    CHECK(bound_rhs(0.0, 2, 10, 0.2, 1.0, 3.0, 0.5) == Approx(0.04 * (1 + 0.5 + 3.0) + 0.05));
    // r = 1: s = e^{4 beta J} - 1
    CHECK(bound_rhs(1.0, 2, 10, 0.2, 1.0, 3.0, 0.5) == Approx(0.04 * (x + x / 2 + 3 * std::exp(-1.0)) + 0.05));
    CHECK(bound_rhs(3.0, 2, 10, 0.2, 1.0, 3.0, 0.5) == Approx(0.04 * 3 * std::exp(-3.0) + 0.05));
    LatticeSpec lat(1, 10, Boundary::periodic());
    CHECK(bound_rhs(lat, 0, 9, 2, 0.2, 1.0, 3.0, 0.5) == Approx(bound_rhs(1.0, 2, 10, 0.2, 1.0, 3.0, 0.5)));
}

TEST_CASE("calibrated constants are minimal and feasible", "[correlation]") {
    std::vector<CorrelationCase> cs = {
        {LatticeSpec(1, 10, Boundary::periodic()), PotentialSpec::standard(1.0), 0.2, 2},
        {LatticeSpec(1, 12, Boundary::periodic()), PotentialSpec::standard(1.0), 0.1, 3},
    };
    auto cal = calibrate_constants(cs);
    REQUIRE(cal.feasible);
    CHECK(cal.in_regime.size() == 2);
    for (const auto& k : cs)
        for (const auto& row : correlation_rows(k, cal.C_min, cal.C1_min)) CHECK(row.feasible);
    // any grid point with smaller C + C1 must violate somewhere
    auto violates = [&](double C, double C1) {
        for (const auto& k : cs) {
            auto T = exact_correlations(k.lattice, k.pot, k.beta, k.N);
            for (long a = 0; a < k.lattice.size(); ++a)
                for (long b = 0; b < k.lattice.size(); ++b)
                    if (std::abs(T.u2(a, b)) > bound_rhs(k.lattice, a, b, k.N, k.beta, 1.0, C, C1)) return true;
        }
        return false;
    };
    const double total = cal.C_min + cal.C1_min;
    for (double C = 0; C < total - 1e-6 && C <= 100; C += 0.25) {
        const double C1 = total - C - 1e-6;
        CHECK(violates(C, C1));
    }
}

TEST_CASE("two-particle ring correlations are flat beyond range", "[correlation]") {
    LatticeSpec lat(1, 12, Boundary::periodic());
    auto f = decay_fit(lat, PotentialSpec::standard(1.0), 0.2, 2);
    REQUIRE(f.u2.size() == 7);
    for (int r = 3; r <= 6; ++r) CHECK(f.u2[r] == Approx(f.u2[2]).epsilon(1e-13));
    CHECK(f.excess_rate == inf);
    CHECK(std::abs(f.rate) < 1e-9);
    CHECK_THROWS_AS(decay_fit(LatticeSpec(1, 8, Boundary::periodic()), PotentialSpec::standard(1.0), 0.2, 2),
                    guard_error);
}

TEST_CASE("least squares line", "[correlation]") {
    auto [m, c] = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
    CHECK(m == Approx(2.0));
    CHECK(c == Approx(1.0));
}
