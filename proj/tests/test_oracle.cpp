#include "catch_amalgamated.hpp"
#include "lgce/oracle.hpp"

#include <bit>

using namespace lgce;
using Catch::Approx;

namespace {

// log Z(N) by summing lattice_gas_hamiltonian weights over all N-subsets
std::vector<double> naive_log_z(const LatticeSpec& lat, const PotentialSpec& pot, double beta) {
    const long V = lat.size();
    std::vector<double> z(V + 1, 0.0);
    for (uint32_t S = 0; S < (1u << V); ++S) {
        std::vector<Site> x;
        for (long i = 0; i < V; ++i)
            if (S >> i & 1) x.push_back(lat.coords(i));
        z[x.size()] += lattice_gas_hamiltonian(x, lat, pot).weight(beta);
    }
    for (auto& v : z) v = std::log(v);
    return z;
}

}  // namespace

TEST_CASE("enumeration matches naive subset sum", "[oracle]") {
    struct Case {
        LatticeSpec lat;
        PotentialSpec pot;
    };
    std::vector<Case> cases = {
        {LatticeSpec(1, 8, Boundary::periodic()), PotentialSpec::standard(1.0)},
        {LatticeSpec(1, 7, Boundary::zero()), PotentialSpec::standard(0.6)},
        {LatticeSpec(2, 3, Boundary::periodic()), PotentialSpec::standard(1.0)},
        {LatticeSpec(2, 2, Boundary::periodic()), PotentialSpec::standard(1.0)},
        {LatticeSpec(2, 3, Boundary::fixed({{-1, 0}, {1, 3}})), PotentialSpec::standard(1.0)},
        {LatticeSpec(1, 9, Boundary::periodic()), PotentialSpec::kac(2, 0.5)},
    };
    for (auto& c : cases) {
        auto T = exact_canonical_table(c.lat, c.pot, 0.3);
        auto ref = naive_log_z(c.lat, c.pot, 0.3);
        REQUIRE(T.log_z.size() == ref.size());
        for (size_t N = 0; N < ref.size(); ++N) CHECK(T.logz(N) == Approx(ref[N]).epsilon(1e-13));
    }
}

TEST_CASE("ideal gas at beta zero", "[oracle]") {
    auto T = exact_canonical_table(LatticeSpec(1, 12, Boundary::periodic()), PotentialSpec::standard(1.0), 0.0);
    for (long N = 0; N <= 12; ++N) CHECK(T.logz(N) == Approx(std::log(binomial(12, N))).margin(1e-13));
    CHECK(T.max_occupancy() == 12);
}

TEST_CASE("threaded histogram equals serial", "[oracle]") {
    LatticeSpec lat(2, 4, Boundary::periodic());
    auto p = PotentialSpec::standard(1.0);
    CHECK(bond_histogram(lat, p, 1) == bond_histogram(lat, p, 3));
    CHECK(bond_histogram(lat, p, 1) == bond_histogram(lat, p, 8));
    CHECK_THROWS_AS(bond_histogram(LatticeSpec(1, 25), p), guard_error);
}

TEST_CASE("transfer matrix matches enumeration", "[oracle]") {
    for (auto b : {Boundary::periodic(), Boundary::zero()})
        for (int L : {2, 3, 10, 17})
            for (double beta : {0.0, 0.2, 1.0}) {
                auto p = PotentialSpec::standard(0.8);
                auto E = exact_canonical_table(LatticeSpec(1, L, b), p, beta);
                auto T = transfer_matrix_table(L, p, beta, b);
                REQUIRE(T.log_z.size() == E.log_z.size());
                for (long N = 0; N <= L; ++N) CHECK(T.logz(N) == Approx(E.logz(N)).epsilon(1e-14));
            }
    CHECK_THROWS_AS(transfer_matrix_table(10, PotentialSpec::kac(2), 0.1, Boundary::periodic()), guard_error);
    CHECK_THROWS_AS(transfer_matrix_table(10, PotentialSpec::standard(1), 0.1, Boundary::fixed({})), guard_error);
}

TEST_CASE("grand canonical moments", "[oracle]") {
    auto T = transfer_matrix_table(30, PotentialSpec::standard(1.0), 0.4, Boundary::periodic());
    const double mu = -2.3, h = 1e-4;
    auto G = grand_canonical_eval(T, mu);
    double total = 0;
    for (long N = 0; N <= 30; ++N) total += G.prob(N);
    CHECK(total == Approx(1.0).epsilon(1e-14));
    // d(log Xi)/d(beta mu) = <N>, second derivative = Var N
    auto lx = [&](double m) { return double(grand_canonical_eval(T, m).log_xi); };
    const double bh = 0.4 * h;
    CHECK(double(G.mean()) == Approx((lx(mu + h) - lx(mu - h)) / (2 * bh)).epsilon(1e-7));
    CHECK(double(G.variance()) == Approx((lx(mu + h) - 2 * lx(mu) + lx(mu - h)) / (bh * bh)).epsilon(1e-5));
    CHECK(G.beta_pressure() == Approx(double(G.log_xi) / 30));
    CHECK(G.pressure() == Approx(G.beta_pressure() / 0.4));
}

TEST_CASE("correlations: symmetries and sum rules", "[oracle]") {
    LatticeSpec lat(1, 10, Boundary::periodic());
    auto p = PotentialSpec::standard(1.0);
    auto C = exact_correlations(lat, p, 0.3, 3);
    for (long q = 0; q < 10; ++q) CHECK(C.r1(q) == Approx(0.3));
    double s = 0;
    for (long b = 0; b < 10; ++b) s += C.r2(0, b);
    CHECK(s == Approx(2 * 0.3));  // (N-1) rho1
    CHECK(C.r2(0, 3) == Approx(C.r2(3, 0)));
    CHECK(C.r2(0, 3) == Approx(C.r2(0, 7)));
    CHECK(C.r2(0, 0) == 0.0);
    CHECK_THROWS_AS(exact_correlations(LatticeSpec(1, 10), p, 0.3, 3), guard_error);
    CHECK_THROWS_AS(exact_correlations(LatticeSpec(1, 21, Boundary::periodic()), p, 0.3, 3), guard_error);
}

TEST_CASE("correlations: two particles on a ring by hand", "[oracle]") {
    // N = 2 on a ring of 6: adjacent pairs weigh w, others 1
    const double beta = 0.25, w = std::exp(1.0);
    auto C = exact_correlations(LatticeSpec(1, 6, Boundary::periodic()), PotentialSpec::standard(1.0), beta, 2);
    const double Z = 6 * w + 9;
    CHECK(C.r2(0, 1) == Approx(w / Z));
    CHECK(C.r2(0, 2) == Approx(1 / Z));
    CHECK(C.r2(0, 3) == Approx(1 / Z));
    CHECK(C.u2(0, 1) == Approx(w / Z - 1.0 / 9));
}

TEST_CASE("ising / lattice gas consistency", "[oracle]") {
    auto p = PotentialSpec::standard(1.0);
    for (double m : {-1.0, -0.5, 0.0, 0.5}) {
        auto [a, b] = ising_gas_consistency(LatticeSpec(1, 8, Boundary::zero()), p, 0.35, m);
        CHECK(a == Approx(b).epsilon(1e-12));
        auto [c, d] = ising_gas_consistency(LatticeSpec(2, 4, Boundary::fixed({{-1, 1}, {4, 2}})), p, 0.2, m);
        CHECK(c == Approx(d).epsilon(1e-12));
    }
    CHECK_THROWS(ising_gas_consistency(LatticeSpec(1, 8), p, 0.35, 0.1));
}
