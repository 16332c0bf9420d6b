#include "catch_amalgamated.hpp"
#include "lgce/deviation.hpp"

using namespace lgce;
using Catch::Approx;

namespace {

CanonicalTable chain(int L, double beta, Boundary b = Boundary::zero()) {
    return transfer_matrix_table(L, PotentialSpec::standard(1.0), beta, b);
}

double mu0_of(double beta) { return lattice_gas_threshold(1, PotentialSpec::standard(1.0), beta) - 1.0; }

}  // namespace

TEST_CASE("N* is the smallest argmax", "[deviation]") {
    auto T = chain(64, 0.1);
    for (double mu : {-30.0, -24.0, -10.0, 0.0}) {
        const double bm = 0.1 * mu;
        long best = 0;
        double bv = -inf;
        for (long N = 0; N <= 64; ++N) {
            double v = bm * N + T.logz(N);
            if (v > bv) {
                bv = v;
                best = N;
            }
        }
        CHECK(find_N_star(mu, T) == best);
    }
    // exact tie: V = 2, Z(0) = 1, Z(1) = 2, beta mu = -log 2
    auto S = exact_canonical_table(LatticeSpec(1, 2), PotentialSpec::standard(1.0), 0.0);
    CHECK(N_star_at(S, -log(xreal(2))) == 0);
}

TEST_CASE("tilted chemical potential hits the target mean", "[deviation]") {
    auto T = chain(128, 0.1);
    for (double Nt : {3.0, 10.5, 40.0}) {
        const xreal bm = tilted_beta_mu(Nt, T);
        CHECK(double(grand_canonical_at(T, bm).mean()) == Approx(Nt).epsilon(1e-12));
        CHECK(tilted_potential(Nt, T) == Approx(double(bm) / 0.1));
    }
    CHECK_THROWS_AS(tilted_beta_mu(0.0, T), guard_error);
    CHECK_THROWS_AS(tilted_beta_mu(128.0, T), guard_error);
}

TEST_CASE("rate function: zero at the mean, convex, curvature V/Var", "[deviation]") {
    auto T = chain(128, 0.1);
    const double mu0 = mu0_of(0.1);
    const auto mo = mean_occupation(mu0, T);
    CHECK(rate_function(mo.rho_bar, mo.rho_bar, mu0, T) == Approx(0).margin(1e-14));
    for (double rho : {0.05, 0.1, 0.2}) {
        const double h = 1e-3;
        const double i0 = rate_function(rho, mo.rho_bar, mu0, T);
        const double ip = rate_function(rho + h, mo.rho_bar, mu0, T);
        const double im = rate_function(rho - h, mo.rho_bar, mu0, T);
        CHECK(i0 >= 0);
        const double second = (ip - 2 * i0 + im) / (h * h);
        const auto G = grand_canonical_at(T, tilted_beta_mu(rho * 128, T));
        CHECK(second == Approx(128.0 / double(G.variance())).epsilon(1e-4));
        // first derivative is beta mu~ - beta mu0
        const double k = 1e-5;
        const double slope = (rate_function(rho + k, mo.rho_bar, mu0, T) - rate_function(rho - k, mo.rho_bar, mu0, T)) / (2 * k);
        CHECK(slope == Approx(double(tilted_beta_mu(rho * 128, T)) - 0.1 * mu0).epsilon(1e-6));
    }
}

TEST_CASE("m(alpha)", "[deviation]") {
    CHECK(m_alpha(0.5) == 3);
    CHECK(m_alpha(0.6) == 3);
    CHECK(m_alpha(2.0 / 3) == 4);
    CHECK(m_alpha(0.75) == 5);
    CHECK(m_alpha(0.8) == 6);
    CHECK(m_alpha(0.9) == 11);
    CHECK_THROWS_AS(m_alpha(1.0), guard_error);
    CHECK_THROWS_AS(m_alpha(0.4), guard_error);
    CHECK_THROWS_AS(m_alpha(0.5000001), guard_error);
}

TEST_CASE("variance terms", "[deviation]") {
    auto fe = CanonicalFreeEnergy::thermodynamic({1.4, -5.0, 5.2, -9.8});
    auto T = chain(64, 0.1);
    auto fv = CanonicalFreeEnergy::extracted(64, extract_B_Lambda(T, 12));
    const long Ns = 8;
    const double rho = 8.0 / 64;
    auto v = variance_terms(Ns, 0.5, 0.7, fv, -2.4);
    CHECK(v.m == 3);
    CHECK(v.D == Approx(1.0 / fv(rho, 2)));
    CHECK(v.D_alpha == Approx(v.D));
    CHECK(v.D_alpha_plus == Approx(v.D));
    CHECK(v.E >= v.E_slack);
    auto w = variance_terms(Ns, 2.0 / 3, 0.7, fv, -2.4);
    CHECK(w.m == 4);
    const double corr = 2 * 0.7 * fv(rho, 3) / (6 * std::pow(64.0, 1.0 / 3));
    CHECK(w.D_alpha == Approx(1.0 / (fv(rho, 2) + corr)).epsilon(1e-12));
    CHECK(w.D_alpha_plus == Approx(1.0 / (fv(rho, 2) + std::abs(corr))).epsilon(1e-12));
    auto one = variance_terms(Ns, 1.0, 0.7, fv, -2.4);
    CHECK(std::isnan(one.E));
    CHECK_THROWS_AS(variance_terms(0, 0.5, 0.7, fv, -2.4), guard_error);
    CHECK_THROWS_AS(variance_terms(Ns, 0.9, 0.7, fv, -2.4), guard_error);  // m = 11 > 6
    CHECK_THROWS_AS(variance_terms(4, 0.5, 0.7, fe, -2.4), guard_error);   // no volume
}

TEST_CASE("deviation report: bookkeeping and local CLT formula", "[deviation]") {
    auto T = chain(128, 0.1);
    const double mu0 = mu0_of(0.1);
    auto r = formula_probability({mu0, 0.5, 1.0}, T);
    const auto G = grand_canonical_eval(T, mu0);
    CHECK(r.N_star == find_N_star(mu0, T));
    CHECK(r.N_tilde == r.N_star + std::lround(std::sqrt(128.0)));
    CHECK(r.u_prime == Approx((r.N_tilde - r.N_star) / std::sqrt(128.0)));
    CHECK(r.p_exact == Approx(G.prob(r.N_tilde)).epsilon(1e-14));
    const double expect = std::exp(-r.u_prime * r.u_prime / (2 * r.D)) / std::sqrt(2 * M_PI * r.D * 128);
    CHECK(r.p_formula == Approx(expect).epsilon(1e-12));
    CHECK(r.gap == Approx(std::abs(r.p_exact - r.p_formula)));
    CHECK(r.m_alpha == 3);
    // variance of N against the CLT variance D V to within the O(1/sqrt V) skew
    CHECK(double(G.variance()) == Approx(r.D * 128).epsilon(0.1));
    // at the mode the Gaussian density is already close
    CHECK(formula_probability({mu0, 0.5, 0.0}, T).rel_gap < 0.05);
}

TEST_CASE("deviation report: large deviations", "[deviation]") {
    auto T = chain(128, 0.1);
    const double mu0 = mu0_of(0.1);
    auto r = formula_probability({mu0, 1.0, 0.05}, T);
    CHECK(r.N_tilde == r.N_star + std::lround(0.05 * 128));
    CHECK(r.I_GC > 0);
    const double lf = -128 * r.I_GC - 0.5 * std::log(2 * M_PI * r.D * 128);
    CHECK(std::log(r.p_formula) == Approx(lf).epsilon(1e-12));
    CHECK(std::abs(r.log_gap) < 1.0);
    CHECK_THROWS_AS(formula_probability({mu0, 0.4, 0.0}, T), guard_error);
    CHECK_THROWS_AS(formula_probability({-1e3, 0.5, 0.0}, T), guard_error);  // N* = 0
}

TEST_CASE("appendix decomposition", "[deviation]") {
    auto T = chain(40, 0.2, Boundary::periodic());
    const double mu = -8.0;
    const auto G = grand_canonical_eval(T, mu);
    for (long Np : {2L, 5L})
        for (long N = 0; N <= 20; ++N) {
            auto a = appendix_objects(mu, N, Np, T);
            REQUIRE(a.valid);
            CHECK(double(a.log_J_C + a.log_K - G.log_prob[N]) == Approx(0).margin(1e-30));
        }
    auto a = appendix_objects(mu, 3, 3, T);
    CHECK(a.J_C == Approx(1.0));
    CHECK(a.K == Approx(G.prob(3)));
    CHECK_FALSE(appendix_objects(mu, 3, 41, T).valid);
}
