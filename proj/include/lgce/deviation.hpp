#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lgce/bounds.hpp"
#include "lgce/cluster.hpp"
#include "lgce/oracle.hpp"

namespace lgce {

struct MeanOccupation {
    double rho_bar;
    long N_bar;
};

inline MeanOccupation mean_occupation(double mu0, const CanonicalTable& T) {
    const auto G = grand_canonical_eval(T, mu0);
    const xreal m = G.mean();
    return {double(m / xreal(T.volume())), long(floor(m))};
}

/// argmax_N beta mu N + log Z(N) at fixed beta mu; smallest maximizer.
inline long N_star_at(const CanonicalTable& T, const xreal& beta_mu) {
    long best = 0;
    xreal bv = xneg_inf();
    for (long N = 0; N < long(T.log_z.size()); ++N) {
        if (!T.allowed(N)) continue;
        const xreal v = beta_mu * xreal(N) + T.log_z[N];
        if (v > bv) {
            bv = v;
            best = N;
        }
    }
    return best;
}

inline long find_N_star(double mu0, const CanonicalTable& T) {
    return N_star_at(T, xreal(T.beta) * xreal(mu0));
}

/// beta mu solving E_mu[N] = N_tilde, by bisection.
inline xreal tilted_beta_mu(double N_tilde, const CanonicalTable& T) {
    const long top = T.max_occupancy();
    if (!(N_tilde > 0 && N_tilde < double(top)))
        throw guard_error("tilted_potential: N_tilde must lie strictly inside (0, " + std::to_string(top) + ")");
    const xreal target = N_tilde;
    auto mean = [&](const xreal& x) { return grand_canonical_at(T, x).mean(); };
    xreal lo = -10, hi = 10;
    while (mean(lo) > target) lo *= 2;
    while (mean(hi) < target) hi *= 2;
    for (int it = 0; it < 200 && hi - lo > xreal(1e-15) * (1 + abs(lo) + abs(hi)); ++it) {
        const xreal mid = (lo + hi) / 2;
        (mean(mid) < target ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

inline double tilted_potential(double N_tilde, const CanonicalTable& T) {
    if (!(T.beta > 0)) throw guard_error("tilted_potential: beta > 0 required");
    return double(tilted_beta_mu(N_tilde, T) / xreal(T.beta));
}

/// I = beta[rho~ mu~ - p(mu~)] - beta[rho_bar mu0 - p(mu0)] - beta mu0 (rho~ - rho_bar), exact pressures.
inline xreal rate_function_x(double rho_tilde, double rho_bar, double mu0, const CanonicalTable& T) {
    const long V = T.volume();
    const xreal bm0 = xreal(T.beta) * xreal(mu0);
    const xreal bmt = tilted_beta_mu(rho_tilde * double(V), T);
    const xreal p0 = grand_canonical_at(T, bm0).log_xi / xreal(V);
    const xreal pt = grand_canonical_at(T, bmt).log_xi / xreal(V);
    const xreal rt = rho_tilde, rb = rho_bar;
    return (rt * bmt - pt) - (rb * bm0 - p0) - bm0 * (rt - rb);
}

inline double rate_function(double rho_tilde, double rho_bar, double mu0, const CanonicalTable& T) {
    return double(rate_function_x(rho_tilde, rho_bar, mu0, T));
}

/// m(alpha) = min{m : m(1 - alpha) - 1 > 0}, compared exactly on the nearest fraction p/q (q <= 1000).
inline int m_alpha(double alpha) {
    if (!(alpha >= 0.5 && alpha < 1)) throw guard_error("m(alpha): alpha must lie in [1/2, 1)");
    long p = 0, q = 1;
    for (long qq = 1; qq <= 1000; ++qq) {
        long pp = std::lround(alpha * qq);
        if (std::abs(alpha - double(pp) / qq) < 1e-12) {
            p = pp;
            q = qq;
            break;
        }
        if (qq == 1000) throw guard_error("m(alpha): alpha is not a fraction with denominator <= 1000");
    }
    long m = 1;
    while (m * (q - p) <= q) ++m;
    return int(m);
}

struct VarianceTerms {
    double D = 0;
    double D_alpha = 0;
    double D_alpha_plus = 0;
    int m = 0;
    double E = 0;
    double E_slack = 0;  // certified bound on the dropped ideal-gas tail, included in E
};

/// D, D^alpha, D^{alpha,+} and the error term E at rho* = N*/V.
inline VarianceTerms variance_terms(long N_star, double alpha, double u_prime, const CanonicalFreeEnergy& fe,
                                    double beta_mu0) {
    const long V = fe.volume();
    if (V <= 0) throw guard_error("variance_terms: finite-volume free energy required");
    if (N_star < 1) throw guard_error("variance_terms: rho* = 0, outside the density regime");
    const xreal rho = xreal(N_star) / xreal(V);
    const xreal Vx = V;
    VarianceTerms out;
    const xreal f2 = fe.derivative(rho, 2);
    if (!(f2 > 0)) throw guard_error("variance_terms: F''(rho*) <= 0");
    out.D = double(1 / f2);
    if (alpha >= 1) {
        out.D_alpha = out.D_alpha_plus = out.D;
        out.E = std::nan("");
        return out;
    }
    const int m = m_alpha(alpha);
    out.m = m;
    if (m > CanonicalFreeEnergy::max_order)
        throw guard_error("variance_terms: m(alpha) = " + std::to_string(m) + " exceeds the derivative cap 6");
    const xreal up = u_prime, oma = 1 - xreal(alpha);
    xreal s = f2, sp = f2;
    for (int k = 3; k <= m - 1; ++k) {
        const xreal fk = fe.derivative(rho, k);
        const xreal w = 2 * pow(up, k - 2) / (xreal(factorial(k)) * pow(Vx, xreal(k - 2) * oma));
        s += w * fk;
        sp += w * abs(fk);
    }
    if (!(sp > 0) || !(s > 0)) throw guard_error("variance_terms: nonpositive D^alpha");
    out.D_alpha = double(1 / s);
    out.D_alpha_plus = double(1 / sp);

    // E: Taylor coefficients c_k = F^{(k)}/k!; polynomial part exactly, ideal part summed to convergence
    const int top = fe.top_index(rho);
    const int M = std::max(m, top + 1);
    const auto t = fe.taylor(rho, M);
    const xreal e0 = xreal(m) * oma - 1;
    xreal sum = pow(up, m) * (t.ideal[m] + t.poly[m]);
    sum += up * (xreal(beta_mu0) - (t.ideal[1] + t.poly[1])) / pow(Vx, 1 - xreal(m) * oma - xreal(alpha));
    for (int k = m + 1; k <= M; ++k) sum += pow(up, k) * (t.ideal[k] + t.poly[k]) / pow(Vx, xreal(k - m) * oma);
    const xreal y = abs(up) / (rho * pow(Vx, oma));
    xreal slack = 0;
    if (y >= 1) {
        slack = std::numeric_limits<xreal>::infinity();
    } else {
        xreal term = 0;
        int k = M + 1;
        for (; k <= M + 20000; ++k) {
            const xreal c = ((k & 1) ? -1 : 1) / (xreal(k) * xreal(k - 1) * pow(rho, k - 1));
            term = pow(up, k) * c / pow(Vx, xreal(k - m) * oma);
            sum += term;
            if (abs(term) <= xreal(1e-40) * (1 + abs(sum))) break;
        }
        slack = abs(term) * y / (1 - y);
    }
    const xreal scale = 1 / pow(Vx, e0);
    out.E_slack = double(scale * slack);
    out.E = double(scale * abs(sum)) + out.E_slack;
    return out;
}

struct DeviationSpec {
    double mu0;
    double alpha;
    double u;
};

struct DeviationReport {
    long L = 0;
    long volume = 0;
    double mu0 = 0, alpha = 0, u = 0, u_prime = 0;
    long N_bar = 0, N_star = 0, N_tilde = 0, N_tilde_star = 0;
    double rho_bar = 0, rho_star = 0;
    double mu_tilde = std::nan("");
    double I_GC = std::nan("");
    double D = 0, D_alpha = 0, D_alpha_plus = 0;
    int m_alpha = 0;
    double E = std::nan("");
    double p_exact = 0, p_formula = 0;
    double gap = 0;       // |p_exact - p_formula|
    double rel_gap = 0;   // gap / p_formula
    double log_gap = 0;   // log p_exact - log p_formula
    double chem_gap = 0;  // beta mu0 - beta F'(rho*)
    bool in_regime = false;  // rho* < R_C
};

/// Exact P(A_N~) against the large, moderate or local-CLT formula.
/// N~ = N* + round(u |Lambda|^alpha); u' = (N~ - N*)/|Lambda|^alpha.
inline DeviationReport formula_probability(const DeviationSpec& spec, const CanonicalTable& T) {
    if (!(spec.alpha >= 0.5 && spec.alpha <= 1)) throw guard_error("deviation: alpha must lie in [1/2, 1]");
    if (!(T.beta > 0)) throw guard_error("deviation: beta > 0 required");
    const long V = T.volume();
    const xreal bm0 = xreal(T.beta) * xreal(spec.mu0);
    const auto G = grand_canonical_at(T, bm0);
    DeviationReport r;
    r.L = T.lattice.side();
    r.volume = V;
    r.mu0 = spec.mu0;
    r.alpha = spec.alpha;
    r.u = spec.u;
    const xreal mean = G.mean();
    r.rho_bar = double(mean / xreal(V));
    r.N_bar = long(floor(mean));
    r.N_star = N_star_at(T, bm0);
    r.rho_star = double(r.N_star) / double(V);
    if (r.N_star < 1) throw guard_error("deviation: N* = 0, outside the density regime");
    const double Va = std::pow(double(V), spec.alpha);
    r.N_tilde = r.N_star + std::lround(spec.u * Va);
    r.u_prime = double(r.N_tilde - r.N_star) / Va;
    const long top = T.max_occupancy();
    if (r.N_tilde >= top) throw guard_error("deviation: N~ outside the occupancy range");
    r.p_exact = G.prob(r.N_tilde);
    const int d = T.lattice.dimension();
    r.in_regime = r.rho_star < radius_canonical(d, T.pot, T.beta);

    const xreal bmt = tilted_beta_mu(double(r.N_tilde), T);
    r.mu_tilde = double(bmt / xreal(T.beta));
    r.N_tilde_star = N_star_at(T, bmt);
    r.I_GC = rate_function(double(r.N_tilde) / double(V), r.rho_bar, spec.mu0, T);

    const long n_need = std::max(r.N_star, r.N_tilde_star);
    if (n_need + 1 > top) throw guard_error("deviation: table too shallow for the free-energy coefficients");
    const auto fe = CanonicalFreeEnergy::extracted(V, extract_B_Lambda(T, int(n_need)));
    const auto vt = variance_terms(r.N_star, spec.alpha, r.u_prime, fe, double(bm0));
    r.D = vt.D;
    r.D_alpha = vt.D_alpha;
    r.D_alpha_plus = vt.D_alpha_plus;
    r.m_alpha = vt.m;
    r.E = vt.E;
    r.chem_gap = double(bm0 - fe.derivative(xreal(r.N_star) / xreal(V), 1));

    const double two_pi = 2.0 * std::numbers::pi;
    if (spec.alpha >= 1) {
        if (r.N_tilde_star < 1) throw guard_error("deviation: tilted N* = 0, outside the density regime");
        const double Dt = 1.0 / double(fe.derivative(xreal(r.N_tilde_star) / xreal(V), 2));
        if (!(Dt > 0)) throw guard_error("deviation: F''(rho~*) <= 0");
        r.D = Dt;
        r.D_alpha = r.D_alpha_plus = Dt;
        const double lf = -double(V) * r.I_GC - 0.5 * std::log(two_pi * Dt * double(V));
        r.p_formula = std::exp(lf);
        r.log_gap = std::log(r.p_exact) - lf;
    } else if (spec.alpha == 0.5) {
        const double lf = -r.u_prime * r.u_prime / (2.0 * r.D) - 0.5 * std::log(two_pi * r.D * double(V));
        r.p_formula = std::exp(lf);
        r.log_gap = std::log(r.p_exact) - lf;
    } else {
        const double lf = -r.u_prime * r.u_prime * std::pow(double(V), 2 * spec.alpha - 1) / (2.0 * r.D_alpha) -
                          0.5 * std::log(two_pi * r.D_alpha_plus * double(V));
        r.p_formula = std::exp(lf);
        r.log_gap = std::log(r.p_exact) - lf;
    }
    r.gap = std::abs(r.p_exact - r.p_formula);
    r.rel_gap = r.gap / r.p_formula;
    return r;
}

struct AppendixObjects {
    bool valid = false;  // false when Z(N') = 0
    double J_C = 0;      // e^{beta mu N} Z(N) / (e^{beta mu N'} Z(N'))
    double K = 0;        // e^{beta mu N'} Z(N') / Xi(mu)
    xreal log_J_C = 0, log_K = 0;
};

inline AppendixObjects appendix_objects(double mu, long N, long Np, const CanonicalTable& T) {
    AppendixObjects a;
    if (!T.allowed(Np)) return a;
    const xreal bm = xreal(T.beta) * xreal(mu);
    const xreal lzN = T.allowed(N) ? T.log_z[N] : xneg_inf();
    std::vector<xreal> lw;
    for (long n = 0; n < long(T.log_z.size()); ++n)
        if (T.allowed(n)) lw.push_back(bm * xreal(n) + T.log_z[n]);
    const xreal lxi = log_sum_exp(lw);
    a.valid = true;
    a.log_J_C = is_neg_inf(lzN) ? xneg_inf() : xreal(bm * xreal(N - Np) + lzN - T.log_z[Np]);
    a.log_K = bm * xreal(Np) + T.log_z[Np] - lxi;
    a.J_C = double(exp(a.log_J_C));
    a.K = double(exp(a.log_K));
    return a;
}

}  // namespace lgce
