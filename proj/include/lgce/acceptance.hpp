#pragma once

#include <algorithm>
#include <chrono>
#include <deque>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lgce/bounds.hpp"
#include "lgce/cluster.hpp"
#include "lgce/correlation.hpp"
#include "lgce/deviation.hpp"
#include "lgce/graphs.hpp"
#include "lgce/oracle.hpp"

namespace lgce::acceptance {

// Pinned tolerances and parameters.
inline constexpr double reconstruction_tol = 1e-10;
inline constexpr double closed_form_tol = 1e-12;
inline constexpr double mayer_tol = 1e-12;
inline constexpr double fugacity_tol = 1e-10;
inline constexpr double legendre_tol = 1e-12;
inline constexpr double ratio_lo_coeff = 1.6, ratio_hi_coeff = 2.6;
inline constexpr double ratio_lo_clt = 1.2, ratio_hi_clt = 1.7;
inline constexpr double ld_growth = 2.0;
inline constexpr double appendix_tol = 1e-12;
inline constexpr double stirling_spread = 1.2;  // max c / min c over the ladder
inline constexpr double decay_rate_floor = 1e-9;
inline constexpr double coeff_beta = 0.2;
inline constexpr double deviation_beta = 0.1;
inline constexpr int figure_points = 101;

struct Result {
    int id;
    std::string name;
    bool pass;
    std::string detail;
    double seconds = 0;
};

namespace detail {

inline std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

inline bool same_set(std::vector<LabeledGraph> a, std::vector<LabeledGraph> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

inline PotentialSpec unit() { return PotentialSpec::standard(1.0); }

inline std::deque<CanonicalTable>& table_registry() {
    static std::deque<CanonicalTable> tables;
    return tables;
}

inline const CanonicalTable& remember(CanonicalTable T) {
    table_registry().push_back(std::move(T));
    return table_registry().back();
}

}  // namespace detail

/// Max |log Z(N) - reconstruction| over N <= N_max.
inline double reconstruction_error(const CanonicalTable& T, const std::vector<xreal>& B, long N_max) {
    double worst = 0;
    for (long N = 0; N <= N_max; ++N)
        worst = std::max(worst, std::abs(double(T.log_z[N] - reconstruct_log_z(B, N, T.volume()))));
    return worst;
}

inline Result criterion_1() {
    Result r{1, "graph engine counts and generator/filter equivalence", true, ""};
    const std::vector<long> conn = {1, 1, 4, 38, 728}, bic = {1, 1, 10, 238};
    std::ostringstream os;
    for (int n = 1; n <= 6; ++n) {
        auto g = connected_graphs(n);
        auto f = brute_force_filter(n, GraphFamily::Connected);
        bool ok = detail::same_set(g, f) && (n > 5 || long(g.size()) == conn[n - 1]);
        r.pass = r.pass && ok;
        os << "C" << n << "=" << g.size() << (ok ? "" : "!") << " ";
    }
    for (int n = 2; n <= 6; ++n) {
        auto g = biconnected_graphs(n);
        auto f = brute_force_filter(n, GraphFamily::Biconnected);
        bool ok = detail::same_set(g, f) && (n > 5 || long(g.size()) == bic[n - 2]);
        r.pass = r.pass && ok;
        os << "B" << n << "=" << g.size() << (ok ? "" : "!") << " ";
    }
    for (int n = 1; n <= 8; ++n) {
        auto g = trees(n);
        auto f = brute_force_filter(n, GraphFamily::Tree);
        long cayley = n <= 2 ? 1 : long(std::llround(std::pow(n, n - 2)));
        bool ok = detail::same_set(g, f) && long(g.size()) == cayley;
        r.pass = r.pass && ok;
        os << "T" << n << "=" << g.size() << (ok ? "" : "!") << " ";
    }
    for (int w = 1; w <= 5; ++w)
        for (int k = 0; w + k <= 5; ++k) {
            bool ok = detail::same_set(af_two_colored_graphs(w, k), brute_force_filter(w + k, GraphFamily::ArticulationFree, w));
            r.pass = r.pass && ok;
            if (!ok) os << "AF(" << w << "," << k << ")! ";
        }
    r.detail = os.str();
    return r;
}

inline Result criterion_2() {
    Result r{2, "canonical expansion reconstructs log Z(N), N <= 6", true, ""};
    const auto pot = detail::unit();
    const auto& A = detail::remember(exact_canonical_table(LatticeSpec(1, 10, Boundary::periodic()), pot, coeff_beta));
    const auto& B = detail::remember(exact_canonical_table(LatticeSpec(2, 3, Boundary::periodic()), pot, coeff_beta));
    double e1 = reconstruction_error(A, extract_B_Lambda(A, 5), 6);
    double e2 = reconstruction_error(B, extract_B_Lambda(B, 5), 6);
    r.pass = e1 <= reconstruction_tol && e2 <= reconstruction_tol;
    r.detail = "d=1 L=10: " + detail::fmt(e1, 3) + ", d=2 L=3: " + detail::fmt(e2, 3) + " (tol 1e-10)";
    return r;
}

inline Result criterion_3() {
    Result r{3, "B_Lambda(n) -> beta_n at O(1/L), n = 1, 2", true, ""};
    const auto pot = detail::unit();
    const double b1 = compute_beta_irr(1, 1, pot, coeff_beta), b2 = compute_beta_irr(2, 1, pot, coeff_beta);
    const double closed = 2.0 * std::expm1(4.0 * coeff_beta) - 1.0;
    std::vector<double> d1, d2;
    for (int L : {10, 20, 40}) {
        const auto& T = detail::remember(transfer_matrix_table(L, pot, coeff_beta, Boundary::periodic()));
        auto B = extract_B_Lambda(T, 2);
        d1.push_back(std::abs(double(B[1]) - b1));
        d2.push_back(std::abs(double(B[2]) - b2));
    }
    std::ostringstream os;
    auto ratios = [&](const std::vector<double>& d, const char* tag) {
        for (int k = 0; k + 1 < int(d.size()); ++k) {
            double q = d[k] / d[k + 1];
            bool ok = q >= ratio_lo_coeff && q <= ratio_hi_coeff;
            r.pass = r.pass && ok;
            os << tag << " ratio " << detail::fmt(q, 4) << (ok ? "" : "!") << "; ";
        }
    };
    ratios(d1, "n=1");
    ratios(d2, "n=2");
    const double e = std::abs(b1 - closed);
    r.pass = r.pass && e <= closed_form_tol;
    os << "|beta_1 - closed form| = " << detail::fmt(e, 3);
    r.detail = os.str();
    return r;
}

inline Result criterion_4() {
    Result r{4, "Mayer relations, fugacity cross-check, Legendre identity", true, ""};
    const auto pot = detail::unit();
    std::ostringstream os;
    double w_mayer = 0, w_fug = 0, w_leg = 0;
    for (int d : {1, 2}) {
        std::vector<MayerPolynomial> irr, con;
        for (int n = 1; n <= 4; ++n) irr.push_back(irreducible_polynomial(n, d, pot));
        for (int n = 1; n <= 3; ++n) con.push_back(connected_polynomial(n, d, pot));
        for (double beta : {0.1, 0.2, 0.5, 1.0}) {
            std::vector<double> bi;
            for (auto& p : irr) bi.push_back(p.at(beta));
            const double b2 = con[1].at(beta), b3 = con[2].at(beta);
            w_mayer = std::max(w_mayer, std::abs(bi[0] - 2 * b2) / std::max(1.0, std::abs(bi[0])));
            auto v = virial_series(bi, 2);
            w_fug = std::max(w_fug, std::abs(v.fugacity_pressure[1] - 1.0));
            w_fug = std::max(w_fug, std::abs(v.fugacity_pressure[2] - b2) / std::max(1.0, std::abs(b2)));
            w_fug = std::max(w_fug, std::abs(v.fugacity_pressure[3] - b3) / std::max(1.0, std::abs(b3)));
            auto v4 = virial_series(bi, 4);
            double scale = 1;
            for (double x : bi) scale = std::max(scale, std::abs(x));
            for (double x : legendre_residuals(v4)) w_leg = std::max(w_leg, std::abs(x) / scale);
        }
    }
    r.pass = w_mayer <= mayer_tol && w_fug <= fugacity_tol && w_leg <= legendre_tol;
    os << "beta_1 vs 2b_2 " << detail::fmt(w_mayer, 3) << ", fugacity {b_2,b_3} " << detail::fmt(w_fug, 3)
       << ", Legendre " << detail::fmt(w_leg, 3) << " (relative)";
    r.detail = os.str();
    return r;
}

inline Result criterion_5() {
    Result r{5, "tree-graph inequality, n <= 5, d in {1,2}", true, ""};
    const auto pot = detail::unit();
    uint64_t configs = 0, viol = 0;
    double worst = 0;
    for (int d : {1, 2})
        for (int n = 1; n <= 5; ++n) {
            const auto S = lattice_sums(n, d, pot);
            for (double beta : {0.1, 0.5, 1.0}) {
                auto c = tree_graph_check(S, pot, beta);
                configs += c.configurations;
                viol += c.violations;
                worst = std::max(worst, c.worst_ratio);
                if (c.lhs > c.rhs) ++viol;
            }
        }
    r.pass = viol == 0;
    r.detail = std::to_string(configs) + " configurations, " + std::to_string(viol) + " violations, max lhs/rhs " +
               detail::fmt(worst, 4);
    return r;
}

inline Result criterion_6() {
    Result r{6, "figure sign patterns on the 101-point beta grid", true, ""};
    const auto grid = linear_grid(0.0, 1.0, figure_points);
    std::ostringstream os;
    for (int d : {1, 2, 3}) {
        const auto pot = detail::unit();
        std::vector<double> diff, gap;
        bool above = true;
        for (double b : grid) {
            auto rep = radius_report(d, pot, b);
            diff.push_back(rep.R_C - rep.R_C_bar);
            above = above && rep.R_V > rep.R_C;
        }
        int s = sign_changes(diff);
        r.pass = r.pass && s == 1 && above;
        os << "fig1 d=" << d << ": " << s << (s == 1 ? "" : "!") << "; fig4 d=" << d << ": " << (above ? "ok" : "FAIL")
           << "; ";
    }
    auto mgap = [&](int d, double J) {
        const auto pot = PotentialSpec::standard(J);
        std::vector<double> v;
        for (double b : grid) {
            if (b == 0) continue;
            v.push_back(contour_threshold(d, pot, b).second - lattice_gas_threshold(d, pot, b));
        }
        return sign_changes(v);
    };
    for (auto [d, J] : std::vector<std::pair<int, double>>{{1, 1.0}, {1, 2.0}, {2, 1.0}}) {
        int s = mgap(d, J);
        r.pass = r.pass && s == 1;
        os << "M_IS-M_LG d=" << d << " J=" << J << ": " << s << (s == 1 ? "" : "!") << "; ";
    }
    r.detail = os.str();
    return r;
}

inline std::vector<CorrelationCase> correlation_family() {
    std::vector<CorrelationCase> cs;
    for (int L : {10, 12, 14})
        for (int N : {2, 3})
            for (double b : {0.1, 0.2}) cs.push_back({LatticeSpec(1, L, Boundary::periodic()), detail::unit(), b, N});
    return cs;
}

inline Result criterion_7() {
    Result r{7, "two-point bound with calibrated constants and decay rate", true, ""};
    const auto cs = correlation_family();
    const auto cal = calibrate_constants(cs);
    std::ostringstream os;
    long bad = 0, in_regime = 0;
    for (const auto& k : cs)
        for (const auto& row : correlation_rows(k, cal.C_min, cal.C1_min)) bad += !row.feasible;
    for (bool b : cal.in_regime) in_regime += b;
    os << "C_min=" << detail::fmt(cal.C_min, 4) << " C1_min=" << detail::fmt(cal.C1_min, 6) << " (binding case "
       << cal.binding_case << "), pairs violating " << bad << ", cases in regime N/V<=R_C/2: " << in_regime << "/"
       << cs.size() << "; rates:";
    r.pass = cal.feasible && bad == 0;
    for (const auto& k : cs) {
        if (!(k.beta > 0)) continue;
        auto f = decay_fit(k.lattice, k.pot, k.beta, k.N);
        bool ok = f.rate > decay_rate_floor;
        r.pass = r.pass && ok;
        os << " L" << k.lattice.side() << "N" << k.N << "b" << k.beta << "=" << detail::fmt(f.rate, 3) << (ok ? "" : "!")
           << "(excess " << detail::fmt(f.excess_rate, 3) << ")";
    }
    r.detail = os.str();
    return r;
}

inline double deviation_mu0(double beta) { return lattice_gas_threshold(1, detail::unit(), beta) - 1.0; }

inline Result criterion_8() {
    Result r{8, "local CLT relative gap shrinks like |Lambda|^{-1/2}", true, ""};
    const double mu0 = deviation_mu0(deviation_beta);
    std::vector<double> g;
    std::ostringstream os;
    os << "beta=" << deviation_beta << " mu0=" << detail::fmt(mu0, 6) << "; ";
    for (int L : {64, 128, 256}) {
        const auto& T = detail::remember(transfer_matrix_table(L, detail::unit(), deviation_beta, Boundary::zero()));
        double worst = 0;
        for (double u : {0.0, 0.5, 1.0}) worst = std::max(worst, formula_probability({mu0, 0.5, u}, T).rel_gap);
        g.push_back(worst);
        os << "L=" << L << " gap " << detail::fmt(worst, 4) << "; ";
    }
    for (size_t k = 0; k + 1 < g.size(); ++k) {
        double q = g[k] / g[k + 1];
        bool ok = q >= ratio_lo_clt && q <= ratio_hi_clt;
        r.pass = r.pass && ok;
        os << "ratio " << detail::fmt(q, 4) << (ok ? "" : "!") << "; ";
    }
    r.detail = os.str();
    return r;
}

inline Result criterion_9() {
    Result r{9, "precise large deviations, L-independent log gap", true, ""};
    const double mu0 = deviation_mu0(deviation_beta);
    std::vector<double> g;
    std::ostringstream os;
    for (int L : {64, 128, 256}) {
        const auto T = transfer_matrix_table(L, detail::unit(), deviation_beta, Boundary::zero());
        auto rep = formula_probability({mu0, 1.0, 0.05}, T);
        g.push_back(std::abs(rep.log_gap));
        os << "L=" << L << " |log gap| " << detail::fmt(g.back(), 4) << "; ";
    }
    const double mx = *std::max_element(g.begin(), g.end());
    r.pass = mx <= ld_growth * g[0];
    os << "max " << detail::fmt(mx, 4) << " vs 2x L=64 " << detail::fmt(ld_growth * g[0], 4);
    r.detail = os.str();
    return r;
}

/// Max |log P(A_N) - log J^C(N,N') - log K(mu,N')| over N and N' in {N_bar, N*}.
inline double appendix_error(const CanonicalTable& T, double mu) {
    const auto G = grand_canonical_eval(T, mu);
    const long Nb = long(floor(G.mean())), Ns = find_N_star(mu, T);
    double worst = 0;
    for (long anchor : {Nb, Ns}) {
        for (long N = 0; N < long(T.log_z.size()); ++N) {
            if (!T.allowed(N)) continue;
            auto a = appendix_objects(mu, N, anchor, T);
            if (!a.valid) return inf;
            worst = std::max(worst, std::abs(double(G.log_prob[N] - (a.log_J_C + a.log_K))));
        }
    }
    return worst;
}

inline Result criterion_10() {
    Result r{10, "appendix decomposition and Stirling remainder scaling", true, ""};
    if (detail::table_registry().empty()) {
        detail::remember(exact_canonical_table(LatticeSpec(1, 10, Boundary::periodic()), detail::unit(), coeff_beta));
        detail::remember(exact_canonical_table(LatticeSpec(2, 3, Boundary::periodic()), detail::unit(), coeff_beta));
        for (int L : {10, 20, 40})
            detail::remember(transfer_matrix_table(L, detail::unit(), coeff_beta, Boundary::periodic()));
        for (int L : {64, 128, 256})
            detail::remember(transfer_matrix_table(L, detail::unit(), deviation_beta, Boundary::zero()));
    }
    double worst = 0;
    for (const auto& T : detail::table_registry()) {
        const double mu = lattice_gas_threshold(T.lattice.dimension(), T.pot, T.beta) - 1.0;
        worst = std::max(worst, appendix_error(T, mu));
    }
    std::vector<double> c;
    std::ostringstream os;
    os << detail::table_registry().size() << " tables, max |log P - log(J K)| " << detail::fmt(worst, 3) << "; c:";
    for (long V : {64, 128, 256, 512}) {
        const double S = std::abs(double(stirling_remainder(V / 4, V)));
        c.push_back(S * double(V) / std::log(double(V)));
        os << " " << detail::fmt(c.back(), 5);
    }
    const double spread = *std::max_element(c.begin(), c.end()) / *std::min_element(c.begin(), c.end());
    r.pass = worst <= appendix_tol && spread <= stirling_spread;
    os << " (spread " << detail::fmt(spread, 4) << ")";
    r.detail = os.str();
    return r;
}

inline const std::vector<std::function<Result()>>& criteria() {
    static const std::vector<std::function<Result()>> all = {criterion_1, criterion_2, criterion_3, criterion_4,
                                                             criterion_5, criterion_6, criterion_7, criterion_8,
                                                             criterion_9, criterion_10};
    return all;
}

/// Wall-clock budget per criterion, seconds.
inline double budget(int id) {
    static const double b[] = {10, 30, inf, inf, inf, 5, 60, 60, inf, inf};
    return b[id - 1];
}

inline Result run_one(int id) {
    if (id < 1 || id > int(criteria().size())) throw config_error("criterion: must be in 1..10");
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
        r = criteria()[id - 1]();
    } catch (const std::exception& e) {
        r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > budget(id)) {
        r.pass = false;
        r.detail += "; over the " + detail::fmt(budget(id), 3) + " s budget";
    }
    return r;
}

inline void print(std::ostream& os, const Result& r) {
    os << (r.pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << r.id << "  " << r.name << "\n"
       << "      " << r.detail << "\n";
}

/// Runs the given criteria (all when empty); returns true when every one passed.
/// Timings go to `timing` so the summary itself is reproducible.
inline bool run(const std::vector<int>& ids, std::ostream& os, std::ostream* timing = nullptr) {
    std::vector<int> which = ids;
    if (which.empty())
        for (int i = 1; i <= int(criteria().size()); ++i) which.push_back(i);
    bool ok = true;
    for (int id : which) {
        auto r = run_one(id);
        print(os, r);
        if (timing)
            *timing << "criterion " << id << ": " << std::fixed << std::setprecision(2) << r.seconds << " s"
                    << std::defaultfloat << "\n";
        ok = ok && r.pass;
    }
    return ok;
}

}  // namespace lgce::acceptance
