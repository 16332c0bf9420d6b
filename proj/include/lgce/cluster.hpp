#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lgce/graphs.hpp"
#include "lgce/lattice.hpp"
#include "lgce/numeric.hpp"
#include "lgce/oracle.hpp"

namespace lgce {

/// f = e^{-beta V} - 1 with f(0) = -1.
struct MayerWeights {
    double beta;
    PotentialSpec pot;

    int support_radius() const { return pot.support(); }
    double bond() const { return std::expm1(-beta * pot.well()); }
    double operator()(const Site& x) const {
        bool zero = std::all_of(x.begin(), x.end(), [](int c) { return c == 0; });
        if (zero) return -1.0;
        return pot.interacts(x) ? bond() : 0.0;
    }
};

/// Configurations of n points (x_1 = 0, others in the exact support box)
/// grouped by which pairs coincide and which interact. Independent of beta.
struct LatticeSums {
    int n = 0;
    int d = 0;
    std::vector<uint32_t> coincide;   // pair mask
    std::vector<uint32_t> interact;   // pair mask
    std::vector<uint64_t> count;
    uint64_t configurations = 0;
};

inline LatticeSums lattice_sums(int n, int d, const PotentialSpec& pot) {
    if (n < 1 || n > 5) throw guard_error("lattice sums: 1 <= n <= 5");
    const int r = (n - 1) * pot.support();
    const int w = 2 * r + 1;
    const double cfg = std::pow(double(w), double(d) * (n - 1));
    if (cfg > 1e9) throw guard_error("lattice sums: box enumeration exceeds 1e9 configurations");
    long cells = 1;
    for (int k = 0; k < d; ++k) cells *= w;
    // displacement classes over the doubled box
    const int R2 = 2 * r, W2 = 2 * R2 + 1;
    long cells2 = 1;
    for (int k = 0; k < d; ++k) cells2 *= W2;
    std::vector<uint8_t> dtype(cells2);
    for (long c = 0; c < cells2; ++c) {
        Site v(d);
        long t = c;
        for (int k = 0; k < d; ++k) {
            v[k] = int(t % W2) - R2;
            t /= W2;
        }
        bool zero = std::all_of(v.begin(), v.end(), [](int a) { return a == 0; });
        dtype[c] = zero ? 1 : (pot.interacts(v) ? 2 : 0);
    }
    std::vector<std::vector<int>> coord(cells, std::vector<int>(d));
    for (long c = 0; c < cells; ++c) {
        long t = c;
        for (int k = 0; k < d; ++k) {
            coord[c][k] = int(t % w) - r;
            t /= w;
        }
    }
    auto diff = [&](long a, long b) {
        long idx = 0, mul = 1;
        for (int k = 0; k < d; ++k) {
            idx += (coord[a][k] - coord[b][k] + R2) * mul;
            mul *= W2;
        }
        return dtype[idx];
    };
    long origin = 0;
    {
        long mul = 1;
        for (int k = 0; k < d; ++k) {
            origin += r * mul;
            mul *= w;
        }
    }
    const int P = LabeledGraph::pair_count(n);
    std::vector<uint64_t> table(size_t(1) << (2 * P), 0);
    std::vector<long> pts(n, origin);
    uint64_t total = 0;
    auto rec = [&](auto&& self, int k, uint32_t mc, uint32_t mi) -> void {
        if (k == n) {
            ++table[mc | (size_t(mi) << P)];
            ++total;
            return;
        }
        for (long c = 0; c < cells; ++c) {
            pts[k] = c;
            uint32_t a = mc, b = mi;
            for (int i = 0; i < k; ++i) {
                auto t = diff(c, pts[i]);
                if (t == 1) a |= 1u << LabeledGraph::pair_index(i, k);
                if (t == 2) b |= 1u << LabeledGraph::pair_index(i, k);
            }
            self(self, k + 1, a, b);
        }
    };
    rec(rec, 1, 0, 0);
    LatticeSums S{n, d, {}, {}, {}, total};
    const uint32_t pmask = P ? (1u << P) - 1 : 0;
    for (size_t key = 0; key < table.size(); ++key) {
        if (!table[key]) continue;
        uint32_t mc = uint32_t(key) & pmask, mi = uint32_t(key >> P);
        if (!classify(LabeledGraph{n, mc | mi, n}).connected) continue;  // every connected graph sum vanishes
        S.coincide.push_back(mc);
        S.interact.push_back(mi);
        S.count.push_back(table[key]);
    }
    return S;
}

/// sum_g prod_{e in g} f_e for one pattern, as integer coefficients of x^j (x = e^{4 beta J} - 1).
inline std::vector<int64_t> pattern_polynomial(uint32_t mc, uint32_t mi, const std::vector<LabeledGraph>& graphs,
                                               int max_edges) {
    std::vector<int64_t> p(max_edges + 1, 0);
    const uint32_t allowed = mc | mi;
    for (const auto& g : graphs) {
        if (g.edges & ~allowed) continue;
        int i = std::popcount(g.edges & mc), j = std::popcount(g.edges & mi);
        p[j] += (i & 1) ? -1 : 1;
    }
    return p;
}

/// Total graph polynomial over all configurations: sum_config sum_g prod f.
inline std::vector<int64_t> graph_polynomial(const LatticeSums& S, const std::vector<LabeledGraph>& graphs) {
    const int E = LabeledGraph::pair_count(S.n);
    std::vector<int64_t> total(E + 1, 0);
    for (size_t k = 0; k < S.count.size(); ++k) {
        auto p = pattern_polynomial(S.coincide[k], S.interact[k], graphs, E);
        for (int j = 0; j <= E; ++j) total[j] += int64_t(S.count[k]) * p[j];
    }
    return total;
}

inline double eval_polynomial(const std::vector<int64_t>& p, double x) {
    long double s = 0;
    for (int j = int(p.size()) - 1; j >= 0; --j) s = s * x + (long double)p[j];
    return double(s);
}

inline double factorial(int n) {
    double f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

/// n! b_n and n! beta_n as polynomials in x; reusable across beta.
struct MayerPolynomial {
    int n;
    double J;
    std::vector<int64_t> coeffs;

    double at(double beta) const { return eval_polynomial(coeffs, std::expm1(4.0 * beta * J)) / factorial(n); }
};

inline MayerPolynomial connected_polynomial(int n, int d, const PotentialSpec& pot) {
    if (n < 1 || n > 5) throw guard_error("b_n: 1 <= n <= 5");
    return {n, pot.J(), graph_polynomial(lattice_sums(n, d, pot), connected_graphs(n))};
}

inline MayerPolynomial irreducible_polynomial(int n, int d, const PotentialSpec& pot) {
    if (n < 1 || n > 4) throw guard_error("beta_n: 1 <= n <= 4");
    return {n, pot.J(), graph_polynomial(lattice_sums(n + 1, d, pot), biconnected_graphs(n + 1))};
}

/// b_n = (1/n!) sum_{g in C_n} sum_{x_2..x_n} prod f, x_1 = 0.
inline double compute_b_n(int n, int d, const PotentialSpec& pot, double beta) {
    return connected_polynomial(n, d, pot).at(beta);
}

/// beta_n = (1/n!) sum_{g in B_{n+1}} sum_{x_2..x_{n+1}} prod f, x_1 = 0.
inline double compute_beta_irr(int n, int d, const PotentialSpec& pot, double beta) {
    return irreducible_polynomial(n, d, pot).at(beta);
}

struct TreeGraphCheck {
    double lhs = 0;  // sum over configurations of |sum_{C_n} prod f|
    double rhs = 0;  // sum over configurations of e^{beta B n} sum_{T_n} prod (1 - e^{-beta|V|})
    uint64_t configurations = 0;
    uint64_t violations = 0;
    double worst_ratio = 0;  // max lhs/rhs per configuration
};

inline TreeGraphCheck tree_graph_check(const LatticeSums& S, const PotentialSpec& pot, double beta) {
    const int n = S.n, E = LabeledGraph::pair_count(n);
    const auto C = connected_graphs(n);
    const auto T = trees(n);
    const double x = std::expm1(4.0 * beta * pot.J());
    const double t = -std::expm1(-4.0 * beta * pot.J());  // 1 - e^{-beta|V|} on the support
    const double stab = std::exp(beta * model_constants(S.d, pot, beta).B * n);
    TreeGraphCheck out;
    out.configurations = S.configurations;
    for (size_t k = 0; k < S.count.size(); ++k) {
        const double lhs = std::abs(eval_polynomial(pattern_polynomial(S.coincide[k], S.interact[k], C, E), x));
        double tsum = 0;
        for (const auto& g : T) {
            if (g.edges & ~(S.coincide[k] | S.interact[k])) continue;
            tsum += std::pow(t, std::popcount(g.edges & S.interact[k]));
        }
        const double rhs = stab * tsum;
        const double c = double(S.count[k]);
        out.lhs += c * lhs;
        out.rhs += c * rhs;
        if (lhs > rhs * (1 + 1e-12)) out.violations += S.count[k];
        if (rhs > 0) out.worst_ratio = std::max(out.worst_ratio, lhs / rhs);
        else if (lhs > 0) out.worst_ratio = inf;
    }
    return out;
}

inline TreeGraphCheck tree_graph_check(int n, int d, const PotentialSpec& pot, double beta) {
    return tree_graph_check(lattice_sums(n, d, pot), pot, beta);
}

// ---- finite-volume coefficients ----

/// P_{N,V}(n) = (N-1)...(N-n)/V^n for n < N, else 0.
inline xreal P_NL(long N, long V, int n) {
    if (n >= N) return 0;
    xreal p = 1;
    for (int k = 1; k <= n; ++k) p *= xreal(N - k) / xreal(V);
    return p;
}

inline double F_coefficient(long N, long V, int n, double B) {
    return double(P_NL(N, V, n)) * B / (n + 1);
}

/// calP_{n+1,V}(rho) = rho (rho - 1/V) ... (rho - n/V), zero once n/V > rho.
inline xreal calP(const xreal& rho, int n, long V) {
    if (xreal(n) > rho * xreal(V) + xreal(1e-9)) return 0;
    xreal p = rho;
    for (int k = 1; k <= n; ++k) p *= rho - xreal(k) / xreal(V);
    return p;
}

/// B_Lambda(n), n = 1..n_max, from the exact table; index 0 unused.
inline std::vector<xreal> extract_B_Lambda(const CanonicalTable& T, int n_max) {
    if (T.lattice.kind() == BoundaryKind::Fixed) throw guard_error("extraction: Zero or Periodic boundary only");
    if (n_max < 1) throw guard_error("extraction: n_max >= 1");
    const long V = T.volume();
    if (n_max + 1 > V || !T.allowed(n_max + 1))
        throw guard_error("extraction: table depth " + std::to_string(T.max_occupancy()) +
                          " insufficient for n_max = " + std::to_string(n_max));
    std::vector<xreal> B(n_max + 1, xreal(0));
    for (long N = 2; N <= n_max + 1; ++N) {
        xreal s = T.log_z[N] - log_ideal(N, V);
        for (int n = 1; n <= N - 2; ++n) s -= xreal(N) * P_NL(N, V, n) * B[n] / xreal(n + 1);
        const int n = int(N - 1);
        B[n] = s * xreal(n + 1) / (xreal(N) * P_NL(N, V, n));
    }
    return B;
}

/// log Z(N) = log(V^N/N!) + sum_{n<N} N P_{N,V}(n) B(n)/(n+1).
inline xreal reconstruct_log_z(const std::vector<xreal>& B, long N, long V) {
    if (N > long(B.size())) throw guard_error("reconstruction: not enough coefficients");
    xreal s = log_ideal(N, V);
    for (int n = 1; n <= N - 1; ++n) s += xreal(N) * P_NL(N, V, n) * B[n] / xreal(n + 1);
    return s;
}

struct DirectB1 {
    double value;      // |Lambda| sum_{k<=K} c_k zeta^k
    double remainder;  // bound on the dropped tail
    double closed;     // |Lambda| log(1 + zeta)
    std::vector<double> c;
};

/// B_Lambda(1) from single-pair polymers: c_k = (1/k!) sum_{g in C_k} (-1)^{|E(g)|}.
inline DirectB1 direct_B1(const LatticeSpec& lat, const PotentialSpec& pot, double beta, int K = 6) {
    if (K < 1 || K > 6) throw guard_error("direct_B1: 1 <= K <= 6");
    const auto I = interaction(lat, pot);
    const double V = double(I.volume);
    // sum over ordered (x1, x2) of f(x1 - x2), bonds with multiplicity
    double sf = -V;
    for (long x = 0; x < I.volume; ++x)
        for (auto [y, m] : I.nbrs[x]) sf += std::expm1(-beta * pot.well() * m);
    const double zeta = sf / (V * V);
    DirectB1 out{0, 0, V * std::log1p(zeta), {}};
    double zk = 1;
    for (int k = 1; k <= K; ++k) {
        long s = 0;
        enumerate_connected(k, [&](const LabeledGraph& g) { s += (g.edge_count() & 1) ? -1 : 1; });
        out.c.push_back(double(s) / factorial(k));
        zk *= zeta;
        out.value += V * out.c.back() * zk;
    }
    const double a = std::abs(zeta);
    out.remainder = a < 1 ? V * std::pow(a, K + 1) / ((K + 1) * (1 - a)) : inf;
    return out;
}

// ---- free energy ----

/// beta F(rho) = rho(log rho - 1) - sum_n calP_{n+1}(rho) B(n)/(n+1).
/// With volume 0 the thermodynamic form (calP = rho^{n+1}) is used.
class CanonicalFreeEnergy {
public:
    static constexpr int max_order = 6;

    static CanonicalFreeEnergy extracted(long V, std::vector<xreal> B) { return {V, std::move(B)}; }
    static CanonicalFreeEnergy thermodynamic(const std::vector<double>& beta_n) {
        std::vector<xreal> B(beta_n.size() + 1, xreal(0));
        for (size_t i = 0; i < beta_n.size(); ++i) B[i + 1] = beta_n[i];
        return {0, std::move(B)};
    }

    long volume() const { return V_; }
    int coefficients() const { return int(B_.size()) - 1; }
    const std::vector<xreal>& B() const { return B_; }

    /// Taylor coefficients at rho of the ideal and interaction parts, orders 0..M.
    struct Taylor {
        std::vector<xreal> ideal, poly;
    };

    Taylor taylor(const xreal& rho, int M) const {
        check_rho(rho);
        Taylor t{std::vector<xreal>(M + 1), std::vector<xreal>(M + 1, xreal(0))};
        t.ideal[0] = rho * (log(rho) - 1);
        if (M >= 1) t.ideal[1] = log(rho);
        for (int m = 2; m <= M; ++m)
            t.ideal[m] = ((m & 1) ? -1 : 1) / (xreal(m) * xreal(m - 1) * pow(rho, m - 1));
        const int top = top_index(rho);
        // running product calP_{n+1}(rho + s) as a polynomial in s
        std::vector<xreal> prod(M + 1, xreal(0));
        prod[0] = rho;
        if (M >= 1) prod[1] = 1;
        for (int n = 1; n <= top; ++n) {
            const xreal c = V_ ? rho - xreal(n) / xreal(V_) : rho;
            for (int j = M; j >= 0; --j) prod[j] = prod[j] * c + (j ? prod[j - 1] : xreal(0));
            for (int j = 0; j <= M; ++j) t.poly[j] -= prod[j] * B_[n] / xreal(n + 1);
        }
        return t;
    }

    /// beta F^{(m)}(rho), m <= 6.
    xreal derivative(const xreal& rho, int m) const {
        if (m < 0 || m > max_order) throw guard_error("free energy: derivative order must be in 0..6");
        auto t = taylor(rho, m);
        return xreal(factorial(m)) * (t.ideal[m] + t.poly[m]);
    }
    double operator()(double rho, int m = 0) const { return double(derivative(xreal(rho), m)); }

    /// Highest coefficient index contributing at rho.
    int top_index(const xreal& rho) const {
        int top = coefficients();
        if (V_) {
            long k = long(floor(rho * xreal(V_) + xreal(1e-9)));
            if (k > top) throw guard_error("free energy: " + std::to_string(k) + " coefficients needed at this density, " +
                                           std::to_string(top) + " available");
            top = int(k);
        }
        return top;
    }

private:
    CanonicalFreeEnergy(long V, std::vector<xreal> B) : V_(V), B_(std::move(B)) {}
    static void check_rho(const xreal& rho) {
        if (!(rho > 0 && rho < 1)) throw std::domain_error("free energy: rho must lie in (0, 1)");
    }
    long V_;
    std::vector<xreal> B_;
};

/// beta S = -(1/V) log(V^N/N!) - rho(log rho - 1), so that -log Z(N)/V = beta F(rho) + beta S.
inline xreal stirling_remainder(long N, long V) {
    if (N < 1 || N > V) throw guard_error("stirling_remainder: 1 <= N <= |Lambda|");
    const xreal rho = xreal(N) / xreal(V);
    return -log_ideal(N, V) / xreal(V) - rho * (log(rho) - 1);
}

// ---- thermodynamic series ----

using Series = std::vector<double>;  // coefficient of t^k at index k

inline Series series_mul(const Series& a, const Series& b, int K) {
    Series c(K + 1, 0.0);
    for (int i = 0; i <= K && i < int(a.size()); ++i)
        for (int j = 0; i + j <= K && j < int(b.size()); ++j) c[i + j] += a[i] * b[j];
    return c;
}

/// exp of a series with zero constant term.
inline Series series_exp(const Series& a, int K) {
    Series r(K + 1, 0.0), term(K + 1, 0.0);
    r[0] = term[0] = 1;
    for (int k = 1; k <= K; ++k) {
        term = series_mul(term, a, K);
        for (auto& v : term) v /= k;
        for (int j = 0; j <= K; ++j) r[j] += term[j];
    }
    return r;
}

/// sum_k c_k s(t)^k for a series s with zero constant term.
inline Series series_compose(const Series& c, const Series& s, int K) {
    Series r(K + 1, 0.0), pw(K + 1, 0.0);
    pw[0] = 1;
    for (int k = 0; k < int(c.size()) && k <= K; ++k) {
        for (int j = 0; j <= K; ++j) r[j] += c[k] * pw[j];
        pw = series_mul(pw, s, K);
    }
    return r;
}

struct VirialSeries {
    int order;
    std::vector<double> beta_n;  // index n = 1..order
    Series mu;                   // beta mu - log rho
    Series pressure;             // beta p(rho)
    Series density;              // rho(z)
    Series fugacity_pressure;    // beta p(z); coefficient k is b_k

    /// rho(z) by fixed-point iteration of rho = z exp(sum beta_n rho^n).
    double density_at(double z, int iterations = 200) const {
        double rho = z;
        for (int it = 0; it < iterations; ++it) {
            double s = 0;
            for (int n = 1; n <= order; ++n) s += beta_n[n] * std::pow(rho, n);
            rho = z * std::exp(s);
        }
        return rho;
    }
    double beta_mu(double rho) const { return std::log(rho) + eval(mu, rho); }
    double beta_p(double rho) const { return eval(pressure, rho); }

    static double eval(const Series& s, double t) {
        double r = 0;
        for (int k = int(s.size()) - 1; k >= 0; --k) r = r * t + s[k];
        return r;
    }
};

inline VirialSeries virial_series(const std::vector<double>& beta_irr, int order) {
    if (order < 1 || order > int(beta_irr.size())) throw guard_error("virial_series: order exceeds available beta_n");
    VirialSeries v;
    v.order = order;
    v.beta_n.assign(order + 1, 0.0);
    for (int n = 1; n <= order; ++n) v.beta_n[n] = beta_irr[n - 1];
    const int K = order + 1;
    v.mu.assign(K + 1, 0.0);
    v.pressure.assign(K + 1, 0.0);
    v.pressure[1] = 1;
    for (int n = 1; n <= order; ++n) {
        v.mu[n] = -v.beta_n[n];
        v.pressure[n + 1] = -n * v.beta_n[n] / (n + 1);
    }
    // rho(z) = z exp(sum beta_n rho^n); each pass fixes one more coefficient
    Series sb(K + 1, 0.0);
    for (int n = 1; n <= order; ++n) sb[n] = v.beta_n[n];
    Series rho(K + 1, 0.0);
    rho[1] = 1;
    for (int it = 0; it < K; ++it) {
        Series e = series_exp(series_compose(sb, rho, K), K);
        rho.assign(K + 1, 0.0);
        for (int j = 0; j < K; ++j) rho[j + 1] = e[j];
    }
    v.density = rho;
    v.fugacity_pressure = series_compose(v.pressure, rho, K);
    return v;
}

/// Coefficient-wise residual of the Legendre identity
/// rho(log rho-1) - sum beta_n rho^{n+1}/(n+1) = rho beta mu(rho) - beta p(rho), orders 1..order+1.
inline std::vector<double> legendre_residuals(const VirialSeries& v) {
    const int K = v.order + 1;
    // rho log rho cancels on both sides
    Series lhs(K + 1, 0.0);
    lhs[1] = -1;
    for (int n = 1; n <= v.order; ++n) lhs[n + 1] = -v.beta_n[n] / (n + 1);
    Series rhs = series_mul({0, 1}, v.mu, K);
    for (int k = 0; k <= K; ++k) rhs[k] -= v.pressure[k];
    std::vector<double> res;
    for (int k = 1; k <= K; ++k) res.push_back(lhs[k] - rhs[k]);
    return res;
}

}  // namespace lgce
