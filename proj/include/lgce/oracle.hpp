#pragma once

#include <bit>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "lgce/lattice.hpp"
#include "lgce/numeric.hpp"

namespace lgce {

enum class TableMethod { Enumeration, TransferMatrix };

/// Exact log Z(N), N = 0..|Lambda|. Impossible N carry -inf.
struct CanonicalTable {
    LatticeSpec lattice;
    PotentialSpec pot;
    double beta;
    TableMethod method;
    std::vector<xreal> log_z;

    long volume() const { return lattice.size(); }
    bool allowed(long N) const { return N >= 0 && N < long(log_z.size()) && !is_neg_inf(log_z[N]); }
    double logz(long N) const { return (N < 0 || N >= long(log_z.size())) ? -inf : double(log_z[N]); }
    /// Largest N with Z(N) > 0.
    long max_occupancy() const {
        long n = long(log_z.size()) - 1;
        while (n > 0 && !allowed(n)) --n;
        return n;
    }
};

namespace detail {

// Bond count t(S) = sum_{pairs in S} m + sum_{x in S} field(x), for subsets of a box with <= 30 sites.
struct SubsetEnergy {
    std::vector<std::vector<std::pair<uint32_t, int>>> masks;  // per x: (mask of y > x, multiplicity)
    std::vector<int> field;
    int max_bonds = 0;

    explicit SubsetEnergy(const Interaction& I) : masks(I.volume), field(I.field) {
        for (long x = 0; x < I.volume; ++x) {
            for (auto [y, m] : I.nbrs[x]) {
                if (y <= x) continue;
                auto it = std::find_if(masks[x].begin(), masks[x].end(), [m = m](auto& p) { return p.second == m; });
                if (it == masks[x].end())
                    masks[x].emplace_back(uint32_t(1) << y, m);
                else
                    it->first |= uint32_t(1) << y;
                max_bonds += m;
            }
            max_bonds += field[x];
        }
    }

    int operator()(uint32_t S) const {
        int t = 0;
        for (uint32_t r = S; r; r &= r - 1) {
            int x = std::countr_zero(r);
            t += field[x];
            for (auto [mk, m] : masks[x]) t += m * std::popcount(S & mk);
        }
        return t;
    }
};

inline unsigned resolve_threads(unsigned threads) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    return threads;
}

}  // namespace detail

/// Integer histogram c[N][t]: number of N-subsets with t bonds. Independent of beta.
inline std::vector<std::vector<uint64_t>> bond_histogram(const LatticeSpec& lat, const PotentialSpec& pot,
                                                         unsigned threads = 1) {
    const long V = lat.size();
    if (V > 24) throw guard_error("enumeration: |Lambda| <= 24 required");
    const auto I = interaction(lat, pot);
    const detail::SubsetEnergy E(I);
    const uint64_t total = uint64_t(1) << V;
    threads = unsigned(std::min<uint64_t>(detail::resolve_threads(threads), total));
    using Hist = std::vector<std::vector<uint64_t>>;
    std::vector<Hist> parts(threads, Hist(V + 1, std::vector<uint64_t>(E.max_bonds + 1, 0)));
    auto work = [&](unsigned k) {
        uint64_t lo = total * k / threads, hi = total * (k + 1) / threads;
        auto& h = parts[k];
        for (uint64_t S = lo; S < hi; ++S) ++h[std::popcount(S)][E(uint32_t(S))];
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work, k);
        for (auto& t : pool) t.join();
    }
    Hist out = parts[0];
    for (unsigned k = 1; k < threads; ++k)
        for (long N = 0; N <= V; ++N)
            for (int t = 0; t <= E.max_bonds; ++t) out[N][t] += parts[k][N][t];
    return out;
}

/// Z(N) = sum over N-subsets of e^{-beta H}, by exhaustive enumeration.
inline CanonicalTable exact_canonical_table(const LatticeSpec& lat, const PotentialSpec& pot, double beta,
                                            unsigned threads = 1) {
    if (beta < 0) throw std::invalid_argument("beta must be >= 0");
    const auto h = bond_histogram(lat, pot, threads);
    const xreal a = xreal(-beta) * xreal(pot.well());
    CanonicalTable T{lat, pot, beta, TableMethod::Enumeration, {}};
    for (const auto& row : h) {
        xreal z = 0;
        for (size_t t = 0; t < row.size(); ++t)
            if (row[t]) z += xreal(row[t]) * exp(a * xreal(t));
        T.log_z.push_back(z > 0 ? xreal(log(z)) : xneg_inf());
    }
    return T;
}

/// d = 1 fugacity-polynomial transfer matrix; state = occupancy of the last site.
inline CanonicalTable transfer_matrix_table(int L, const PotentialSpec& pot, double beta, Boundary b) {
    if (pot.kind() != PotentialKind::Standard) throw guard_error("transfer matrix: Standard potential only");
    if (b.kind == BoundaryKind::Fixed) throw guard_error("transfer matrix: Zero or Periodic boundary only");
    if (L < 2 || L > 4096) throw guard_error("transfer matrix: 2 <= L <= 4096 required");
    if (beta < 0) throw std::invalid_argument("beta must be >= 0");
    LatticeSpec lat(1, L, b);
    using Poly = std::vector<xreal>;
    const xreal w = exp(xreal(4.0 * beta * pot.J()));
    // a0/a1: polynomial weight of chains ending empty/occupied
    auto run = [&](Poly a0, Poly a1, int first_state) {
        for (int k = 1; k < L; ++k) {
            Poly n0(L + 1), n1(L + 1);
            for (int i = 0; i <= k; ++i) n0[i] = a0[i] + a1[i];
            for (int i = 1; i <= k + 1; ++i) n1[i] = a0[i - 1] + w * a1[i - 1];
            a0 = std::move(n0);
            a1 = std::move(n1);
        }
        Poly z(L + 1);
        for (int i = 0; i <= L; ++i) {
            z[i] = a0[i] + a1[i];
            if (b.kind == BoundaryKind::Periodic && first_state == 1) z[i] += (w - 1) * a1[i];
        }
        return z;
    };
    Poly z;
    if (b.kind == BoundaryKind::Periodic) {
        Poly e0(L + 1), e1(L + 1), o0(L + 1), o1(L + 1);
        e0[0] = 1;
        o1[1] = 1;
        auto ze = run(e0, e1, 0), zo = run(o0, o1, 1);
        z.resize(L + 1);
        for (int i = 0; i <= L; ++i) z[i] = ze[i] + zo[i];
    } else {
        Poly a0(L + 1), a1(L + 1);
        a0[0] = 1;
        a1[1] = 1;
        z = run(a0, a1, -1);
    }
    CanonicalTable T{lat, pot, beta, TableMethod::TransferMatrix, {}};
    for (const auto& c : z) T.log_z.push_back(c > 0 ? xreal(log(c)) : xneg_inf());
    return T;
}

/// Grand-canonical quantities at chemical potential mu.
struct GrandCanonicalEval {
    double mu;
    double beta;
    long volume;
    xreal log_xi;
    std::vector<xreal> log_prob;

    /// beta p = log Xi / |Lambda|
    double beta_pressure() const { return double(log_xi) / double(volume); }
    double pressure() const { return beta_pressure() / beta; }
    double prob(long N) const { return (N < 0 || N >= long(log_prob.size())) ? 0.0 : double(exp(log_prob[N])); }
    xreal mean() const {
        xreal s = 0;
        for (size_t N = 0; N < log_prob.size(); ++N)
            if (!is_neg_inf(log_prob[N])) s += xreal(N) * exp(log_prob[N]);
        return s;
    }
    xreal variance() const {
        xreal m = mean(), s = 0;
        for (size_t N = 0; N < log_prob.size(); ++N)
            if (!is_neg_inf(log_prob[N])) s += (xreal(N) - m) * (xreal(N) - m) * exp(log_prob[N]);
        return s;
    }
};

/// Same as grand_canonical_eval but parametrized by beta*mu.
inline GrandCanonicalEval grand_canonical_at(const CanonicalTable& T, const xreal& beta_mu) {
    std::vector<xreal> lw(T.log_z.size());
    for (size_t N = 0; N < lw.size(); ++N)
        lw[N] = is_neg_inf(T.log_z[N]) ? xneg_inf() : xreal(beta_mu * xreal(N) + T.log_z[N]);
    xreal lx = log_sum_exp(lw);
    GrandCanonicalEval G{T.beta > 0 ? double(beta_mu / xreal(T.beta)) : 0.0, T.beta, T.volume(), lx, {}};
    for (auto& x : lw) G.log_prob.push_back(is_neg_inf(x) ? xneg_inf() : xreal(x - lx));
    return G;
}

inline GrandCanonicalEval grand_canonical_eval(const CanonicalTable& T, double mu) {
    auto G = grand_canonical_at(T, xreal(T.beta) * xreal(mu));
    G.mu = mu;
    return G;
}

/// One- and two-point functions at fixed N on a periodic box.
struct CorrelationTable {
    long volume;
    int N;
    std::vector<double> rho1;
    std::vector<double> rho2;  // row-major volume x volume

    double r1(long q) const { return rho1[q]; }
    double r2(long a, long b) const { return rho2[a * volume + b]; }
    double u2(long a, long b) const { return r2(a, b) - r1(a) * r1(b); }
};

inline CorrelationTable exact_correlations(const LatticeSpec& lat, const PotentialSpec& pot, double beta, int N) {
    if (lat.kind() != BoundaryKind::Periodic) throw guard_error("correlations: periodic boundary required");
    const long V = lat.size();
    if (V > 20) throw guard_error("correlations: |Lambda| <= 20 required");
    if (N < 2 || N > V) throw guard_error("correlations: 2 <= N <= |Lambda| required");
    const auto I = interaction(lat, pot);
    const detail::SubsetEnergy E(I);
    const double a = -beta * pot.well();
    std::vector<double> r1(V, 0.0), r2(V * V, 0.0);
    double Z = 0;
    const uint32_t last = uint32_t(1) << V;
    for (uint32_t S = (uint32_t(1) << N) - 1; S < last;) {
        const double w = std::exp(a * E(S));
        Z += w;
        for (uint32_t r = S; r; r &= r - 1) {
            int x = std::countr_zero(r);
            r1[x] += w;
            for (uint32_t s = S & ~(uint32_t(1) << x); s; s &= s - 1) r2[x * V + std::countr_zero(s)] += w;
        }
        uint32_t c = S & (~S + 1), rr = S + c;  // Gosper
        S = (((rr ^ S) >> 2) / c) | rr;
    }
    for (auto& v : r1) v /= Z;
    for (auto& v : r2) v /= Z;
    return {V, N, std::move(r1), std::move(r2)};
}

/// Fixed-magnetization Ising sum against prefactor * Z_gas(N).
/// Zero boundary pairs with -1 Ising walls; Fixed(gamma) with +1 walls on gamma.
inline std::pair<double, double> ising_gas_consistency(const LatticeSpec& lat, const PotentialSpec& pot, double beta,
                                                       double m) {
    const long V = lat.size();
    if (V > 20) throw guard_error("ising_gas_consistency: |Lambda| <= 20 required");
    const double Nd = (m + 1.0) * double(V) / 2.0;
    const long N = std::lround(Nd);
    if (std::abs(Nd - double(N)) > 1e-9 || N < 0 || N > V)
        throw std::invalid_argument("ising_gas_consistency: m|Lambda| does not give an integral particle number");
    LatticeSpec walls = lat.kind() == BoundaryKind::Zero ? LatticeSpec(lat.dimension(), lat.side(), Boundary::fixed({}))
                                                         : lat;
    const auto I = interaction(walls, pot);
    double lhs = 0;
    for (uint32_t S = 0; S < (uint32_t(1) << V); ++S) {
        if (std::popcount(S) != N) continue;
        std::vector<int> sigma(V);
        for (long x = 0; x < V; ++x) sigma[x] = (S >> x) & 1 ? 1 : -1;
        lhs += std::exp(-beta * ising_hamiltonian(sigma, walls, pot));
    }
    long ext = 0, ngam = 0;
    for (long x = 0; x < V; ++x) {
        ext += I.exterior[x];
        ngam += I.field[x];
    }
    const double J = pot.J();
    const double z = double(pot.offsets(lat.dimension()).size());
    const double all_bonds = double(I.bonds + ext);
    const double pref = std::exp(-beta * (2.0 * J * z * double(N) - J * all_bonds + 2.0 * J * double(ngam)));
    const auto T = exact_canonical_table(lat, pot, beta);
    return {lhs, pref * std::exp(T.logz(N))};
}

}  // namespace lgce
