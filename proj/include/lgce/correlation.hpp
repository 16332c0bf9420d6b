#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lgce/bounds.hpp"
#include "lgce/lattice.hpp"
#include "lgce/oracle.hpp"

namespace lgce {

/// (N/V)^2 [ s + s/N + C e^{-r} ] + C1/V, s = (e^{4 beta J}-1) 1{r=1} + 1{r=0}.
inline double bound_rhs(double r, int N, long V, double beta, double J, double C, double C1) {
    const double s = (std::abs(r - 1.0) < 1e-12 ? std::expm1(4.0 * beta * J) : 0.0) + (r == 0.0 ? 1.0 : 0.0);
    const double rho = double(N) / double(V);
    return rho * rho * (s + s / N + C * std::exp(-r)) + C1 / double(V);
}

inline double bound_rhs(const LatticeSpec& lat, long q1, long q2, int N, double beta, double J, double C, double C1) {
    return bound_rhs(lat.distance(q1, q2), N, lat.size(), beta, J, C, C1);
}

struct CorrelationCase {
    LatticeSpec lattice;
    PotentialSpec pot;
    double beta;
    int N;
};

struct CorrelationRow {
    long q1, q2;
    double dist;
    double u2;
    double rhs;
    bool feasible;
};

struct Calibration {
    double C_min = 0, C1_min = 0;
    size_t binding_case = 0;
    long binding_q1 = 0, binding_q2 = 0;
    bool feasible = false;
    std::vector<bool> in_regime;  // N/V <= R_C/2 per case
};

/// Smallest (C, C1) on the grid C = k * C_step (k <= C_cap / C_step), C1 exact given C,
/// minimizing C + C1 (ties to smaller C), such that every pair in every case satisfies the bound.
inline Calibration calibrate_constants(const std::vector<CorrelationCase>& cases, double C_step = 0.01,
                                       double C_cap = 100.0, double C1_cap = 1e4) {
    struct Pair {
        size_t c;
        long q1, q2;
        double slack;  // |u2| - structural part
        double a;      // coefficient of C
        double V;
    };
    std::vector<Pair> pairs;
    Calibration cal;
    for (size_t i = 0; i < cases.size(); ++i) {
        const auto& k = cases[i];
        const auto T = exact_correlations(k.lattice, k.pot, k.beta, k.N);
        const long V = k.lattice.size();
        const double rho = double(k.N) / double(V);
        cal.in_regime.push_back(rho <= radius_canonical(k.lattice.dimension(), k.pot, k.beta) / 2.0);
        for (long a = 0; a < V; ++a)
            for (long b = 0; b < V; ++b) {
                const double r = k.lattice.distance(a, b);
                const double base = bound_rhs(r, k.N, V, k.beta, k.pot.J(), 0.0, 0.0);
                pairs.push_back({i, a, b, std::abs(T.u2(a, b)) - base, rho * rho * std::exp(-r), double(V)});
            }
    }
    double best = inf;
    const long steps = long(std::llround(C_cap / C_step));
    for (long s = 0; s <= steps; ++s) {
        const double C = s * C_step;
        double C1 = 0;
        const Pair* bind = nullptr;
        for (const auto& p : pairs) {
            const double need = (p.slack - C * p.a) * p.V;
            if (need > C1) {
                C1 = need;
                bind = &p;
            }
        }
        if (C1 > C1_cap) continue;
        if (C + C1 < best) {
            best = C + C1;
            cal.C_min = C;
            cal.C1_min = C1;
            cal.feasible = true;
            if (bind) {
                cal.binding_case = bind->c;
                cal.binding_q1 = bind->q1;
                cal.binding_q2 = bind->q2;
            }
        }
    }
    return cal;
}

inline std::vector<CorrelationRow> correlation_rows(const CorrelationCase& k, double C, double C1) {
    const auto T = exact_correlations(k.lattice, k.pot, k.beta, k.N);
    std::vector<CorrelationRow> rows;
    const long V = k.lattice.size();
    for (long a = 0; a < V; ++a)
        for (long b = 0; b < V; ++b) {
            const double r = k.lattice.distance(a, b);
            const double rhs = bound_rhs(r, k.N, V, k.beta, k.pot.J(), C, C1);
            const double u = T.u2(a, b);
            // relative rounding allowance for the calibrated binding pair
            rows.push_back({a, b, r, u, rhs, std::abs(u) <= rhs * (1 + 1e-12) + 1e-300});
        }
    return rows;
}

struct DecayFit {
    double rate = 0;              // -slope of log|u2(r)|, r = 2..L/2
    int points = 0;
    int dropped = 0;              // rows with |u2| underflow
    double excess_rate = 0;       // -slope of log|u2(r) - u2(L/2)|, r >= 1; +inf for finite support
    int excess_points = 0;
    std::vector<double> u2;       // u2(0, r), r = 0..L/2
};

inline std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

/// Least-squares decay rate of |u2(r)| on a periodic chain.
inline DecayFit decay_fit(const LatticeSpec& lat, const PotentialSpec& pot, double beta, int N) {
    if (lat.dimension() != 1 || lat.kind() != BoundaryKind::Periodic || lat.side() < 10)
        throw guard_error("decay_fit: periodic d = 1 with L >= 10 required");
    const auto T = exact_correlations(lat, pot, beta, N);
    const int h = lat.side() / 2;
    DecayFit f;
    for (int r = 0; r <= h; ++r) f.u2.push_back(T.u2(0, r));
    std::vector<double> xs, ys;
    for (int r = 2; r <= h; ++r) {
        const double a = std::abs(f.u2[r]);
        if (!(a > 1e-300)) {
            ++f.dropped;
            continue;
        }
        xs.push_back(r);
        ys.push_back(std::log(a));
    }
    f.points = int(xs.size());
    f.rate = f.points >= 2 ? -linear_fit(xs, ys).first : 0.0;
    xs.clear();
    ys.clear();
    const double tail = f.u2[h];
    const double tol = 1e-13 * std::abs(tail) + 1e-300;
    for (int r = 1; r < h; ++r) {
        const double e = std::abs(f.u2[r] - tail);
        if (e <= tol) continue;
        xs.push_back(r);
        ys.push_back(std::log(e));
    }
    f.excess_points = int(xs.size());
    const bool finite_support = xs.empty() || xs.back() < h - 1;
    if (f.excess_points >= 2 && !finite_support)
        f.excess_rate = -linear_fit(xs, ys).first;
    else
        f.excess_rate = finite_support ? inf : 0.0;
    return f;
}

}  // namespace lgce
