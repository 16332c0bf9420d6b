#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "lgce/lattice.hpp"
#include "lgce/numeric.hpp"

namespace lgce {

/// g(a) = ln[1 + u(1 - e^{-a})] / (e^a [1 + u(1 - e^{-a})])
inline double F_objective(double u, double a) {
    const double q = u * -std::expm1(-a);
    return std::log1p(q) / (std::exp(a) * (1.0 + q));
}

struct FMax {
    double a_star;
    double value;
};

/// max over a in (1e-8, 20] of g(a): log-spaced pre-scan then golden section around the best cell.
inline FMax maximize_F(double u) {
    if (!(u > 0)) throw std::invalid_argument("maximize_F: u must be > 0");
    const double lo = 1e-8, hi = 20.0;
    const int cells = 4000;
    const double t0 = std::log(lo), dt = (std::log(hi) - t0) / cells;
    auto at = [&](int k) { return k <= 0 ? lo : (k >= cells ? hi : std::exp(t0 + k * dt)); };
    int best = 0;
    double bv = -inf;
    for (int k = 0; k <= cells; ++k) {
        double v = F_objective(u, at(k));
        if (v > bv) {
            bv = v;
            best = k;
        }
    }
    const double x = golden_max([u](double t) { return F_objective(u, t); }, at(best - 1), at(best + 1));
    return {x, F_objective(u, x)};
}

struct RadiusReport {
    int d;
    double J;
    double beta;
    double R_C, R_C_bar, h_IS, M_IS, M_LG, R_V;
    double a_star_RC, a_star_RCbar;
};

/// R_C = F(e^{-beta B}) / (e^{beta B} Cbar)
inline std::pair<double, double> radius_canonical_arg(int d, const PotentialSpec& pot, double beta) {
    const auto k = model_constants(d, pot, beta);
    const auto m = maximize_F(std::exp(-beta * k.B));
    return {m.value / (std::exp(beta * k.B) * k.C_bar), m.a_star};
}

/// Rbar_C = F(e^{2 beta B}) / (e^{2 beta B} C)
inline std::pair<double, double> radius_canonical_penrose_arg(int d, const PotentialSpec& pot, double beta) {
    const auto k = model_constants(d, pot, beta);
    const auto m = maximize_F(std::exp(2.0 * beta * k.B));
    return {m.value / (std::exp(2.0 * beta * k.B) * k.C), m.a_star};
}

inline double radius_canonical(int d, const PotentialSpec& pot, double beta) {
    return radius_canonical_arg(d, pot, beta).first;
}

inline double radius_canonical_penrose(int d, const PotentialSpec& pot, double beta) {
    return radius_canonical_penrose_arg(d, pot, beta).first;
}

/// h_IS = -(2d + 1 + 2 log(2d) + log 2)/(2 beta), M_IS = 2 h_IS - 4dJ. beta = 0 gives -inf.
inline std::pair<double, double> contour_threshold(int d, const PotentialSpec& pot, double beta) {
    if (beta < 0) throw std::invalid_argument("beta must be >= 0");
    if (beta == 0) return {-inf, -inf};
    const double h = -(2.0 * d + 1.0 + 2.0 * std::log(2.0 * d) + std::log(2.0)) / (2.0 * beta);
    return {h, 2.0 * h - 4.0 * d * pot.J()};
}

/// M_LG = -log(e^{beta B + 1} Cbar)/beta. beta = 0 gives -inf.
inline double lattice_gas_threshold(int d, const PotentialSpec& pot, double beta) {
    if (beta < 0) throw std::invalid_argument("beta must be >= 0");
    if (beta == 0) return -inf;
    const auto k = model_constants(d, pot, beta);
    return -(beta * k.B + 1.0 + std::log(k.C_bar)) / beta;
}

/// R_V = (2 e^{1 + beta (B + 4J)} Cbar)^{-1}
inline double radius_virial(int d, const PotentialSpec& pot, double beta) {
    const auto k = model_constants(d, pot, beta);
    return 1.0 / (2.0 * std::exp(1.0 + beta * (k.B + 4.0 * pot.J())) * k.C_bar);
}

inline RadiusReport radius_report(int d, const PotentialSpec& pot, double beta) {
    RadiusReport r{d, pot.J(), beta, 0, 0, 0, 0, 0, 0, 0, 0};
    std::tie(r.R_C, r.a_star_RC) = radius_canonical_arg(d, pot, beta);
    std::tie(r.R_C_bar, r.a_star_RCbar) = radius_canonical_penrose_arg(d, pot, beta);
    std::tie(r.h_IS, r.M_IS) = contour_threshold(d, pot, beta);
    r.M_LG = lattice_gas_threshold(d, pot, beta);
    r.R_V = radius_virial(d, pot, beta);
    return r;
}

/// Uniform grid of `count` points on [lo, hi].
inline std::vector<double> linear_grid(double lo, double hi, int count) {
    if (count < 1) throw config_error("grid: count must be >= 1");
    std::vector<double> g(count);
    for (int k = 0; k < count; ++k) g[k] = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
    return g;
}

/// Sign changes along a sequence, skipping exact zeros.
inline int sign_changes(const std::vector<double>& v) {
    int changes = 0, last = 0;
    for (double x : v) {
        int s = (x > 0) - (x < 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

}  // namespace lgce
