#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lgce/numeric.hpp"

namespace lgce {

using Site = std::vector<int>;

enum class BoundaryKind { Zero, Periodic, Fixed };

struct Boundary {
    BoundaryKind kind = BoundaryKind::Zero;
    std::vector<Site> gamma;  // occupied exterior sites, Fixed only

    static Boundary zero() { return {BoundaryKind::Zero, {}}; }
    static Boundary periodic() { return {BoundaryKind::Periodic, {}}; }
    static Boundary fixed(std::vector<Site> g) { return {BoundaryKind::Fixed, std::move(g)}; }
};

enum class PotentialKind { Standard, Kac };

/// Hard core at the origin, -4J on the support, zero elsewhere.
/// Standard: support is the unit sphere. Kac: 0 < |x| <= R (Euclidean).
class PotentialSpec {
public:
    static PotentialSpec standard(double J) {
        if (!(J > 0)) throw config_error("potential: coupling J must be > 0");
        return PotentialSpec(PotentialKind::Standard, J, 1);
    }
    static PotentialSpec kac(int R, double J = 1.0) {
        if (R < 1) throw config_error("potential.range: Kac range R must be >= 1");
        if (!(J > 0)) throw config_error("potential: coupling J must be > 0");
        return PotentialSpec(PotentialKind::Kac, J, R);
    }

    PotentialKind kind() const { return kind_; }
    double J() const { return J_; }
    int range() const { return R_; }
    int support() const { return R_; }
    double well() const { return -4.0 * J_; }

    bool interacts(const Site& v) const {
        long s1 = 0, s2 = 0;
        for (int c : v) {
            s1 += std::abs(c);
            s2 += long(c) * c;
        }
        if (s2 == 0) return false;
        if (kind_ == PotentialKind::Standard) return s1 == 1;
        return s2 <= long(R_) * R_;
    }

    /// All nonzero displacements in the support, lexicographic order.
    std::vector<Site> offsets(int d) const {
        std::vector<Site> out;
        Site v(d, -R_);
        while (true) {
            if (interacts(v)) out.push_back(v);
            int k = 0;
            while (k < d && v[k] == R_) v[k++] = -R_;
            if (k == d) break;
            ++v[k];
        }
        return out;
    }

private:
    PotentialSpec(PotentialKind k, double J, int R) : kind_(k), J_(J), R_(R) {}
    PotentialKind kind_;
    double J_;
    int R_;
};

class LatticeSpec {
public:
    LatticeSpec(int d, int L, Boundary b = Boundary::zero()) : d_(d), L_(L), b_(std::move(b)) {
        if (d < 1) throw config_error("dimension: must be >= 1");
        if (L < 2) throw config_error("side: must be >= 2");
        double v = std::pow(double(L), d);
        if (v > 4e18) throw guard_error("lattice: L^d overflows");
        size_ = 1;
        for (int i = 0; i < d; ++i) size_ *= L;
        std::set<Site> seen;
        for (const auto& g : b_.gamma) {
            if (int(g.size()) != d) throw config_error("boundary: fixed site has wrong dimension");
            if (contains(g)) throw config_error("boundary: fixed site lies inside the box");
            if (!seen.insert(g).second) throw config_error("boundary: duplicate fixed site");
        }
    }

    int dimension() const { return d_; }
    int side() const { return L_; }
    const Boundary& boundary() const { return b_; }
    BoundaryKind kind() const { return b_.kind; }
    long size() const { return size_; }

    bool contains(const Site& s) const {
        for (int c : s)
            if (c < 0 || c >= L_) return false;
        return true;
    }
    long index(const Site& s) const {
        long i = 0;
        for (int k = d_ - 1; k >= 0; --k) i = i * L_ + s[k];
        return i;
    }
    Site coords(long i) const {
        Site s(d_);
        for (int k = 0; k < d_; ++k) {
            s[k] = int(i % L_);
            i /= L_;
        }
        return s;
    }
    int wrap(int c) const { return ((c % L_) + L_) % L_; }

    /// Minimum-image Euclidean distance on the torus, plain Euclidean otherwise.
    double distance(long a, long b) const {
        auto x = coords(a), y = coords(b);
        double s = 0;
        for (int k = 0; k < d_; ++k) {
            int t = std::abs(x[k] - y[k]);
            if (b_.kind == BoundaryKind::Periodic) t = std::min(t, L_ - t);
            s += double(t) * t;
        }
        return std::sqrt(s);
    }

private:
    int d_, L_;
    Boundary b_;
    long size_;
};

/// Pair structure induced by a potential on a finite box.
/// Periodic bonds are counted with multiplicity (the 2x2 torus has 8 bonds).
struct Interaction {
    long volume = 0;
    std::vector<std::vector<std::pair<long, int>>> nbrs;  // (site, multiplicity), y != x
    std::vector<int> field;     // occupied gamma sites in range of x
    std::vector<int> exterior;  // exterior sites in range of x (Fixed only)
    long bonds = 0;

    int multiplicity(long x, long y) const {
        for (auto [z, m] : nbrs[x])
            if (z == y) return m;
        return 0;
    }
    int degree(long x) const {
        int s = 0;
        for (auto [z, m] : nbrs[x]) s += m;
        return s;
    }
};

inline Interaction interaction(const LatticeSpec& lat, const PotentialSpec& pot) {
    const int d = lat.dimension();
    const bool per = lat.kind() == BoundaryKind::Periodic;
    if (per && pot.support() >= lat.side())
        throw guard_error("periodic lattice: potential range must be < side");
    const auto S = pot.offsets(d);
    Interaction I;
    I.volume = lat.size();
    I.nbrs.resize(I.volume);
    I.field.assign(I.volume, 0);
    I.exterior.assign(I.volume, 0);
    std::set<Site> gamma(lat.boundary().gamma.begin(), lat.boundary().gamma.end());
    long twice = 0;
    for (long x = 0; x < I.volume; ++x) {
        const Site cx = lat.coords(x);
        std::vector<std::pair<long, int>> row;
        for (const auto& v : S) {
            Site y(d);
            for (int k = 0; k < d; ++k) y[k] = cx[k] + v[k];
            if (per)
                for (auto& c : y) c = lat.wrap(c);
            if (!lat.contains(y)) {
                if (lat.kind() == BoundaryKind::Fixed) {
                    ++I.exterior[x];
                    if (gamma.count(y)) ++I.field[x];
                }
                continue;
            }
            long iy = lat.index(y);
            auto it = std::find_if(row.begin(), row.end(), [&](auto& p) { return p.first == iy; });
            if (it == row.end())
                row.emplace_back(iy, 1);
            else
                ++it->second;
            ++twice;
        }
        std::sort(row.begin(), row.end());
        I.nbrs[x] = std::move(row);
    }
    I.bonds = twice / 2;
    return I;
}

/// Exterior sites within range of the box, sorted.
inline std::vector<Site> exterior_shell(const LatticeSpec& lat, const PotentialSpec& pot) {
    std::set<Site> out;
    const auto S = pot.offsets(lat.dimension());
    for (long x = 0; x < lat.size(); ++x) {
        Site cx = lat.coords(x);
        for (const auto& v : S) {
            Site y = cx;
            for (int k = 0; k < lat.dimension(); ++k) y[k] += v[k];
            if (!lat.contains(y)) out.insert(y);
        }
    }
    return {out.begin(), out.end()};
}

// ---- configurations ----

inline std::vector<int> spins_from_occupancy(const std::vector<int>& eta) {
    std::vector<int> s(eta.size());
    for (size_t i = 0; i < eta.size(); ++i) s[i] = 2 * eta[i] - 1;
    return s;
}

inline std::vector<int> occupancy_from_spins(const std::vector<int>& sigma) {
    std::vector<int> e(sigma.size());
    for (size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] != 1 && sigma[i] != -1) throw std::invalid_argument("spin value outside {-1,+1}");
        e[i] = (sigma[i] + 1) / 2;
    }
    return e;
}

inline double magnetization(const std::vector<int>& sigma) {
    long s = 0;
    for (int v : sigma) s += v;
    return double(s) / double(sigma.size());
}

// ---- Hamiltonians ----

/// -J sum over bonds of sigma sigma'. Zero: open box. Fixed: walls +1 on gamma, -1 elsewhere.
inline double ising_hamiltonian(const std::vector<int>& sigma, const LatticeSpec& lat, const PotentialSpec& pot) {
    if (long(sigma.size()) != lat.size()) throw std::invalid_argument("spin configuration size mismatch");
    for (int s : sigma)
        if (s != 1 && s != -1) throw std::invalid_argument("spin value outside {-1,+1}");
    const auto I = interaction(lat, pot);
    long sum = 0;
    for (long x = 0; x < I.volume; ++x) {
        for (auto [y, m] : I.nbrs[x])
            if (y > x) sum += long(m) * sigma[x] * sigma[y];
        if (lat.kind() == BoundaryKind::Fixed) sum += long(2 * I.field[x] - I.exterior[x]) * sigma[x];
    }
    return -pot.J() * double(sum);
}

/// Lattice-gas energy with an explicit exclusion flag for hard-core overlaps.
struct GasEnergy {
    bool excluded = false;
    double value = 0.0;

    double weight(double beta) const { return excluded ? 0.0 : std::exp(-beta * value); }
};

inline GasEnergy lattice_gas_hamiltonian(const std::vector<Site>& x, const LatticeSpec& lat, const PotentialSpec& pot) {
    for (const auto& s : x)
        if (int(s.size()) != lat.dimension() || !lat.contains(s))
            throw std::out_of_range("particle coordinate outside the box");
    const auto I = interaction(lat, pot);
    std::vector<long> idx;
    for (const auto& s : x) idx.push_back(lat.index(s));
    GasEnergy e;
    long bonds = 0;
    for (size_t i = 0; i < idx.size(); ++i) {
        for (size_t j = i + 1; j < idx.size(); ++j) {
            if (idx[i] == idx[j]) {
                e.excluded = true;
                return e;
            }
            bonds += I.multiplicity(idx[i], idx[j]);
        }
        bonds += I.field[idx[i]];
    }
    e.value = pot.well() * double(bonds);
    return e;
}

/// Ising energy (lhs) against its lattice-gas rewriting (rhs), Zero boundary.
/// rhs = 2J sum deg(x) eta(x) - J|E| - 4J sum_{bonds} eta eta'.
inline std::pair<double, double> spin_gas_energy_identity(const std::vector<int>& sigma, const LatticeSpec& lat,
                                                          const PotentialSpec& pot) {
    if (lat.kind() != BoundaryKind::Zero) throw guard_error("spin_gas_energy_identity: requires Zero boundary");
    const double lhs = ising_hamiltonian(sigma, lat, pot);
    const auto eta = occupancy_from_spins(sigma);
    const auto I = interaction(lat, pot);
    long deg = 0, pairs = 0;
    for (long x = 0; x < I.volume; ++x) {
        if (!eta[x]) continue;
        deg += I.degree(x);
        for (auto [y, m] : I.nbrs[x])
            if (y > x && eta[y]) pairs += m;
    }
    const double J = pot.J();
    const double rhs = 2.0 * J * double(deg) - J * double(I.bonds) - 4.0 * J * double(pairs);
    return {lhs, rhs};
}

/// nu(x|gamma) = exp(-beta sum_j V(x - gamma_j)).
inline double boundary_weight(const Site& x, const LatticeSpec& lat, const PotentialSpec& pot, double beta) {
    if (lat.kind() != BoundaryKind::Fixed) throw guard_error("boundary_weight: requires Fixed boundary");
    if (!lat.contains(x)) throw std::out_of_range("boundary_weight: site outside the box");
    long h = 0;
    for (const auto& g : lat.boundary().gamma) {
        Site v(x.size());
        for (size_t k = 0; k < x.size(); ++k) v[k] = g[k] - x[k];
        if (pot.interacts(v)) ++h;
    }
    return std::exp(-beta * pot.well() * double(h));
}

struct ModelConstants {
    double B;      // stability
    double C;      // regularity
    double C_bar;  // tree-graph constant
};

/// Standard: B = 8Jd, C = 2d(e^{4bJ}-1)+1, Cbar = 1+2d(1-e^{-4bJ}).
/// Kac: 2d -> 2dR in each.
inline ModelConstants model_constants(int d, const PotentialSpec& pot, double beta) {
    if (beta < 0) throw std::invalid_argument("beta must be >= 0");
    const double J = pot.J();
    const double z = 2.0 * d * pot.range();
    return {4.0 * J * z, z * std::expm1(4.0 * beta * J) + 1.0, 1.0 - z * std::expm1(-4.0 * beta * J)};
}

}  // namespace lgce
