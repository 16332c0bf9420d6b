#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lgce/bounds.hpp"
#include "lgce/lattice.hpp"
#include "lgce/numeric.hpp"

namespace lgce {

using json = nlohmann::json;

/// Validated run configuration. Model keys: dimension, side, coupling, beta,
/// boundary (zero | periodic | fixed:<x,y;...>), potential.kind, potential.range.
class RunConfig {
public:
    static inline const std::set<std::string> known_keys = {
        "dimension", "side", "coupling", "beta", "boundary", "potential", "beta_grid", "pairs", "order",
        "N", "mu0", "alpha", "u", "sides", "C", "C1", "method", "cases", "threads"};

    explicit RunConfig(json j) : raw_(std::move(j)) {
        if (!raw_.is_object()) throw config_error("config: top level must be a JSON object");
        for (auto& [k, v] : raw_.items())
            if (!known_keys.count(k)) throw config_error("config: unknown key '" + k + "'");
        d_ = integer("dimension", 1, 3, 1);
        L_ = integer("side", 2, 4096, 10);
        J_ = real("coupling", 1e-12, 1e6, 1.0);
        beta_ = real("beta", 0.0, 1e3, 0.2);
        boundary_ = parse_boundary(raw_.value("boundary", json("periodic")), d_);
        pot_ = parse_potential(raw_.value("potential", json::object()), J_);
    }

    static RunConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("config: cannot open '" + path + "'");
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw config_error(std::string("config: invalid JSON: ") + e.what());
        }
        return RunConfig(std::move(j));
    }

    int dimension() const { return d_; }
    int side() const { return L_; }
    double J() const { return J_; }
    double beta() const { return beta_; }
    const Boundary& boundary() const { return boundary_; }
    const PotentialSpec& potential() const { return pot_; }
    LatticeSpec lattice() const { return LatticeSpec(d_, L_, boundary_); }
    LatticeSpec lattice(int L) const { return LatticeSpec(d_, L, boundary_); }
    const json& raw() const { return raw_; }
    bool has(const std::string& k) const { return raw_.contains(k); }

    int integer(const std::string& key, long lo, long hi, long fallback) const {
        if (!raw_.contains(key)) return int(fallback);
        return checked_int(raw_.at(key), key, lo, hi);
    }

    double real(const std::string& key, double lo, double hi, double fallback) const {
        if (!raw_.contains(key)) return fallback;
        return checked_real(raw_.at(key), key, lo, hi);
    }

    /// Either [v, ...] or {"start": a, "stop": b, "count": n}.
    std::vector<double> grid(const std::string& key, double lo, double hi, std::vector<double> fallback) const {
        if (!raw_.contains(key)) return fallback;
        const json& g = raw_.at(key);
        std::vector<double> out;
        if (g.is_array()) {
            for (const auto& v : g) out.push_back(checked_real(v, key, lo, hi));
        } else if (g.is_object()) {
            for (auto& [k, v] : g.items())
                if (k != "start" && k != "stop" && k != "count")
                    throw config_error(key + ": unknown grid key '" + k + "' (expected start, stop, count)");
            if (!g.contains("start") || !g.contains("stop") || !g.contains("count"))
                throw config_error(key + ": grid object needs start, stop, count");
            const double a = checked_real(g.at("start"), key + ".start", lo, hi);
            const double b = checked_real(g.at("stop"), key + ".stop", lo, hi);
            const int n = checked_int(g.at("count"), key + ".count", 0, 100000);
            if (n == 0) throw config_error(key + ": grid is empty (count must be >= 1)");
            out = linear_grid(a, b, n);
        } else {
            throw config_error(key + ": expected an array or {start, stop, count}");
        }
        if (out.empty()) throw config_error(key + ": grid is empty");
        return out;
    }

    std::vector<int> integers(const std::string& key, long lo, long hi, std::vector<int> fallback) const {
        if (!raw_.contains(key)) return fallback;
        const json& g = raw_.at(key);
        if (!g.is_array()) throw config_error(key + ": expected an array of integers");
        std::vector<int> out;
        for (const auto& v : g) out.push_back(checked_int(v, key, lo, hi));
        if (out.empty()) throw config_error(key + ": list is empty");
        return out;
    }

    static int checked_int(const json& v, const std::string& key, long lo, long hi) {
        if (!v.is_number_integer())
            throw config_error(key + ": expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        const long x = v.get<long>();
        if (x < lo || x > hi)
            throw config_error(key + ": " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
        return int(x);
    }

    static double checked_real(const json& v, const std::string& key, double lo, double hi) {
        if (!v.is_number()) throw config_error(key + ": expected a number in [" + num(lo) + ", " + num(hi) + "]");
        const double x = v.get<double>();
        if (!(x >= lo && x <= hi)) throw config_error(key + ": " + num(x) + " outside [" + num(lo) + ", " + num(hi) + "]");
        return x;
    }

    /// "zero", "periodic" or "fixed:x1,y1;x2,y2" (empty list allowed: "fixed:").
    static Boundary parse_boundary(const json& v, int d) {
        if (!v.is_string()) throw config_error("boundary: expected one of zero, periodic, fixed:<site list>");
        const std::string s = v.get<std::string>();
        if (s == "zero") return Boundary::zero();
        if (s == "periodic") return Boundary::periodic();
        if (s.rfind("fixed:", 0) != 0)
            throw config_error("boundary: '" + s + "' is not one of zero, periodic, fixed:<site list>");
        std::vector<Site> gamma;
        std::stringstream all(s.substr(6));
        std::string item;
        while (std::getline(all, item, ';')) {
            if (item.empty()) continue;
            Site site;
            std::stringstream cs(item);
            std::string c;
            while (std::getline(cs, c, ',')) {
                try {
                    size_t used = 0;
                    site.push_back(std::stoi(c, &used));
                    if (used != c.size()) throw std::invalid_argument(c);
                } catch (const std::exception&) {
                    throw config_error("boundary: bad coordinate '" + c + "' in fixed site list");
                }
            }
            if (int(site.size()) != d)
                throw config_error("boundary: fixed site '" + item + "' needs " + std::to_string(d) + " coordinates");
            gamma.push_back(site);
        }
        return Boundary::fixed(std::move(gamma));
    }

    static PotentialSpec parse_potential(const json& v, double J) {
        if (!v.is_object()) throw config_error("potential: expected an object {kind, range}");
        for (auto& [k, x] : v.items())
            if (k != "kind" && k != "range") throw config_error("potential: unknown key '" + k + "'");
        const std::string kind = v.value("kind", std::string("standard"));
        if (kind == "standard") {
            if (v.contains("range")) throw config_error("potential.range: only valid for kind 'kac'");
            return PotentialSpec::standard(J);
        }
        if (kind == "kac") return PotentialSpec::kac(checked_int(v.value("range", json(1)), "potential.range", 1, 64), J);
        throw config_error("potential.kind: '" + kind + "' is not one of standard, kac");
    }

private:
    static std::string num(double x) {
        std::ostringstream os;
        os << x;
        return os.str();
    }

    json raw_;
    int d_, L_;
    double J_, beta_;
    Boundary boundary_;
    PotentialSpec pot_ = PotentialSpec::standard(1.0);
};

}  // namespace lgce
