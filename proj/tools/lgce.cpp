// lgce: command-line front end for the lattice-gas cluster-expansion library.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lgce/acceptance.hpp"
#include "lgce/bounds.hpp"
#include "lgce/cluster.hpp"
#include "lgce/config.hpp"
#include "lgce/correlation.hpp"
#include "lgce/csv.hpp"
#include "lgce/deviation.hpp"
#include "lgce/oracle.hpp"

namespace fs = std::filesystem;
using namespace lgce;

namespace {

enum Exit { ok = 0, runtime = 1, config = 2, guard = 3, acceptance_failed = 4 };

struct Options {
    std::string config;
    std::string out = ".";
    unsigned threads = 1;
};

RunConfig load(const Options& o) {
    if (o.config.empty()) return RunConfig(json::object());
    return RunConfig::load(o.config);
}

std::ofstream open_csv(const Options& o, const std::string& name) {
    std::error_code ec;
    fs::create_directories(o.out, ec);
    const auto path = fs::path(o.out) / name;
    std::ofstream f(path);
    if (!f) throw config_error("--out: cannot write '" + path.string() + "'");
    return f;
}

CanonicalTable table_for(const RunConfig& c, const LatticeSpec& lat, unsigned threads, const std::string& method) {
    const bool tm = method == "transfer" || (method == "auto" && lat.size() > 24);
    if (tm) {
        if (lat.dimension() != 1) throw guard_error("oracle: transfer matrix needs dimension 1, enumeration needs |Lambda| <= 24");
        return transfer_matrix_table(lat.side(), c.potential(), c.beta(), lat.boundary());
    }
    return exact_canonical_table(lat, c.potential(), c.beta(), threads);
}

std::string method_key(const RunConfig& c) {
    if (!c.has("method")) return "auto";
    const auto& m = c.raw().at("method");
    if (!m.is_string()) throw config_error("method: expected one of auto, enumeration, transfer");
    auto s = m.get<std::string>();
    if (s != "auto" && s != "enumeration" && s != "transfer")
        throw config_error("method: '" + s + "' is not one of auto, enumeration, transfer");
    return s;
}

const std::vector<std::string> radii_header = {"d",   "J",    "beta", "R_C",       "R_C_bar",
                                               "M_IS", "M_LG", "R_V",  "a_star_RC", "a_star_RCbar"};

void radii_file(const Options& o, const RunConfig& c, const std::string& name,
                const std::vector<std::pair<int, double>>& pairs, const std::vector<double>& grid) {
    auto f = open_csv(o, name);
    CsvWriter w(f, radii_header);
    for (auto [d, J] : pairs) {
        const auto pot = c.potential().kind() == PotentialKind::Kac ? PotentialSpec::kac(c.potential().range(), J)
                                                                    : PotentialSpec::standard(J);
        for (double b : grid) {
            auto r = radius_report(d, pot, b);
            w.row({(long long)d, J, b, r.R_C, r.R_C_bar, r.M_IS, r.M_LG, r.R_V, r.a_star_RC, r.a_star_RCbar});
        }
    }
}

int cmd_radii(const Options& o) {
    const auto c = load(o);
    const auto grid = c.grid("beta_grid", 0.0, 100.0, linear_grid(0.0, 1.0, 101));
    if (c.has("pairs")) {
        const auto& p = c.raw().at("pairs");
        if (!p.is_array() || p.empty()) throw config_error("pairs: expected a nonempty array of [d, J]");
        std::vector<std::pair<int, double>> pairs;
        for (const auto& e : p) {
            if (!e.is_array() || e.size() != 2) throw config_error("pairs: each entry must be [d, J]");
            pairs.emplace_back(RunConfig::checked_int(e[0], "pairs.d", 1, 3),
                               RunConfig::checked_real(e[1], "pairs.J", 1e-12, 1e6));
        }
        radii_file(o, c, "radii.csv", pairs, grid);
    } else {
        radii_file(o, c, "figure1.csv", {{1, 1.0}, {2, 1.0}, {3, 1.0}}, grid);
        radii_file(o, c, "figure2.csv", {{1, 1.0}, {1, 2.0}}, grid);
        radii_file(o, c, "figure3.csv", {{1, 1.0}, {2, 1.0}}, grid);
        radii_file(o, c, "figure4.csv", {{1, 1.0}, {2, 1.0}, {3, 1.0}}, grid);
    }
    return ok;
}

int cmd_series(const Options& o) {
    const auto c = load(o);
    const int order = c.integer("order", 1, 8, 4);
    const long N = c.integer("N", 1, 100000, order + 1);
    const auto method = method_key(c);
    const auto T = table_for(c, c.lattice(), o.threads, method);
    const auto B = extract_B_Lambda(T, order);
    auto f = open_csv(o, "series.csv");
    CsvWriter w(f, {"n", "b_n", "beta_n", "B_Lambda_n", "F_coeff"});
    const double nan = std::nan("");
    for (int n = 1; n <= order; ++n) {
        const double b = n <= 5 ? compute_b_n(n, c.dimension(), c.potential(), c.beta()) : nan;
        const double bi = n <= 4 ? compute_beta_irr(n, c.dimension(), c.potential(), c.beta()) : nan;
        const double Bn = double(B[n]);
        w.row({(long long)n, b, bi, Bn, F_coefficient(N, T.volume(), n, Bn)});
    }
    return ok;
}

int cmd_oracle(const Options& o) {
    const auto c = load(o);
    const double mu0 = c.real("mu0", -1e6, 1e6, 0.0);
    const auto T = table_for(c, c.lattice(), o.threads, method_key(c));
    {
        auto f = open_csv(o, "oracle.csv");
        CsvWriter w(f, {"N", "logZ"});
        for (long N = 0; N < long(T.log_z.size()); ++N) w.row({(long long)N, T.logz(N)});
    }
    if (c.has("mu0")) {
        const auto G = grand_canonical_eval(T, mu0);
        auto f = open_csv(o, "grand.csv");
        CsvWriter w(f, {"N", "prob"});
        for (long N = 0; N < long(G.log_prob.size()); ++N) w.row({(long long)N, G.prob(N)});
    }
    return ok;
}

int cmd_correlate(const Options& o) {
    const auto c = load(o);
    const int N = c.integer("N", 2, 20, 2);
    const CorrelationCase k{c.lattice(), c.potential(), c.beta(), N};
    double C, C1;
    if (c.has("C") || c.has("C1")) {
        C = c.real("C", 0.0, 1e6, 0.0);
        C1 = c.real("C1", 0.0, 1e6, 0.0);
    } else {
        auto cal = calibrate_constants({k});
        C = cal.C_min;
        C1 = cal.C1_min;
    }
    auto f = open_csv(o, "correlate.csv");
    CsvWriter w(f, {"q1", "q2", "dist", "u2_exact", "rhs", "feasible"});
    for (const auto& r : correlation_rows(k, C, C1))
        w.row({(long long)r.q1, (long long)r.q2, r.dist, r.u2, r.rhs, (long long)r.feasible});
    std::cout << "C=" << format_double(C) << " C1=" << format_double(C1) << "\n";
    if (k.lattice.dimension() == 1 && k.lattice.side() >= 10) {
        auto fit = decay_fit(k.lattice, k.pot, k.beta, N);
        std::cout << "decay_rate=" << format_double(fit.rate) << " excess_rate=" << format_double(fit.excess_rate)
                  << "\n";
    }
    return ok;
}

int cmd_deviate(const Options& o) {
    const auto c = load(o);
    const auto sides = c.integers("sides", 2, 4096, {c.side()});
    const double mu0 =
        c.real("mu0", -1e6, 1e6, lattice_gas_threshold(c.dimension(), c.potential(), c.beta()) - 1.0);
    const auto alphas = c.grid("alpha", 0.5, 1.0, {0.5});
    const auto us = c.grid("u", 0.0, 1e6, {0.0, 0.5, 1.0});
    const auto method = method_key(c);
    auto f = open_csv(o, "deviate.csv");
    CsvWriter w(f, {"L", "mu0", "alpha", "u", "N_bar", "N_star", "N_tilde", "mu_tilde", "I_GC", "D", "D_alpha",
                    "D_alpha_plus", "m_alpha", "E", "p_exact", "p_formula", "gap"});
    for (int L : sides) {
        const auto T = table_for(c, c.lattice(L), o.threads, method);
        for (double a : alphas)
            for (double u : us) {
                auto r = formula_probability({mu0, a, u}, T);
                w.row({(long long)L, mu0, a, u, (long long)r.N_bar, (long long)r.N_star, (long long)r.N_tilde,
                       r.mu_tilde, r.I_GC, r.D, r.D_alpha, r.D_alpha_plus, (long long)r.m_alpha, r.E, r.p_exact,
                       r.p_formula, r.gap});
            }
    }
    return ok;
}

int cmd_accept(const Options&) { return acceptance::run({}, std::cout, &std::cerr) ? ok : acceptance_failed; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lgce: cluster expansion for the lattice-gas Ising model"};
    app.require_subcommand(1);
    Options o;
    auto add = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--config", o.config, "JSON configuration file");
        s->add_option("--out", o.out, "output directory");
        s->add_option("--threads", o.threads, "worker threads (0 = all cores)");
        return s;
    };
    auto* radii = add("radii", "convergence radii over a beta grid (figure data)");
    auto* series = add("series", "b_n, beta_n, B_Lambda(n) and F coefficients");
    auto* oracle = add("oracle", "exact canonical table, and grand-canonical probabilities with mu0");
    auto* correlate = add("correlate", "exact truncated two-point function against the bound");
    auto* deviate = add("deviate", "exact vs asymptotic deviation probabilities");
    auto* accept = add("accept", "run the acceptance suite");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : config;
    }
    try {
        if (*radii) return cmd_radii(o);
        if (*series) return cmd_series(o);
        if (*oracle) return cmd_oracle(o);
        if (*correlate) return cmd_correlate(o);
        if (*deviate) return cmd_deviate(o);
        if (*accept) return cmd_accept(o);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config;
    } catch (const guard_error& e) {
        std::cerr << "guard violation: " << e.what() << "\n";
        return guard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return runtime;
    }
    return ok;
}
