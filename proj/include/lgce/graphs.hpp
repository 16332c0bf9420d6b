#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lgce/numeric.hpp"

namespace lgce {

/// Labeled simple graph on vertices 0..n-1 (printed 1-based). Edges are bits
/// in colex pair order: {i<j} -> j(j-1)/2 + i. The first n_white vertices are white.
struct LabeledGraph {
    int n = 0;
    uint32_t edges = 0;
    int n_white = 0;

    static constexpr int pair_index(int i, int j) { return i < j ? j * (j - 1) / 2 + i : i * (i - 1) / 2 + j; }
    static constexpr int pair_count(int n) { return n * (n - 1) / 2; }

    bool has(int i, int j) const { return (edges >> pair_index(i, j)) & 1u; }
    int edge_count() const { return std::popcount(edges); }

    std::vector<std::pair<int, int>> edge_list() const {
        std::vector<std::pair<int, int>> out;
        for (int j = 1; j < n; ++j)
            for (int i = 0; i < j; ++i)
                if (has(i, j)) out.emplace_back(i, j);
        return out;
    }

    std::vector<uint32_t> adjacency() const {
        std::vector<uint32_t> adj(n, 0);
        for (auto [i, j] : edge_list()) {
            adj[i] |= 1u << j;
            adj[j] |= 1u << i;
        }
        return adj;
    }

    std::string dump() const {
        std::ostringstream os;
        os << "n=" << n << " edges=";
        bool first = true;
        for (auto [i, j] : edge_list()) {
            os << (first ? "" : ",") << i + 1 << "-" << j + 1;
            first = false;
        }
        os << " white=" << n_white;
        return os.str();
    }

    bool operator==(const LabeledGraph&) const = default;
    auto operator<=>(const LabeledGraph&) const = default;
};

struct GraphClass {
    bool connected;
    bool biconnected;
    bool tree;
    bool articulation_free;
};

namespace detail {

// Components of adj restricted to `alive`, as vertex masks.
inline std::vector<uint32_t> components(const std::vector<uint32_t>& adj, uint32_t alive) {
    std::vector<uint32_t> out;
    uint32_t left = alive;
    while (left) {
        uint32_t comp = left & (~left + 1), frontier = comp;
        while (frontier) {
            int v = std::countr_zero(frontier);
            frontier &= frontier - 1;
            uint32_t nb = adj[v] & alive & ~comp;
            comp |= nb;
            frontier |= nb;
        }
        out.push_back(comp);
        left &= ~comp;
    }
    return out;
}

struct Dfs {
    const std::vector<uint32_t>& adj;
    int n;
    std::vector<int> disc, low;
    std::vector<bool> cut;
    int timer = 0;

    Dfs(const std::vector<uint32_t>& a, int n_) : adj(a), n(n_), disc(n_, -1), low(n_, 0), cut(n_, false) {}

    void visit(int v, int parent) {
        disc[v] = low[v] = timer++;
        int children = 0;
        for (uint32_t r = adj[v]; r; r &= r - 1) {
            int w = std::countr_zero(r);
            if (disc[w] < 0) {
                ++children;
                visit(w, v);
                low[v] = std::min(low[v], low[w]);
                if (parent >= 0 && low[w] >= disc[v]) cut[v] = true;
            } else if (w != parent) {
                low[v] = std::min(low[v], disc[w]);
            }
        }
        if (parent < 0 && children > 1) cut[v] = true;
    }
};

}  // namespace detail

/// Depth-first classification. A vertex is an articulation vertex when its
/// removal leaves at least two parts, one of them without white vertices.
inline GraphClass classify(const LabeledGraph& g) {
    GraphClass c{};
    if (g.n == 0) return c;
    const auto adj = g.adjacency();
    detail::Dfs dfs(adj, g.n);
    dfs.visit(0, -1);
    c.connected = dfs.timer == g.n;
    bool any_cut = false;
    for (int v = 0; v < g.n; ++v) any_cut = any_cut || dfs.cut[v];
    c.biconnected = c.connected && g.n >= 2 && !any_cut;
    c.tree = c.connected && g.edge_count() == g.n - 1;
    c.articulation_free = c.connected;
    if (c.connected) {
        const uint32_t all = g.n >= 32 ? ~0u : (1u << g.n) - 1;
        const uint32_t white = (1u << g.n_white) - 1;
        for (int v = 0; v < g.n && c.articulation_free; ++v) {
            if (!dfs.cut[v]) continue;
            for (uint32_t comp : detail::components(adj, all & ~(1u << v)))
                if (!(comp & white)) {
                    c.articulation_free = false;
                    break;
                }
        }
    }
    return c;
}

namespace detail {

// Edge-by-edge backtracking. `ok` must be monotone under edge addition; a
// branch is cut as soon as included + undecided edges fail it.
template <typename Ok, typename Visit>
void backtrack(int n, int n_white, Ok&& ok, Visit&& visit) {
    const int P = LabeledGraph::pair_count(n);
    const uint32_t full = P == 0 ? 0u : (P >= 32 ? ~0u : (1u << P) - 1);
    std::function<void(int, uint32_t)> rec = [&](int p, uint32_t in) {
        const uint32_t undecided = full & ~((1u << p) - 1);
        if (!ok(LabeledGraph{n, in | undecided, n_white})) return;
        if (p == P) {
            visit(LabeledGraph{n, in, n_white});
            return;
        }
        rec(p + 1, in);
        rec(p + 1, in | (1u << p));
    };
    rec(0, 0);
}

}  // namespace detail

template <typename Visit>
void enumerate_connected(int n, Visit&& visit) {
    if (n < 1 || n > 6) throw guard_error("enumerate_connected: 1 <= n <= 6");
    detail::backtrack(n, n, [](const LabeledGraph& g) { return classify(g).connected; }, visit);
}

/// Graphs that stay connected after deleting any one vertex; the single edge counts.
template <typename Visit>
void enumerate_biconnected(int n, Visit&& visit) {
    if (n < 2 || n > 6) throw guard_error("enumerate_biconnected: 2 <= n <= 6");
    detail::backtrack(n, n, [](const LabeledGraph& g) { return classify(g).biconnected; }, visit);
}

template <typename Visit>
void enumerate_af_two_colored(int n_white, int k_black, Visit&& visit) {
    if (n_white < 1 || k_black < 0 || n_white + k_black > 6)
        throw guard_error("enumerate_af_two_colored: n_white >= 1, n_white + k_black <= 6");
    detail::backtrack(n_white + k_black, n_white,
                      [](const LabeledGraph& g) { return classify(g).articulation_free; }, visit);
}

/// Labeled trees by Pruefer decoding, sequences in lexicographic order.
template <typename Visit>
void enumerate_trees(int n, Visit&& visit) {
    if (n < 1 || n > 8) throw guard_error("enumerate_trees: 1 <= n <= 8");
    if (n == 1) {
        visit(LabeledGraph{1, 0, 1});
        return;
    }
    if (n == 2) {
        visit(LabeledGraph{2, 1, 2});
        return;
    }
    std::vector<int> seq(n - 2, 0);
    while (true) {
        std::vector<int> deg(n, 1);
        for (int s : seq) ++deg[s];
        uint32_t e = 0;
        for (int s : seq) {
            int leaf = 0;
            while (deg[leaf] != 1) ++leaf;
            e |= 1u << LabeledGraph::pair_index(leaf, s);
            --deg[leaf];
            --deg[s];
        }
        int u = -1, v = -1;
        for (int i = 0; i < n; ++i)
            if (deg[i] == 1) (u < 0 ? u : v) = i;
        e |= 1u << LabeledGraph::pair_index(u, v);
        visit(LabeledGraph{n, e, n});
        int k = n - 3;
        while (k >= 0 && seq[k] == n - 1) seq[k--] = 0;
        if (k < 0) break;
        ++seq[k];
    }
}

template <typename Gen>
std::vector<LabeledGraph> collect(Gen&& gen) {
    std::vector<LabeledGraph> out;
    gen([&](const LabeledGraph& g) { out.push_back(g); });
    return out;
}

inline std::vector<LabeledGraph> connected_graphs(int n) {
    return collect([n](auto&& v) { enumerate_connected(n, v); });
}
inline std::vector<LabeledGraph> biconnected_graphs(int n) {
    return collect([n](auto&& v) { enumerate_biconnected(n, v); });
}
inline std::vector<LabeledGraph> trees(int n) {
    return collect([n](auto&& v) { enumerate_trees(n, v); });
}
inline std::vector<LabeledGraph> af_two_colored_graphs(int n_white, int k_black) {
    return collect([=](auto&& v) { enumerate_af_two_colored(n_white, k_black, v); });
}

// ---- brute force ----

enum class GraphFamily { Connected, Biconnected, Tree, ArticulationFree };

namespace naive {

inline bool connected_without(const LabeledGraph& g, int removed) {
    std::vector<int> seen(g.n, 0), stack;
    int start = removed == 0 ? 1 : 0;
    if (start >= g.n) return true;
    seen[start] = 1;
    stack.push_back(start);
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < g.n; ++w)
            if (w != v && w != removed && !seen[w] && g.has(v, w)) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == g.n - (removed >= 0 ? 1 : 0);
}

// Parts of g - v, each as a list of vertices.
inline std::vector<std::vector<int>> parts_without(const LabeledGraph& g, int v) {
    std::vector<int> label(g.n, -1);
    std::vector<std::vector<int>> parts;
    for (int s = 0; s < g.n; ++s) {
        if (s == v || label[s] >= 0) continue;
        parts.emplace_back();
        std::vector<int> stack{s};
        label[s] = int(parts.size()) - 1;
        while (!stack.empty()) {
            int a = stack.back();
            stack.pop_back();
            parts.back().push_back(a);
            for (int b = 0; b < g.n; ++b)
                if (b != v && b != a && label[b] < 0 && g.has(a, b)) {
                    label[b] = label[s];
                    stack.push_back(b);
                }
        }
    }
    return parts;
}

inline bool member(const LabeledGraph& g, GraphFamily f) {
    if (!connected_without(g, -1)) return false;
    switch (f) {
        case GraphFamily::Connected:
            return true;
        case GraphFamily::Tree:
            return g.edge_count() == g.n - 1;
        case GraphFamily::Biconnected:
            if (g.n < 2) return false;
            for (int v = 0; v < g.n; ++v)
                if (!connected_without(g, v)) return false;
            return true;
        case GraphFamily::ArticulationFree:
            for (int v = 0; v < g.n; ++v) {
                auto parts = parts_without(g, v);
                if (parts.size() < 2) continue;
                for (const auto& p : parts) {
                    bool white = false;
                    for (int a : p) white = white || a < g.n_white;
                    if (!white) return false;
                }
            }
            return true;
    }
    return false;
}

}  // namespace naive

/// Every labeled graph on n vertices passing the family's definition, checked
/// vertex-deletion by vertex-deletion. Independent of classify().
inline std::vector<LabeledGraph> brute_force_filter(int n, GraphFamily f, int n_white = -1) {
    if (n < 1 || n > 8) throw guard_error("brute_force_filter: 1 <= n <= 8");
    if (n_white < 0) n_white = n;
    std::vector<LabeledGraph> out;
    const int P = LabeledGraph::pair_count(n);
    if (f == GraphFamily::Tree) {
        // choose n-1 of P edges
        for (uint32_t S = n == 1 ? 0u : (1u << (n - 1)) - 1; S < (uint32_t(1) << P) || (P == 0 && S == 0);) {
            LabeledGraph g{n, S, n_white};
            if (naive::member(g, f)) out.push_back(g);
            if (S == 0) break;
            uint32_t c = S & (~S + 1), r = S + c;
            S = (((r ^ S) >> 2) / c) | r;
        }
    } else {
        if (P > 21) throw guard_error("brute_force_filter: too many edge subsets");
        for (uint32_t S = 0; S < (uint32_t(1) << P); ++S) {
            LabeledGraph g{n, S, n_white};
            if (naive::member(g, f)) out.push_back(g);
        }
    }
    return out;
}

}  // namespace lgce
