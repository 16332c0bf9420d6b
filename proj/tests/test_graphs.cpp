#include "catch_amalgamated.hpp"
#include "lgce/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace lgce;

namespace {

std::vector<LabeledGraph> sorted(std::vector<LabeledGraph> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("connected labeled graph counts", "[graphs]") {
    // OEIS A001187
    const long expect[] = {0, 1, 1, 4, 38, 728, 26704};
    for (int n = 1; n <= 6; ++n) CHECK(long(connected_graphs(n).size()) == expect[n]);
}

TEST_CASE("biconnected labeled graph counts", "[graphs]") {
    // OEIS A013922
    const long expect[] = {0, 0, 1, 1, 10, 238, 11368};
    for (int n = 2; n <= 6; ++n) CHECK(long(biconnected_graphs(n).size()) == expect[n]);
}

TEST_CASE("Cayley tree counts", "[graphs]") {
    for (int n = 1; n <= 8; ++n) {
        auto t = trees(n);
        CHECK(double(t.size()) == (n < 2 ? 1.0 : std::pow(double(n), n - 2)));
        for (const auto& g : t) CHECK(g.edge_count() == n - 1);
        CHECK(std::set<LabeledGraph>(t.begin(), t.end()).size() == t.size());
    }
}

TEST_CASE("generators agree with brute-force filters", "[graphs]") {
    for (int n = 1; n <= 5; ++n) {
        CHECK(sorted(connected_graphs(n)) == brute_force_filter(n, GraphFamily::Connected));
        CHECK(sorted(trees(n)) == sorted(brute_force_filter(n, GraphFamily::Tree)));
    }
    for (int n = 2; n <= 5; ++n) CHECK(sorted(biconnected_graphs(n)) == brute_force_filter(n, GraphFamily::Biconnected));
    for (int w = 1; w <= 4; ++w)
        for (int k = 0; w + k <= 5; ++k)
            CHECK(sorted(af_two_colored_graphs(w, k)) == brute_force_filter(w + k, GraphFamily::ArticulationFree, w));
}

TEST_CASE("all-white articulation-free graphs are the connected graphs", "[graphs]") {
    for (int n = 1; n <= 5; ++n) CHECK(sorted(af_two_colored_graphs(n, 0)) == sorted(connected_graphs(n)));
}

TEST_CASE("classify small examples", "[graphs]") {
    auto edges = [](int n, std::vector<std::pair<int, int>> e, int white) {
        LabeledGraph g{n, 0, white};
        for (auto [i, j] : e) g.edges |= 1u << LabeledGraph::pair_index(i, j);
        return g;
    };
    auto path = edges(3, {{0, 1}, {1, 2}}, 3);
    auto c = classify(path);
    CHECK(c.connected);
    CHECK(c.tree);
    CHECK_FALSE(c.biconnected);
    CHECK(c.articulation_free);  // both sides of the cut vertex hold white vertices
    auto black_leaf = edges(3, {{0, 1}, {1, 2}}, 1);  // vertex 2 black, hangs off cut vertex 1
    CHECK_FALSE(classify(black_leaf).articulation_free);
    auto tri = edges(3, {{0, 1}, {1, 2}, {0, 2}}, 1);
    CHECK(classify(tri).biconnected);
    CHECK(classify(tri).articulation_free);
    auto split = edges(4, {{0, 1}, {2, 3}}, 4);
    CHECK_FALSE(classify(split).connected);
    CHECK(path.dump() == "n=3 edges=1-2,2-3 white=3");
}

TEST_CASE("generator rejects out-of-range sizes", "[graphs]") {
    CHECK_THROWS_AS(connected_graphs(7), guard_error);
    CHECK_THROWS_AS(biconnected_graphs(1), guard_error);
    CHECK_THROWS_AS(trees(9), guard_error);
    CHECK_THROWS_AS(af_two_colored_graphs(0, 2), guard_error);
    CHECK_THROWS_AS(af_two_colored_graphs(4, 3), guard_error);
}
