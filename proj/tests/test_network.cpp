#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "fluct/fluctuation.hpp"
#include "fluct/network.hpp"
#include "fluct/rng.hpp"

using namespace fluct;

namespace {

// --- test-side oracles ------------------------------------------------------

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

double kruskal_total(const DistanceMatrixQ& d) {
    const std::size_t n = d.labels.size();
    std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(d.d[i][j], i, j);
    std::sort(edges.begin(), edges.end());
    UnionFind uf(n);
    double total = 0;
    std::size_t used = 0;
    for (auto& [w, i, j] : edges)
        if (uf.unite(i, j)) {
            total += w;
            ++used;
        }
    REQUIRE(used == n - 1);
    return total;
}

// decode one Prufer sequence into its tree's total distance
double prufer_total(const std::vector<std::size_t>& code, const DistanceMatrixQ& d) {
    const std::size_t n = code.size() + 2;
    std::vector<int> degree(n, 1);
    for (std::size_t v : code) ++degree[v];
    double total = 0;
    std::vector<int> deg = degree;
    std::set<std::size_t> leaves;
    for (std::size_t v = 0; v < n; ++v)
        if (deg[v] == 1) leaves.insert(v);
    for (std::size_t v : code) {
        std::size_t leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        total += d.d[leaf][v];
        if (--deg[v] == 1) leaves.insert(v);
    }
    std::size_t a = *leaves.begin(), b = *std::next(leaves.begin());
    total += d.d[a][b];
    return total;
}

// exhaustive minimum over all n^(n-2) labeled spanning trees
double exhaustive_min_total(const DistanceMatrixQ& d) {
    const std::size_t n = d.labels.size();
    if (n == 2) return d.d[0][1];
    std::vector<std::size_t> code(n - 2, 0);
    double best = 1e300;
    while (true) {
        best = std::min(best, prufer_total(code, d));
        std::size_t k = 0;
        while (k < code.size() && code[k] + 1 == n) code[k++] = 0;
        if (k == code.size()) break;
        ++code[k];
    }
    return best;
}

DistanceMatrixQ random_distances(std::size_t n, Rng& rng, bool quantized = false) {
    DistanceMatrixQ d;
    for (std::size_t i = 0; i < n; ++i) d.labels.push_back("a" + std::to_string(i));
    d.d.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double w = quantized ? (1.0 + static_cast<double>(rng.next_u64() % 4) * 0.25)
                                 : 0.1 + 1.9 * rng.uniform();
            d.d[i][j] = d.d[j][i] = w;
        }
    return d;
}

std::set<std::pair<std::string, std::string>> edge_labels(const MstGraph& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (const MstEdge& e : g.edges) {
        std::string a = g.nodes[e.i].label, b = g.nodes[e.j].label;
        out.insert({std::min(a, b), std::max(a, b)});
    }
    return out;
}

std::vector<double> gauss_series(std::size_t n, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(n);
    for (double& v : x) v = rng.gauss();
    return x;
}

}  // namespace

TEST_CASE("correlation-to-distance map hits its anchor points") {
    CorrelationMatrixQ m;
    m.labels = {"x", "y", "z"};
    m.ordering = {0, 1, 2};
    m.rho = {{1.0, 0.0, -1.0}, {0.0, 1.0, 1.0}, {-1.0, 1.0, 1.0}};
    DistanceMatrixQ d = to_distances(m);
    CHECK(d.d[0][0] == 0.0);
    CHECK(d.d[0][1] == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.d[0][2] == doctest::Approx(2.0));
    CHECK(d.d[1][2] == doctest::Approx(0.0));

    m.rho[0][1] = m.rho[1][0] = 1.5;  // outside [-1, 1]
    CHECK_THROWS_WITH_AS(to_distances(m), doctest::Contains("x"), std::invalid_argument);
}

TEST_CASE("minimal spanning tree matches exhaustive enumeration on small graphs") {
    Rng rng(2001);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + trial % 5;  // 2..6 nodes
        DistanceMatrixQ d = random_distances(n, rng, trial % 3 == 0);
        MstGraph g = minimal_spanning_tree(d);
        REQUIRE(g.edges.size() == n - 1);
        CHECK(g.total_distance == doctest::Approx(exhaustive_min_total(d)).epsilon(1e-12));
    }
}

TEST_CASE("prim and kruskal totals agree on larger graphs") {
    Rng rng(2002);
    for (int trial = 0; trial < 5; ++trial) {
        DistanceMatrixQ d = random_distances(70, rng, trial % 2 == 0);
        MstGraph g = minimal_spanning_tree(d);
        REQUIRE(g.edges.size() == 69);
        CHECK(g.total_distance == doctest::Approx(kruskal_total(d)).epsilon(1e-12));
        // handshake: degrees sum to twice the edge count
        std::vector<std::size_t> deg(70, 0);
        for (const MstEdge& e : g.edges) {
            ++deg[e.i];
            ++deg[e.j];
        }
        CHECK(std::accumulate(deg.begin(), deg.end(), std::size_t{0}) == 2 * g.edges.size());
    }
}

TEST_CASE("edge set is invariant under input permutation even with ties") {
    Rng rng(2003);
    DistanceMatrixQ d = random_distances(8, rng, true);  // quantized: many ties
    MstGraph base = minimal_spanning_tree(d);

    std::vector<std::size_t> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    for (int trial = 0; trial < 20; ++trial) {
        rng.shuffle(perm);
        DistanceMatrixQ p;
        for (std::size_t i = 0; i < 8; ++i) p.labels.push_back(d.labels[perm[i]]);
        p.d.assign(8, std::vector<double>(8, 0.0));
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) p.d[i][j] = d.d[perm[i]][perm[j]];
        MstGraph g = minimal_spanning_tree(p);
        CHECK(edge_labels(g) == edge_labels(base));
        CHECK(g.total_distance == doctest::Approx(base.total_distance).epsilon(1e-12));
    }
}

TEST_CASE("star geometry concentrates degree on the hub") {
    // one node near everything, the rest far apart
    DistanceMatrixQ d;
    d.labels = {"hub", "p1", "p2", "p3", "p4"};
    d.d.assign(5, std::vector<double>(5, 1.9));
    for (std::size_t i = 0; i < 5; ++i) d.d[i][i] = 0.0;
    for (std::size_t i = 1; i < 5; ++i) d.d[0][i] = d.d[i][0] = 0.3;
    MstGraph g = minimal_spanning_tree(d);
    auto hubs = hub_report(g);
    REQUIRE(hubs.size() == 5);
    CHECK(hubs[0].label == "hub");
    CHECK(hubs[0].degree == 4);
    for (std::size_t i = 1; i < hubs.size(); ++i) {
        CHECK(hubs[i].degree == 1);
        if (i > 1) CHECK(hubs[i].label > hubs[i - 1].label);  // ties sorted by label
    }
    CHECK(g.total_distance == doctest::Approx(1.2));
}

TEST_CASE("chain geometry yields a path") {
    // points on a line: consecutive distances small, others larger
    DistanceMatrixQ d;
    d.labels = {"n0", "n1", "n2", "n3"};
    d.d.assign(4, std::vector<double>(4, 0.0));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            d.d[i][j] = 0.4 * std::fabs(static_cast<double>(i) - static_cast<double>(j));
    MstGraph g = minimal_spanning_tree(d);
    auto edges = edge_labels(g);
    CHECK(edges == std::set<std::pair<std::string, std::string>>{
                       {"n0", "n1"}, {"n1", "n2"}, {"n2", "n3"}});
    auto hubs = hub_report(g);
    CHECK(hubs[0].degree == 2);
    CHECK(hubs.back().degree == 1);
}

TEST_CASE("correlation matrix agrees with the pairwise coefficient") {
    std::vector<std::vector<double>> series;
    std::vector<std::string> labels;
    for (int i = 0; i < 4; ++i) {
        series.push_back(gauss_series(1200, 3000 + i));
        labels.push_back("s" + std::to_string(i));
    }
    // couple two of them
    for (std::size_t t = 0; t < 1200; ++t) series[1][t] = 0.7 * series[0][t] + 0.5 * series[1][t];

    CorrelationMatrixQ m = correlation_matrix(series, labels, 2.0, 25, 2);
    REQUIRE(m.labels.size() == 4);
    DetrendConfig cfg;
    cfg.poly_degree = 2;
    cfg.scales = {25};
    cfg.q_grid = {2.0};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(m.rho[i][i] == 1.0);
        for (std::size_t j = i + 1; j < 4; ++j) {
            CHECK(m.rho[i][j] == m.rho[j][i]);
            double direct = rho_q(series[i], series[j], cfg).rho[0][0];
            CHECK(m.rho[i][j] == doctest::Approx(direct).epsilon(1e-12));
        }
    }
    CHECK(m.rho[0][1] > 0.5);  // the coupled pair stands out
    CHECK(m.missing.empty());

    // worker count changes nothing
    CorrelationMatrixQ m4 = correlation_matrix(series, labels, 2.0, 25, 2, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(m4.rho[i][j] == m.rho[i][j]);
}

TEST_CASE("degenerate members surface as missing pairs and block the tree") {
    std::vector<std::vector<double>> series{gauss_series(800, 3100), std::vector<double>(800, 1.0),
                                            gauss_series(800, 3101)};
    std::vector<std::string> labels{"a", "flat", "b"};
    CorrelationMatrixQ m = correlation_matrix(series, labels, 2.0, 20, 2);
    CHECK(!m.missing.empty());
    CHECK(std::isnan(m.rho[0][1]));
    // the distance map refuses undefined entries, naming the pair
    CHECK_THROWS_WITH_AS(to_distances(m), doctest::Contains("flat"), std::invalid_argument);

    // a hand-built distance matrix with holes is refused by the tree itself
    DistanceMatrixQ d;
    d.labels = {"u", "v", "w"};
    d.d = {{0.0, 1.0, std::nan("")}, {1.0, 0.0, 1.0}, {std::nan(""), 1.0, 0.0}};
    CHECK_THROWS_WITH_AS(minimal_spanning_tree(d), doctest::Contains("u-w"),
                         std::invalid_argument);
}

TEST_CASE("matrix validation refuses duplicate labels and bad shapes") {
    auto s = gauss_series(400, 3200);
    CHECK_THROWS_AS(correlation_matrix({s, s}, {"x", "x"}, 2.0, 10, 2), std::invalid_argument);
    auto t = gauss_series(300, 3201);
    CHECK_THROWS_AS(correlation_matrix({s, t}, {"x", "y"}, 2.0, 10, 2), std::invalid_argument);
    CHECK_THROWS_AS(correlation_matrix({s, s}, {"x", "y"}, 2.0, 120, 2), std::invalid_argument);
}

TEST_CASE("matrix and tree exports are deterministic text") {
    std::vector<std::vector<double>> series;
    std::vector<std::string> labels;
    for (int i = 0; i < 3; ++i) {
        series.push_back(gauss_series(600, 3300 + i));
        labels.push_back("m" + std::to_string(i));
    }
    CorrelationMatrixQ m = correlation_matrix(series, labels, 1.0, 15, 2);
    std::string csv = matrix_csv(m);
    CHECK(csv.substr(0, 5) == "label");
    CHECK(csv.find("m0") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows

    MstGraph g = minimal_spanning_tree(to_distances(m));
    g.nodes[0].group = "I";
    g.nodes[0].mean_volume = 12.5;
    std::string js = mst_json(g);
    CHECK(js.find("\"edges\"") != std::string::npos);
    CHECK(js.find("\"total_distance\"") != std::string::npos);
    CHECK(js.find("m1") != std::string::npos);
    std::string gv = mst_graphviz(g);
    CHECK(gv.substr(0, 5) == "graph");
    CHECK(gv.find("--") != std::string::npos);

    // reordering only affects presentation
    CorrelationMatrixQ shuffled = m;
    shuffled.ordering = {2, 0, 1};
    std::string csv2 = matrix_csv(shuffled);
    CHECK(csv2.find("label,m2,m0,m1") == 0);
}
