#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fluct/bars.hpp"
#include "fluct/session.hpp"

namespace fluct {

// Cross-correlation coefficient matrix at a single (q, s).
struct CorrelationMatrixQ {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rho;  // N x N, diagonal 1, NaN = undefined
  double q = 1.0;
  int s = 10;
  std::vector<std::size_t> ordering;  // display permutation, identity by default
  std::vector<std::pair<std::size_t, std::size_t>> missing;  // undefined pairs
};

struct DistanceMatrixQ {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> d;  // sqrt(2 (1 - rho)), diagonal 0
  double q = 1.0;
  int s = 10;
};

struct MstNode {
  std::string label;
  std::string group;        // optional liquidity-group tag
  double mean_volume = 0.0;  // optional node-size attribute
};

struct MstEdge {
  std::size_t i = 0, j = 0;  // node indices, i < j
  double distance = 0.0;
  double weight_display = 0.0;  // 1 - distance
};

struct MstGraph {
  std::vector<MstNode> nodes;
  std::vector<MstEdge> edges;  // exactly N - 1
  double total_distance = 0.0;
};

// Pairwise coefficients at one (q, s) with per-series detrended segments
// computed once and reused across the N(N-1)/2 pairs. Undefined entries are
// recorded in `missing` and left NaN.
CorrelationMatrixQ correlation_matrix(const std::vector<std::vector<double>>& series,
                                      const std::vector<std::string>& labels, double q, int s,
                                      int poly_degree = 2, unsigned workers = 1);

// Elementwise d = sqrt(2 (1 - rho)); throws on entries outside [-1, 1].
DistanceMatrixQ to_distances(const CorrelationMatrixQ& m);

// Prim's algorithm started from the lexicographically smallest label; equal
// distances break by the lexicographically smallest (min label, max label)
// pair, so relabeling-permutation inputs keep the same edge set.
MstGraph minimal_spanning_tree(const DistanceMatrixQ& d);

struct HubEntry {
  std::string label;
  std::size_t degree = 0;
};

// Nodes sorted by degree descending, ties by label ascending.
std::vector<HubEntry> hub_report(const MstGraph& g);

// Rectangular rho block between two asset groups, each pair aligned on its
// own common in-session grid. Pairs whose alignment keeps less than
// coverage_floor of the first leg's bars abort the block with a coverage
// report in the exception message.
struct IntermarketBlock {
  std::vector<std::string> row_labels, col_labels;
  std::vector<std::vector<double>> rho;       // rows x cols
  std::vector<std::vector<double>> coverage;  // alignment coverage per pair
  double q = 1.0;
  int s = 10;
};

IntermarketBlock intermarket_matrix(const std::vector<BarSeries>& rows,
                                    const std::vector<BarSeries>& cols, double q, int s,
                                    const SessionSpec& sessions, int poly_degree = 2,
                                    double coverage_floor = 0.05, unsigned workers = 1);

// Deterministic text exports.
std::string matrix_csv(const CorrelationMatrixQ& m);
std::string intermarket_csv(const IntermarketBlock& block);
std::string intermarket_coverage_csv(const IntermarketBlock& block);
std::string mst_json(const MstGraph& g);
std::string mst_graphviz(const MstGraph& g);

}  // namespace fluct
