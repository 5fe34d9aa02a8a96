#include "fluct/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "fluct/csv.hpp"
#include "fluct/detrend.hpp"
#include "fluct/fluctuation.hpp"
#include "fluct/parallel.hpp"

namespace fluct {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Centered detrended segments of one series at a single scale, cached so the
// N(N-1)/2 pair covariances reuse them.
struct AssetSegments {
  std::vector<double> resid;  // segments concatenated, each centered
  std::vector<double> var;    // per-segment detrended variance
  std::vector<char> degenerate;
};

AssetSegments build_segments(const std::vector<double>& x, std::size_t s, int m) {
  const std::vector<double> prof = profile(x);
  const auto bounds = segment_bounds(x.size(), s);
  const SegmentDetrender det(s, m);
  const std::size_t M = bounds.size();
  AssetSegments out;
  out.resid.resize(M * s);
  out.var.resize(M);
  out.degenerate.assign(M, 0);
  const double inv_s = 1.0 / static_cast<double>(s);
  for (std::size_t v = 0; v < M; ++v) {
    double* r = out.resid.data() + v * s;
    det.residuals(prof.data() + bounds[v].first, r);
    double pmax = 0.0, mean = 0.0;
    for (std::size_t k = 0; k < s; ++k) {
      pmax = std::max(pmax, std::fabs(prof[bounds[v].first + k]));
      mean += r[k];
    }
    mean *= inv_s;
    double var = 0.0;
    for (std::size_t k = 0; k < s; ++k) {
      r[k] -= mean;
      var += r[k] * r[k];
    }
    out.var[v] = var * inv_s;
    const double tol = 1e-12 * pmax;
    if (out.var[v] <= tol * tol) out.degenerate[v] = 1;
  }
  return out;
}

void check_matrix_params(double q, int s, int poly_degree) {
  if (!(std::fabs(q) <= 10.0)) throw std::invalid_argument("network: |q| must be <= 10");
  if (poly_degree < 1) throw std::invalid_argument("network: poly_degree must be >= 1");
  if (s < poly_degree + 2) throw std::invalid_argument("network: s below poly_degree + 2");
}

std::string pair_name(const std::string& a, const std::string& b) { return a + "-" + b; }

}  // namespace

CorrelationMatrixQ correlation_matrix(const std::vector<std::vector<double>>& series,
                                      const std::vector<std::string>& labels, double q, int s,
                                      int poly_degree, unsigned workers) {
  check_matrix_params(q, s, poly_degree);
  const std::size_t n = series.size();
  if (n == 0) throw std::invalid_argument("correlation_matrix: no series");
  if (labels.size() != n) throw std::invalid_argument("correlation_matrix: label count mismatch");
  if (std::set<std::string>(labels.begin(), labels.end()).size() != n)
    throw std::invalid_argument("correlation_matrix: duplicate labels");
  const std::size_t len = series.front().size();
  for (const auto& x : series)
    if (x.size() != len) throw std::invalid_argument("correlation_matrix: series lengths differ");
  if (len < 4 * static_cast<std::size_t>(s))
    throw std::invalid_argument("correlation_matrix: series shorter than 4 s");

  std::vector<AssetSegments> cache(n);
  parallel_for(n, workers, [&](std::size_t i) {
    cache[i] = build_segments(series[i], static_cast<std::size_t>(s), poly_degree);
  });

  CorrelationMatrixQ m;
  m.labels = labels;
  m.q = q;
  m.s = s;
  m.rho.assign(n, std::vector<double>(n, kNaN));
  m.ordering.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.ordering[i] = i;
    m.rho[i][i] = 1.0;
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  const std::size_t ss = static_cast<std::size_t>(s);
  const std::size_t M = len / ss * 2;
  parallel_for(pairs.size(), workers, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const AssetSegments& a = cache[i];
    const AssetSegments& b = cache[j];
    std::vector<double> cov(M);
    std::vector<char> degen(M);
    const double inv_s = 1.0 / static_cast<double>(ss);
    for (std::size_t v = 0; v < M; ++v) {
      double c = 0.0;
      const double* ra = a.resid.data() + v * ss;
      const double* rb = b.resid.data() + v * ss;
      for (std::size_t t = 0; t < ss; ++t) c += ra[t] * rb[t];
      cov[v] = c * inv_s;
      degen[v] = a.degenerate[v] || b.degenerate[v] || cov[v] == 0.0;
    }
    const double rho = rho_from_segments(a.var, b.var, cov, degen, q);
    m.rho[i][j] = rho;
    m.rho[j][i] = rho;
  });

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::isnan(m.rho[i][j])) m.missing.emplace_back(i, j);
  return m;
}

DistanceMatrixQ to_distances(const CorrelationMatrixQ& m) {
  DistanceMatrixQ d;
  d.labels = m.labels;
  d.q = m.q;
  d.s = m.s;
  const std::size_t n = m.labels.size();
  d.d.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double r = m.rho[i][j];
      if (!(r >= -1.0 && r <= 1.0))
        throw std::invalid_argument("to_distances: entry outside [-1, 1] at " +
                                    pair_name(m.labels[i], m.labels[j]));
      d.d[i][j] = std::sqrt(2.0 * (1.0 - r));
    }
  }
  return d;
}

MstGraph minimal_spanning_tree(const DistanceMatrixQ& dm) {
  const std::size_t n = dm.labels.size();
  if (n < 2) throw std::invalid_argument("minimal_spanning_tree: need >= 2 nodes");

  std::vector<std::string> missing;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!std::isfinite(dm.d[i][j])) missing.push_back(pair_name(dm.labels[i], dm.labels[j]));
  if (!missing.empty()) {
    std::string msg = "minimal_spanning_tree: missing entries:";
    for (const auto& p : missing) msg += " " + p;
    throw std::invalid_argument(msg);
  }

  MstGraph g;
  g.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.nodes[i].label = dm.labels[i];

  // Prim from the lexicographically smallest label; equal distances break by
  // the lexicographically smallest (min label, max label) pair so the edge
  // set is invariant under input permutation.
  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (dm.labels[i] < dm.labels[start]) start = i;

  const auto edge_less = [&](double da, std::size_t ua, std::size_t va, double db, std::size_t ub,
                             std::size_t vb) {
    if (da != db) return da < db;
    const std::string& alo = std::min(dm.labels[ua], dm.labels[va]);
    const std::string& ahi = std::max(dm.labels[ua], dm.labels[va]);
    const std::string& blo = std::min(dm.labels[ub], dm.labels[vb]);
    const std::string& bhi = std::max(dm.labels[ub], dm.labels[vb]);
    if (alo != blo) return alo < blo;
    return ahi < bhi;
  };

  std::vector<char> in_tree(n, 0);
  in_tree[start] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    bool found = false;
    double best_d = 0.0;
    std::size_t best_u = 0, best_v = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (!in_tree[u]) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (in_tree[v]) continue;
        const double d = dm.d[u][v];
        if (!found || edge_less(d, u, v, best_d, best_u, best_v)) {
          found = true;
          best_d = d;
          best_u = u;
          best_v = v;
        }
      }
    }
    in_tree[best_v] = 1;
    MstEdge e;
    e.i = std::min(best_u, best_v);
    e.j = std::max(best_u, best_v);
    e.distance = best_d;
    e.weight_display = 1.0 - best_d;
    g.edges.push_back(e);
    g.total_distance += best_d;
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const MstEdge& a, const MstEdge& b) {
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  return g;
}

std::vector<HubEntry> hub_report(const MstGraph& g) {
  std::vector<HubEntry> entries(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) entries[i].label = g.nodes[i].label;
  for (const MstEdge& e : g.edges) {
    ++entries[e.i].degree;
    ++entries[e.j].degree;
  }
  std::sort(entries.begin(), entries.end(), [](const HubEntry& a, const HubEntry& b) {
    if (a.degree != b.degree) return a.degree > b.degree;
    return a.label < b.label;
  });
  return entries;
}

IntermarketBlock intermarket_matrix(const std::vector<BarSeries>& rows,
                                    const std::vector<BarSeries>& cols, double q, int s,
                                    const SessionSpec& sessions, int poly_degree,
                                    double coverage_floor, unsigned workers) {
  check_matrix_params(q, s, poly_degree);
  if (rows.empty() || cols.empty()) throw std::invalid_argument("intermarket: empty group");

  IntermarketBlock block;
  block.q = q;
  block.s = s;
  for (const auto& r : rows) block.row_labels.push_back(r.label);
  for (const auto& c : cols) block.col_labels.push_back(c.label);
  block.rho.assign(rows.size(), std::vector<double>(cols.size(), kNaN));
  block.coverage.assign(rows.size(), std::vector<double>(cols.size(), 0.0));

  // Alignment first: refuse the whole block when any pair is under-covered.
  std::vector<std::vector<AlignedPair>> aligned(rows.size());
  std::string low;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      AlignedPair p = align_calendars(rows[i], cols[j], sessions);
      block.coverage[i][j] = p.coverage_fraction;
      if (p.coverage_fraction < coverage_floor)
        low += " " + pair_name(rows[i].label, cols[j].label) + " (" +
               format_double(p.coverage_fraction) + ")";
      aligned[i].push_back(std::move(p));
    }
  }
  if (!low.empty())
    throw std::runtime_error("intermarket: alignment coverage below " +
                             format_double(coverage_floor) + " for:" + low);

  DetrendConfig cfg;
  cfg.poly_degree = poly_degree;
  cfg.scales = {s};
  cfg.q_grid = {q};

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) pairs.emplace_back(i, j);

  parallel_for(pairs.size(), workers, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    std::vector<double> ra, rb;
    aligned_log_returns(aligned[i][j], ra, rb);
    // rho is invariant under affine rescaling, so raw log-returns suffice.
    if (ra.size() >= 4 * static_cast<std::size_t>(s))
      block.rho[i][j] = rho_q(ra, rb, cfg).rho[0][0];
  });
  return block;
}

// ---------------------------------------------------------------------------
// exports

std::string matrix_csv(const CorrelationMatrixQ& m) {
  const std::size_t n = m.labels.size();
  std::string out = "label";
  for (std::size_t j = 0; j < n; ++j) out += "," + m.labels[m.ordering[j]];
  out += "\n";
  for (std::size_t i = 0; i < n; ++i) {
    out += m.labels[m.ordering[i]];
    for (std::size_t j = 0; j < n; ++j)
      out += "," + format_double(m.rho[m.ordering[i]][m.ordering[j]]);
    out += "\n";
  }
  return out;
}

std::string intermarket_csv(const IntermarketBlock& block) {
  std::string out = "label";
  for (const auto& c : block.col_labels) out += "," + c;
  out += "\n";
  for (std::size_t i = 0; i < block.row_labels.size(); ++i) {
    out += block.row_labels[i];
    for (std::size_t j = 0; j < block.col_labels.size(); ++j)
      out += "," + format_double(block.rho[i][j]);
    out += "\n";
  }
  return out;
}

std::string intermarket_coverage_csv(const IntermarketBlock& block) {
  std::string out = "label";
  for (const auto& c : block.col_labels) out += "," + c;
  out += "\n";
  for (std::size_t i = 0; i < block.row_labels.size(); ++i) {
    out += block.row_labels[i];
    for (std::size_t j = 0; j < block.col_labels.size(); ++j)
      out += "," + format_double(block.coverage[i][j]);
    out += "\n";
  }
  return out;
}

std::string mst_json(const MstGraph& g) {
  nlohmann::ordered_json j;
  std::vector<std::size_t> degree(g.nodes.size(), 0);
  for (const MstEdge& e : g.edges) {
    ++degree[e.i];
    ++degree[e.j];
  }
  j["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    nlohmann::ordered_json node;
    node["label"] = g.nodes[i].label;
    if (!g.nodes[i].group.empty()) node["group"] = g.nodes[i].group;
    node["mean_volume"] = g.nodes[i].mean_volume;
    node["degree"] = degree[i];
    j["nodes"].push_back(node);
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const MstEdge& e : g.edges) {
    nlohmann::ordered_json edge;
    edge["a"] = g.nodes[e.i].label;
    edge["b"] = g.nodes[e.j].label;
    edge["distance"] = e.distance;
    edge["weight"] = e.weight_display;
    j["edges"].push_back(edge);
  }
  j["total_distance"] = g.total_distance;
  return j.dump(2) + "\n";
}

std::string mst_graphviz(const MstGraph& g) {
  std::string out = "graph mst {\n";
  for (const MstNode& n : g.nodes) {
    out += "  \"" + n.label + "\" [width=" + format_double(n.mean_volume);
    if (!n.group.empty()) out += ", group=\"" + n.group + "\"";
    out += "];\n";
  }
  for (const MstEdge& e : g.edges) {
    out += "  \"" + g.nodes[e.i].label + "\" -- \"" + g.nodes[e.j].label +
           "\" [len=" + format_double(e.distance) +
           ", penwidth=" + format_double(e.weight_display) + "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace fluct
