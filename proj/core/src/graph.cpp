#include "dralloc/graph.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace dra {

namespace {

void validate_range(const WeightRange& r) {
  if (!(r.lo > 0.0) || !(r.lo <= r.hi)) {
    throw std::invalid_argument("weight range must satisfy 0 < lo <= hi");
  }
}

std::vector<WeightedGraph::Edge> collect_edges(const Eigen::MatrixXd& w) {
  std::vector<WeightedGraph::Edge> edges;
  const int n = static_cast<int>(w.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (w(i, j) > 0.0) edges.push_back({i, j, w(i, j)});
    }
  }
  return edges;
}

}  // namespace

WeightedGraph::WeightedGraph(Eigen::MatrixXd weights) : w_(std::move(weights)) {
  if (w_.rows() != w_.cols() || w_.rows() < 1) {
    throw std::invalid_argument("weight matrix must be square and non-empty");
  }
  n_ = static_cast<int>(w_.rows());
  for (int i = 0; i < n_; ++i) {
    if (w_(i, i) != 0.0) throw std::invalid_argument("weight matrix must have a zero diagonal");
    for (int j = i + 1; j < n_; ++j) {
      if (w_(i, j) != w_(j, i)) throw std::invalid_argument("weight matrix must be symmetric");
      if (w_(i, j) < 0.0 || !std::isfinite(w_(i, j))) {
        throw std::invalid_argument("link weights must be finite and nonnegative");
      }
    }
  }
  edges_ = collect_edges(w_);
}

WeightedGraph::WeightedGraph(unchecked_t, Eigen::MatrixXd weights) : w_(std::move(weights)) {
  n_ = static_cast<int>(w_.rows());
  edges_ = collect_edges(w_);
}

WeightedGraph WeightedGraph::empty(int n) {
  if (n < 1) throw std::invalid_argument("graph needs at least one node");
  return WeightedGraph(Eigen::MatrixXd::Zero(n, n));
}

WeightedGraph build_erdos_renyi(int n, double p, WeightRange range, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("erdos_renyi: n must be >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("erdos_renyi: p must be in [0,1]");
  validate_range(range);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution link(p);
  std::uniform_real_distribution<double> weight(range.lo, range.hi);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (link(rng)) {
        const double v = weight(rng);
        w(i, j) = v;
        w(j, i) = v;
      }
    }
  }
  return WeightedGraph(std::move(w));
}

WeightedGraph build_cycle(int n, WeightRange range, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("cycle: n must be >= 3");
  validate_range(range);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(range.lo, range.hi);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double v = weight(rng);
    w(i, j) = v;
    w(j, i) = v;
  }
  return WeightedGraph(std::move(w));
}

WeightedGraph union_graph(const std::vector<WeightedGraph>& graphs) {
  if (graphs.empty()) throw std::invalid_argument("union_graph: empty list");
  const int n = graphs.front().size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& g : graphs) {
    if (g.size() != n) throw std::invalid_argument("union_graph: mismatched node counts");
    w += g.weights();
  }
  return WeightedGraph(std::move(w));
}

bool is_connected(const WeightedGraph& g) {
  const int n = g.size();
  if (n == 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  return visited == n;
}

GraphSchedule::GraphSchedule(std::vector<WeightedGraph> graphs, double dwell)
    : graphs_(std::move(graphs)), dwell_(dwell) {
  if (graphs_.empty()) throw std::invalid_argument("schedule needs at least one graph");
  if (!(dwell_ > 0.0)) throw std::invalid_argument("schedule dwell must be positive");
  const int n = graphs_.front().size();
  for (const auto& g : graphs_) {
    if (g.size() != n) throw std::invalid_argument("schedule graphs must share the node count");
  }
}

const WeightedGraph& GraphSchedule::graph_at(double t) const {
  if (t < 0.0) t = 0.0;
  const auto idx = static_cast<std::size_t>(std::floor(t / dwell_));
  return graphs_[idx % graphs_.size()];
}

bool check_uniform_connectivity(const GraphSchedule& schedule, double window) {
  if (window < schedule.dwell()) {
    throw std::invalid_argument("uniform connectivity window must be >= dwell");
  }
  const double period = schedule.period();
  const auto count = static_cast<long>(schedule.count());
  for (long k = 0; k * window < period; ++k) {
    // Active graph indices over [k*window, (k+1)*window); the small slack
    // guards the floor/ceil against roundoff at interval boundaries.
    const auto first = static_cast<long>(std::floor(k * window / schedule.dwell() + 1e-12));
    const auto last = static_cast<long>(std::ceil((k + 1) * window / schedule.dwell() - 1e-12)) - 1;
    std::vector<WeightedGraph> active;
    for (long g = first; g <= last; ++g) {
      active.push_back(schedule.graph_by_index(static_cast<std::size_t>(g % count)));
    }
    if (!is_connected(union_graph(active))) return false;
  }
  return true;
}

GraphSchedule build_er_schedule(int graph_count, int n, double p, WeightRange range,
                                double dwell, std::uint64_t seed) {
  if (graph_count < 1) throw std::invalid_argument("er schedule: graph_count must be >= 1");
  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<WeightedGraph> graphs;
    graphs.reserve(static_cast<std::size_t>(graph_count));
    for (int g = 0; g < graph_count; ++g) {
      graphs.push_back(build_erdos_renyi(
          n, p, range, seed + static_cast<std::uint64_t>(attempt * graph_count + g)));
    }
    if (is_connected(union_graph(graphs))) return GraphSchedule(std::move(graphs), dwell);
  }
  throw std::runtime_error(
      "er schedule: union not connected after 64 attempts; raise p or the graph count");
}

void write_edge_list(std::ostream& os, const WeightedGraph& g) {
  char buf[64];
  for (const auto& e : g.edges()) {
    std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", e.i, e.j, e.w);
    os << buf;
  }
}

WeightedGraph read_edge_list(std::istream& is, int n) {
  struct Triple {
    int i, j;
    double w;
  };
  std::vector<Triple> triples;
  int max_index = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Triple t{};
    if (!(ls >> t.i >> t.j >> t.w)) {
      throw std::invalid_argument("edge list: malformed line " + std::to_string(line_no));
    }
    if (t.i < 0 || t.j < 0 || t.i == t.j || t.w <= 0.0) {
      throw std::invalid_argument("edge list: invalid triple on line " + std::to_string(line_no));
    }
    max_index = std::max(max_index, std::max(t.i, t.j));
    triples.push_back(t);
  }
  const int count = n >= 0 ? n : max_index + 1;
  if (count < 1 || max_index >= count) {
    throw std::invalid_argument("edge list: node index out of range");
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(count, count);
  for (const auto& t : triples) {
    w(t.i, t.j) = t.w;
    w(t.j, t.i) = t.w;
  }
  return WeightedGraph(std::move(w));
}

}  // namespace dra
