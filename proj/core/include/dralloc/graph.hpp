#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace dra {

/// Closed weight interval for random link weights, 0 < lo <= hi.
struct WeightRange {
  double lo = 0.5;
  double hi = 1.0;
};

/// Undirected weighted graph on n nodes.
///
/// Invariants: the weight matrix is symmetric with zero diagonal and
/// nonnegative entries; a link (i,j) exists iff weights(i,j) > 0. Instances
/// are immutable after construction and safe to share across threads.
class WeightedGraph {
 public:
  struct Edge {
    int i;
    int j;  // i < j
    double w;
  };

  /// Validates symmetry, zero diagonal and nonnegativity.
  explicit WeightedGraph(Eigen::MatrixXd weights);

  /// Tag type for the validation bypass below.
  struct unchecked_t {};

  /// Wraps a weight matrix without checking the invariants. Intended for
  /// tests that deliberately inject invalid graphs; regular code should use
  /// the checked constructor.
  WeightedGraph(unchecked_t, Eigen::MatrixXd weights);

  static WeightedGraph empty(int n);

  int size() const { return n_; }
  const Eigen::MatrixXd& weights() const { return w_; }
  double weight(int i, int j) const { return w_(i, j); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Row sums of the weight matrix (weighted degree per node).
  Eigen::VectorXd weighted_degrees() const { return w_.rowwise().sum(); }

 private:
  int n_ = 0;
  Eigen::MatrixXd w_;
  std::vector<Edge> edges_;
};

/// Each unordered pair is linked independently with probability p; present
/// links draw a weight uniformly from `range`. Deterministic given the seed.
WeightedGraph build_erdos_renyi(int n, double p, WeightRange range, std::uint64_t seed);

/// Ring 0-1-...-(n-1)-0 with random weights from `range`. Requires n >= 3.
WeightedGraph build_cycle(int n, WeightRange range, std::uint64_t seed);

/// Entrywise sum of the weight matrices; a link is present in the union iff
/// it is present in any input.
WeightedGraph union_graph(const std::vector<WeightedGraph>& graphs);

/// True iff the positive-weight links connect all nodes.
bool is_connected(const WeightedGraph& g);

/// Piecewise-constant, right-continuous cyclic schedule: graph k is active on
/// [k*dwell, (k+1)*dwell), repeating with period count()*dwell.
class GraphSchedule {
 public:
  GraphSchedule(std::vector<WeightedGraph> graphs, double dwell);

  const WeightedGraph& graph_at(double t) const;
  const WeightedGraph& graph_by_index(std::size_t k) const { return graphs_[k % graphs_.size()]; }

  std::size_t count() const { return graphs_.size(); }
  double dwell() const { return dwell_; }
  double period() const { return dwell_ * static_cast<double>(graphs_.size()); }
  int size() const { return graphs_.front().size(); }
  const std::vector<WeightedGraph>& graphs() const { return graphs_; }

 private:
  std::vector<WeightedGraph> graphs_;
  double dwell_;
};

/// True iff over one full schedule period every window-aligned interval
/// [k*window, (k+1)*window) has a connected union of active graphs.
/// Requires window >= dwell.
bool check_uniform_connectivity(const GraphSchedule& schedule, double window);

/// Builds a cyclic schedule of `graph_count` Erdos-Renyi graphs. Individual
/// graphs may be disconnected; generation retries with an advanced seed
/// (bounded) until the union of all graphs is connected.
GraphSchedule build_er_schedule(int graph_count, int n, double p, WeightRange range,
                                double dwell, std::uint64_t seed);

/// Plain-text adjacency triples, one link per line: "i j w" with 0-based
/// indices and enough digits to round-trip the weight.
void write_edge_list(std::ostream& os, const WeightedGraph& g);

/// Reads the triple format back. When n < 0 the node count is inferred as
/// max index + 1 (trailing isolated nodes cannot be recovered that way).
WeightedGraph read_edge_list(std::istream& is, int n = -1);

}  // namespace dra
