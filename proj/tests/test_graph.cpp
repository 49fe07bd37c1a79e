#include <doctest.h>

#include <random>
#include <sstream>

#include "dralloc/graph.hpp"

using dra::GraphSchedule;
using dra::WeightedGraph;
using dra::WeightRange;

TEST_CASE("erdos-renyi with p=1 is the complete graph") {
  const auto g = dra::build_erdos_renyi(3, 1.0, {1.0, 1.0}, 42);
  CHECK(g.size() == 3);
  CHECK(g.edges().size() == 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(g.weight(i, j) == (i == j ? 0.0 : 1.0));
    }
  }
}

TEST_CASE("erdos-renyi with p=0 is empty") {
  const auto g = dra::build_erdos_renyi(5, 0.0, {1.0, 1.0}, 1);
  CHECK(g.edges().empty());
  CHECK(g.weights().isZero(0.0));
}

TEST_CASE("erdos-renyi invariants and reproducibility") {
  const auto g1 = dra::build_erdos_renyi(100, 0.02, {0.5, 1.0}, 7);
  const auto g2 = dra::build_erdos_renyi(100, 0.02, {0.5, 1.0}, 7);
  CHECK(g1.weights() == g2.weights());  // bitwise
  CHECK(g1.weights().transpose() == g1.weights());
  CHECK(g1.weights().diagonal().isZero(0.0));
  CHECK((g1.weights().array() >= 0.0).all());
  const auto g3 = dra::build_erdos_renyi(100, 0.02, {0.5, 1.0}, 8);
  CHECK(g1.weights() != g3.weights());
}

TEST_CASE("erdos-renyi rejects bad parameters") {
  CHECK_THROWS_AS(dra::build_erdos_renyi(1, 0.5, {0.5, 1.0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(dra::build_erdos_renyi(5, 1.5, {0.5, 1.0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(dra::build_erdos_renyi(5, 0.5, {0.0, 1.0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(dra::build_erdos_renyi(5, 0.5, {2.0, 1.0}, 0), std::invalid_argument);
}

TEST_CASE("cycle graph structure") {
  const auto tri = dra::build_cycle(3, {1.0, 1.0}, 5);
  CHECK(tri.edges().size() == 3);
  CHECK(tri.weight(0, 1) == 1.0);
  CHECK(tri.weight(1, 2) == 1.0);
  CHECK(tri.weight(0, 2) == 1.0);

  const auto ring = dra::build_cycle(10, {0.5, 1.0}, 3);
  CHECK(ring.edges().size() == 10);
  const Eigen::VectorXd deg = ring.weights().unaryExpr([](double w) { return w > 0 ? 1.0 : 0.0; })
                                  .rowwise()
                                  .sum();
  for (int i = 0; i < 10; ++i) CHECK(deg(i) == 2.0);

  const auto quad = dra::build_cycle(4, {2.0, 2.0}, 9);
  CHECK(quad.weight(0, 1) == 2.0);
  CHECK(quad.weight(1, 2) == 2.0);
  CHECK(quad.weight(2, 3) == 2.0);
  CHECK(quad.weight(3, 0) == 2.0);
  CHECK(quad.weight(0, 2) == 0.0);
  CHECK(quad.weight(1, 3) == 0.0);

  CHECK_THROWS_AS(dra::build_cycle(2, {1.0, 1.0}, 0), std::invalid_argument);
}

TEST_CASE("graph constructor validates invariants") {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
  w(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS_AS(WeightedGraph{w}, std::invalid_argument);
  w(1, 0) = 1.0;
  CHECK_NOTHROW(WeightedGraph{w});
  w(0, 0) = 0.5;
  CHECK_THROWS_AS(WeightedGraph{w}, std::invalid_argument);
  w(0, 0) = 0.0;
  w(0, 1) = w(1, 0) = -1.0;
  CHECK_THROWS_AS(WeightedGraph{w}, std::invalid_argument);
}

namespace {

WeightedGraph path_graph(int n, std::initializer_list<std::pair<int, int>> links) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : links) w(i, j) = w(j, i) = 1.0;
  return WeightedGraph(std::move(w));
}

}  // namespace

TEST_CASE("union of paths connects the endpoints") {
  const auto a = path_graph(3, {{0, 1}});
  const auto b = path_graph(3, {{1, 2}});
  const auto u = dra::union_graph({a, b});
  CHECK(dra::is_connected(u));
  CHECK_FALSE(dra::is_connected(a));

  const auto doubled = dra::union_graph({a, a});
  CHECK(doubled.weight(0, 1) == 2.0);
  CHECK(doubled.edges().size() == a.edges().size());

  const auto empty = dra::union_graph({WeightedGraph::empty(4), WeightedGraph::empty(4)});
  CHECK(empty.edges().empty());

  CHECK_THROWS_AS(dra::union_graph({a, WeightedGraph::empty(4)}), std::invalid_argument);
  CHECK_THROWS_AS(dra::union_graph({}), std::invalid_argument);
}

TEST_CASE("connectivity checks") {
  CHECK(dra::is_connected(dra::build_erdos_renyi(3, 1.0, {1.0, 1.0}, 0)));
  CHECK_FALSE(dra::is_connected(WeightedGraph::empty(2)));
  CHECK_FALSE(dra::is_connected(path_graph(4, {{0, 1}, {2, 3}})));
  CHECK(dra::is_connected(WeightedGraph::empty(1)));
}

TEST_CASE("union connectivity equals connectivity of the OR of edge sets") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<WeightedGraph> graphs;
    const int n = 6;
    for (int g = 0; g < 3; ++g) {
      graphs.push_back(dra::build_erdos_renyi(n, 0.15, {0.5, 1.0}, rng()));
    }
    Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(n, n);
    for (const auto& g : graphs) {
      for (const auto& e : g.edges()) mask(e.i, e.j) = mask(e.j, e.i) = 1.0;
    }
    CHECK(dra::is_connected(dra::union_graph(graphs)) ==
          dra::is_connected(WeightedGraph(mask)));
  }
}

TEST_CASE("schedule indexing is cyclic and right-continuous") {
  std::vector<WeightedGraph> graphs{path_graph(3, {{0, 1}}), path_graph(3, {{1, 2}})};
  GraphSchedule sched(graphs, 0.1);
  CHECK(sched.period() == doctest::Approx(0.2));
  CHECK(&sched.graph_at(0.0) == &sched.graphs()[0]);
  CHECK(&sched.graph_at(0.05) == &sched.graphs()[0]);
  CHECK(&sched.graph_at(0.1) == &sched.graphs()[1]);
  CHECK(&sched.graph_at(0.2) == &sched.graphs()[0]);  // wraps
  CHECK(&sched.graph_by_index(3) == &sched.graphs()[1]);

  CHECK_THROWS_AS(GraphSchedule(graphs, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GraphSchedule({}, 0.1), std::invalid_argument);
}

TEST_CASE("uniform connectivity over windows") {
  // Four graphs, each one edge of a 5-node star; the union over one period
  // is the full star.
  std::vector<WeightedGraph> quarters;
  for (int leaf = 1; leaf <= 4; ++leaf) quarters.push_back(path_graph(5, {{0, leaf}}));
  GraphSchedule sched(quarters, 0.1);
  CHECK(dra::check_uniform_connectivity(sched, 0.4));
  CHECK_FALSE(dra::check_uniform_connectivity(sched, 0.2));

  GraphSchedule empty({WeightedGraph::empty(3)}, 0.1);
  CHECK_FALSE(dra::check_uniform_connectivity(empty, 0.1));

  GraphSchedule single({path_graph(3, {{0, 1}, {1, 2}})}, 0.1);
  CHECK(dra::check_uniform_connectivity(single, 0.1));
  CHECK(dra::check_uniform_connectivity(single, 1.0));

  CHECK_THROWS_AS(dra::check_uniform_connectivity(single, 0.05), std::invalid_argument);
}

TEST_CASE("er schedule retries until the union connects") {
  const auto sched = dra::build_er_schedule(4, 30, 0.05, {0.5, 1.0}, 0.1, 3);
  CHECK(sched.count() == 4);
  CHECK(dra::is_connected(dra::union_graph(sched.graphs())));
  CHECK(dra::check_uniform_connectivity(sched, sched.period()));
  // Hopeless density cannot connect and must throw after bounded retries.
  CHECK_THROWS_AS(dra::build_er_schedule(2, 40, 0.0, {0.5, 1.0}, 0.1, 1), std::runtime_error);
}

TEST_CASE("edge list round trip") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = dra::build_erdos_renyi(12, 0.3, {0.25, 2.0}, rng());
    std::stringstream ss;
    dra::write_edge_list(ss, g);
    const auto back = dra::read_edge_list(ss, g.size());
    CHECK(back.weights() == g.weights());  // bitwise through the decimal form
  }

  std::stringstream bad("0 0 1.0\n");
  CHECK_THROWS_AS(dra::read_edge_list(bad), std::invalid_argument);
  std::stringstream garbled("0 x 1.0\n");
  CHECK_THROWS_AS(dra::read_edge_list(garbled), std::invalid_argument);
}
