#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "majoq/gluedtrees.hpp"
#include "majoq/trajectory.hpp"

using namespace majoq;

namespace {

void check_invariants(const GluedTreeGraph& g) {
  const int n = g.height;
  const int expected_vertices = 2 * ((1 << (n + 1)) - 1);
  REQUIRE(g.vertex_count() == expected_vertices);
  REQUIRE(static_cast<int>(g.edges.size()) ==
          2 * ((1 << (n + 1)) - 2) + (1 << (n + 1)));

  // Degrees: roots 2, everything else 3.
  std::vector<int> degree(g.vertex_count(), 0);
  for (const auto& e : g.edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    const bool is_root = v == g.in_vertex || v == g.out_vertex;
    CHECK(degree[v] == (is_root ? 2 : 3));
  }

  // Proper coloring is enforced by neighbor_by_color; cross-check it.
  std::vector<std::set<int>> seen(g.vertex_count());
  for (const auto& e : g.edges) {
    CHECK(e.color >= 0);
    CHECK(e.color < kEdgeColors);
    CHECK(seen[e.u].insert(e.color).second);
    CHECK(seen[e.v].insert(e.color).second);
  }

  // The gluing edges form one cycle alternating between the two leaf sets.
  const std::vector<int> sizes = column_sizes(n);
  std::vector<GluedTreeGraph::Edge> cycle_edges;
  for (const auto& e : g.edges) {
    const bool u_leaf = g.column[e.u] == n || g.column[e.u] == n + 1;
    const bool v_leaf = g.column[e.v] == n || g.column[e.v] == n + 1;
    if (u_leaf && v_leaf) {
      cycle_edges.push_back(e);
    }
  }
  CHECK(static_cast<int>(cycle_edges.size()) == 1 << (n + 1));
  std::vector<std::vector<int>> adj(g.vertex_count());
  for (const auto& e : cycle_edges) {
    CHECK(g.column[e.u] != g.column[e.v]);  // alternates between the trees
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  int current = cycle_edges.front().u;
  int previous = -1;
  int length = 0;
  do {
    REQUIRE(adj[current].size() == 2);
    const int next = adj[current][0] == previous ? adj[current][1] : adj[current][0];
    previous = current;
    current = next;
    ++length;
    REQUIRE(length <= 2 * g.vertex_count());
  } while (current != cycle_edges.front().u);
  CHECK(length == 1 << (n + 1));

  // Names are unique and never the sentinel.
  std::set<std::uint64_t> names(g.names.begin(), g.names.end());
  CHECK(names.size() == g.names.size());
  CHECK_FALSE(names.contains(g.sentinel));
  for (std::uint64_t name : g.names) {
    CHECK(name < (std::uint64_t{1} << g.name_bits));
  }
}

}  // namespace

TEST_SUITE("gluedtrees") {

TEST_CASE("graph sizes at small heights") {
  const GluedTreeGraph g1 = build_graph(1, 7);
  CHECK(g1.vertex_count() == 6);
  int tree_edges = 0, cycle_edges = 0;
  for (const auto& e : g1.edges) {
    const bool crossing = (g1.column[e.u] <= 1) != (g1.column[e.v] <= 1);
    (crossing ? cycle_edges : tree_edges) += 1;
  }
  CHECK(tree_edges == 4);
  CHECK(cycle_edges == 4);

  CHECK(build_graph(3, 7).vertex_count() == 30);
  CHECK(build_graph(4, 7).vertex_count() == 62);
}

TEST_CASE("graph invariants across seeds") {
  for (int n = 1; n <= 4; ++n) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      check_invariants(build_graph(n, seed));
    }
  }
}

TEST_CASE("construction is deterministic under a fixed seed") {
  const GluedTreeGraph a = build_graph(3, 123);
  const GluedTreeGraph b = build_graph(3, 123);
  CHECK(a.names == b.names);
  REQUIRE(a.edges.size() == b.edges.size());
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    CHECK(a.edges[i].u == b.edges[i].u);
    CHECK(a.edges[i].v == b.edges[i].v);
    CHECK(a.edges[i].color == b.edges[i].color);
  }
}

TEST_CASE("oracle round trips and sentinel behavior") {
  for (int n : {1, 2, 3, 4}) {
    const GluedTreeGraph g = build_graph(n, 5 + n);
    for (int v = 0; v < g.vertex_count(); ++v) {
      for (int c = 0; c < kEdgeColors; ++c) {
        const std::uint64_t answer = oracle_query(g, g.names[v], c);
        if (g.neighbor_by_color[v][c] < 0) {
          CHECK(answer == g.sentinel);
        } else {
          CHECK(answer == g.names[g.neighbor_by_color[v][c]]);
          CHECK(oracle_query(g, answer, c) == g.names[v]);
        }
      }
    }
    CHECK(oracle_query(g, g.sentinel, 0) == g.sentinel);
    CHECK(oracle_query(g, g.names[0], 99) == g.sentinel);
    // Some 2n-bit string that names no vertex (counting guarantees one).
    std::set<std::uint64_t> used(g.names.begin(), g.names.end());
    for (std::uint64_t probe = 0;; ++probe) {
      if (!used.contains(probe) && probe != g.sentinel) {
        CHECK(oracle_query(g, probe, 0) == g.sentinel);
        break;
      }
    }
  }
}

TEST_CASE("column hamiltonian structure") {
  const Eigen::MatrixXd h1 = column_hamiltonian(1);
  CHECK(h1(0, 1) == doctest::Approx(1.0));
  CHECK(h1(1, 2) == doctest::Approx(std::numbers::sqrt2));
  CHECK(h1(2, 3) == doctest::Approx(1.0));
  CHECK(h1.diagonal().cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXd h4 = column_hamiltonian(4);
  const int dim = 10;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      CHECK(h4(i, j) == doctest::Approx(h4(dim - 1 - i, dim - 1 - j)));
    }
  }
}

TEST_CASE("column hamiltonian equals the projected adjacency") {
  for (int n = 1; n <= 4; ++n) {
    const GluedTreeGraph g = build_graph(n, 41 + n);
    const std::vector<int> sizes = column_sizes(n);
    const int cols = 2 * n + 2;
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(g.vertex_count(), cols);
    int offset = 0;
    for (int j = 0; j < cols; ++j) {
      for (int i = 0; i < sizes[j]; ++i) {
        basis(offset + i, j) = 1.0 / std::sqrt(double(sizes[j]));
      }
      offset += sizes[j];
    }
    const Eigen::MatrixXd projected =
        basis.transpose() * (adjacency_matrix(g) / std::numbers::sqrt2) * basis;
    CHECK((projected - column_hamiltonian(n)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("walk starts on the entrance column") {
  const WalkTrace trace = evolve_walk(4, 1.0, 0.5, 1);
  CHECK(std::norm(trace.records.front().column_amps(0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("even columns stay real, odd columns imaginary") {
  const WalkTrace trace = evolve_walk(4, 12.0, 0.05, 1);
  for (const WalkRecord& rec : trace.records) {
    for (int j = 0; j < rec.column_amps.size(); ++j) {
      if (j % 2 == 0) {
        CHECK(std::abs(rec.column_amps(j).imag()) <= 1e-9);
      } else {
        CHECK(std::abs(rec.column_amps(j).real()) <= 1e-9);
      }
    }
  }
}

TEST_CASE("full-graph evolution stays in the column subspace") {
  for (int n : {1, 2, 3}) {
    const GluedTreeGraph g = build_graph(n, 91 + n);
    std::vector<double> times;
    for (int k = 0; k <= 40; ++k) {
      times.push_back(k * 0.25);
    }
    const Eigen::MatrixXcd full = full_graph_column_amplitudes(g, times);
    const WalkTrace reduced = evolve_walk(n, 10.0, 0.25, 1);
    REQUIRE(static_cast<int>(reduced.records.size()) >= 41);
    double norm_check = 0.0;
    for (int k = 0; k <= 40; ++k) {
      const Eigen::VectorXcd diff =
          full.col(k) - reduced.records[k].column_amps;
      CHECK(diff.cwiseAbs().maxCoeff() <= 1e-8);
      norm_check = std::max(norm_check, std::abs(full.col(k).norm() - 1.0));
    }
    CHECK(norm_check <= 1e-9);  // no leakage out of the column subspace
  }
}

TEST_CASE("first exit-probability peak: frozen regression baseline") {
  // Transmission through the sqrt(2) defect peaks below unity. Baseline
  // computed from the dense eigendecomposition on a 0.01 mesh.
  const WalkTrace trace = evolve_walk(4, 12.0, 0.01, 1);
  const auto p_out = trace.p_out_curve();
  const auto peak = first_peak_index(p_out, 0.01);
  REQUIRE(peak.has_value());
  CHECK(trace.records[*peak].t == doctest::Approx(5.90).epsilon(0.004));
  CHECK(p_out[*peak] == doctest::Approx(0.722072920386).epsilon(1e-9));
  CHECK(p_out[*peak] < 1.0);

  // The independent full-graph route reproduces the same peak value.
  const GluedTreeGraph g = build_graph(4, 17);
  const Eigen::MatrixXcd cols =
      full_graph_column_amplitudes(g, {trace.records[*peak].t});
  CHECK(std::norm(cols(9, 0)) == doctest::Approx(p_out[*peak]).epsilon(1e-10));
}

TEST_CASE("node views") {
  const WalkTrace trace = evolve_walk(4, 6.0, 0.05, 1);
  const auto full = node_view(trace, NodeView::FullNodes);
  CHECK(full.front().size() == 62);
  CHECK(full.front()[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& row : full) {
    double sum = 0.0;
    for (double v : row) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  const auto columns = node_view(trace, NodeView::Columns);
  CHECK(columns.front().size() == 10);
  for (const auto& row : columns) {
    double sum = 0.0;
    for (double v : row) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  const auto one = node_view(trace, NodeView::OnePerColumn);
  CHECK(one.front().size() == 10);

  const WalkTrace big = evolve_walk(10, 1.0, 0.5, 1);
  CHECK(node_view(big, NodeView::OnePerColumn).front().size() == 22);
}

}  // TEST_SUITE
