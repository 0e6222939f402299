#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace majoq {

inline constexpr int kEdgeColors = 4;

/// Two balanced binary trees of height n glued at the leaves by a random
/// cycle that alternates between the trees. Vertices carry unique random
/// names; the all-ones string is reserved as the oracle failure sentinel.
struct GluedTreeGraph {
  struct Edge {
    int u = 0;
    int v = 0;
    int color = 0;
  };

  int height = 0;     // n
  int name_bits = 0;  // 2n, widened only when 2n bits cannot hold the graph
  std::uint64_t seed = 0;
  std::uint64_t sentinel = 0;  // all-ones name

  std::vector<std::uint64_t> names;  // by vertex id
  std::vector<int> column;           // by vertex id, 0 .. 2n+1
  std::vector<Edge> edges;
  std::vector<std::array<int, kEdgeColors>> neighbor_by_color;  // -1 = none
  std::unordered_map<std::uint64_t, int> id_by_name;

  int in_vertex = 0;   // left root id
  int out_vertex = 0;  // right root id

  int vertex_count() const { return static_cast<int>(names.size()); }
};

GluedTreeGraph build_graph(int height, std::uint64_t seed);

/// Black-box neighbor lookup: name of the vertex joined to `name` by the
/// color-c edge, or the all-ones sentinel when there is no such vertex/edge.
std::uint64_t oracle_query(const GluedTreeGraph& graph, std::uint64_t name,
                           int color);

/// N_j = 2^j up the left tree, mirrored down the right tree; length 2n+2.
std::vector<int> column_sizes(int height);

/// Tridiagonal column-subspace Hamiltonian: unit couplings with a sqrt(2)
/// defect across the central gluing.
Eigen::MatrixXd column_hamiltonian(int height);

Eigen::MatrixXd adjacency_matrix(const GluedTreeGraph& graph);

struct WalkRecord {
  double t = 0.0;
  Eigen::VectorXcd column_amps;
  double p_out = 0.0;
};

struct WalkTrace {
  int height = 0;
  std::vector<WalkRecord> records;

  std::vector<double> p_out_curve() const;
  std::vector<double> times() const;
};

/// Evolves |col 0> under exp(-iHt) by exact eigendecomposition, sampling
/// every stride-th multiple of dt up to t_max.
WalkTrace evolve_walk(int height, double t_max, double dt, int stride);

enum class NodeView { FullNodes, OnePerColumn, Columns };

/// Per-snapshot measurement vectors. FullNodes spreads each column weight
/// over its N_j vertices (a genuine distribution); OnePerColumn is the
/// unnormalized vector of per-node values; Columns is the column distribution.
std::vector<std::vector<double>> node_view(const WalkTrace& trace, NodeView view);

/// Column amplitudes obtained by evolving on the full graph Hilbert space
/// under adjacency/sqrt(2) from the IN vertex; one column per sample time.
Eigen::MatrixXcd full_graph_column_amplitudes(const GluedTreeGraph& graph,
                                              const std::vector<double>& times);

/// Exact step propagator exp(-iH dt) on the full node space, for
/// interference-residual checks on node-view snapshots.
Eigen::MatrixXcd full_graph_step_propagator(const GluedTreeGraph& graph,
                                            double dt);

}  // namespace majoq
