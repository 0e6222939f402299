#include "majoq/gluedtrees.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

#include "majoq/rand_util.hpp"

namespace majoq {

namespace {

std::vector<int> column_offsets(int height) {
  const std::vector<int> sizes = column_sizes(height);
  std::vector<int> offsets(sizes.size() + 1, 0);
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    offsets[j + 1] = offsets[j] + sizes[j];
  }
  return offsets;
}

}  // namespace

std::vector<int> column_sizes(int height) {
  if (height < 1) {
    throw std::invalid_argument("column_sizes: height must be >= 1");
  }
  std::vector<int> sizes(2 * height + 2);
  for (int j = 0; j <= height; ++j) {
    sizes[j] = 1 << j;
    sizes[2 * height + 1 - j] = 1 << j;
  }
  return sizes;
}

GluedTreeGraph build_graph(int height, std::uint64_t seed) {
  if (height < 1 || height > 16) {
    throw std::invalid_argument("build_graph: height out of range");
  }
  const int n = height;
  const int leaves = 1 << n;
  const std::vector<int> offsets = column_offsets(n);
  const int vcount = offsets.back();

  GluedTreeGraph g;
  g.height = n;
  g.seed = seed;
  g.column.resize(vcount);
  for (int col = 0; col < 2 * n + 2; ++col) {
    for (int i = offsets[col]; i < offsets[col + 1]; ++i) {
      g.column[i] = col;
    }
  }
  // Left tree levels live at columns 0..n, right tree levels mirrored.
  auto left_id = [&](int level, int i) { return offsets[level] + i; };
  auto right_id = [&](int level, int i) { return offsets[2 * n + 1 - level] + i; };
  g.in_vertex = left_id(0, 0);
  g.out_vertex = right_id(0, 0);

  g.neighbor_by_color.assign(vcount, {-1, -1, -1, -1});
  auto add_edge = [&](int u, int v, int color) {
    if (g.neighbor_by_color[u][color] != -1 ||
        g.neighbor_by_color[v][color] != -1) {
      throw std::runtime_error("build_graph: color clash");
    }
    g.neighbor_by_color[u][color] = v;
    g.neighbor_by_color[v][color] = u;
    g.edges.push_back({u, v, color});
  };

  // Tree edges, properly 3-colored level by level: a node whose parent edge
  // has color c gives its children the two remaining colors of {0,1,2}.
  std::vector<int> tree_color(vcount, -1);
  for (int side = 0; side < 2; ++side) {
    auto id_of = [&](int level, int i) {
      return side == 0 ? left_id(level, i) : right_id(level, i);
    };
    for (int level = 0; level < n; ++level) {
      for (int i = 0; i < (1 << level); ++i) {
        const int parent = id_of(level, i);
        int next = 0;
        for (int child = 0; child < 2; ++child) {
          while (next == tree_color[parent]) {
            ++next;
          }
          const int kid = id_of(level + 1, 2 * i + child);
          add_edge(parent, kid, next);
          tree_color[kid] = next;
          ++next;
        }
      }
    }
  }

  // Random alternating cycle through the leaves. Edges at odd cycle
  // positions take the fourth color; even positions take the color of
  // {0,1,2} not used by either leaf's tree edge.
  std::mt19937_64 rng(seed);
  std::vector<int> left_order(leaves), right_order(leaves);
  for (int i = 0; i < leaves; ++i) {
    left_order[i] = i;
    right_order[i] = i;
  }
  shuffle_in_place(left_order, rng);
  shuffle_in_place(right_order, rng);
  auto free_color = [&](int u, int v) {
    for (int c = 0; c < 3; ++c) {
      if (tree_color[u] != c && tree_color[v] != c) {
        return c;
      }
    }
    throw std::runtime_error("build_graph: no free cycle color");
  };
  for (int i = 0; i < leaves; ++i) {
    const int lu = left_id(n, left_order[i]);
    const int rv = right_id(n, right_order[i]);
    add_edge(lu, rv, free_color(lu, rv));
    const int lnext = left_id(n, left_order[(i + 1) % leaves]);
    add_edge(rv, lnext, 3);
  }

  // Unique random names; the all-ones string stays reserved.
  g.name_bits = 2 * n;
  while (((std::uint64_t{1} << g.name_bits) - 1) <
         static_cast<std::uint64_t>(vcount)) {
    ++g.name_bits;
  }
  g.sentinel = (std::uint64_t{1} << g.name_bits) - 1;
  std::unordered_set<std::uint64_t> used;
  g.names.resize(vcount);
  for (int v = 0; v < vcount; ++v) {
    std::uint64_t name = uniform_below(rng, g.sentinel);
    while (used.contains(name)) {
      name = uniform_below(rng, g.sentinel);
    }
    used.insert(name);
    g.names[v] = name;
    g.id_by_name.emplace(name, v);
  }
  return g;
}

std::uint64_t oracle_query(const GluedTreeGraph& graph, std::uint64_t name,
                           int color) {
  if (color < 0 || color >= kEdgeColors) {
    return graph.sentinel;
  }
  const auto it = graph.id_by_name.find(name);
  if (it == graph.id_by_name.end()) {
    return graph.sentinel;
  }
  const int neighbor = graph.neighbor_by_color[it->second][color];
  return neighbor < 0 ? graph.sentinel : graph.names[neighbor];
}

Eigen::MatrixXd column_hamiltonian(int height) {
  if (height < 1) {
    throw std::invalid_argument("column_hamiltonian: height must be >= 1");
  }
  const int dim = 2 * height + 2;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j + 1 < dim; ++j) {
    const double coupling = j == height ? std::numbers::sqrt2 : 1.0;
    h(j, j + 1) = coupling;
    h(j + 1, j) = coupling;
  }
  return h;
}

Eigen::MatrixXd adjacency_matrix(const GluedTreeGraph& graph) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(graph.vertex_count(),
                                            graph.vertex_count());
  for (const GluedTreeGraph::Edge& e : graph.edges) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

std::vector<double> WalkTrace::p_out_curve() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const WalkRecord& r : records) {
    out.push_back(r.p_out);
  }
  return out;
}

std::vector<double> WalkTrace::times() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const WalkRecord& r : records) {
    out.push_back(r.t);
  }
  return out;
}

WalkTrace evolve_walk(int height, double t_max, double dt, int stride) {
  if (dt <= 0.0 || t_max < 0.0) {
    throw std::invalid_argument("evolve_walk: need dt > 0 and t_max >= 0");
  }
  if (stride < 1) {
    throw std::invalid_argument("evolve_walk: stride must be >= 1");
  }
  const int dim = 2 * height + 2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(column_hamiltonian(height));
  const Eigen::VectorXd start = solver.eigenvectors().row(0).transpose();

  WalkTrace trace;
  trace.height = height;
  const std::complex<double> imag_unit(0.0, 1.0);
  const int samples = static_cast<int>(std::floor(t_max / dt + 1e-9));
  for (int j = 0; j <= samples; ++j) {
    if (j % stride != 0 && j != samples) {
      continue;
    }
    const double t = j * dt;
    const Eigen::VectorXcd phases =
        (-imag_unit * t * solver.eigenvalues().array()).exp().matrix();
    WalkRecord rec;
    rec.t = t;
    rec.column_amps =
        solver.eigenvectors() * (phases.array() * start.array()).matrix();
    rec.p_out = std::norm(rec.column_amps(dim - 1));
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

std::vector<std::vector<double>> node_view(const WalkTrace& trace,
                                           NodeView view) {
  const std::vector<int> sizes = column_sizes(trace.height);
  const int cols = static_cast<int>(sizes.size());
  std::vector<std::vector<double>> out;
  out.reserve(trace.records.size());
  for (const WalkRecord& rec : trace.records) {
    if (rec.column_amps.size() != cols) {
      throw std::invalid_argument("node_view: trace/height mismatch");
    }
    std::vector<double> row;
    switch (view) {
      case NodeView::FullNodes:
        for (int j = 0; j < cols; ++j) {
          const double per_node = std::norm(rec.column_amps(j)) / sizes[j];
          row.insert(row.end(), sizes[j], per_node);
        }
        break;
      case NodeView::OnePerColumn:
        for (int j = 0; j < cols; ++j) {
          row.push_back(std::norm(rec.column_amps(j)) / sizes[j]);
        }
        break;
      case NodeView::Columns:
        for (int j = 0; j < cols; ++j) {
          row.push_back(std::norm(rec.column_amps(j)));
        }
        break;
    }
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::MatrixXcd full_graph_column_amplitudes(const GluedTreeGraph& graph,
                                              const std::vector<double>& times) {
  const int cols = 2 * graph.height + 2;
  const std::vector<int> sizes = column_sizes(graph.height);
  const std::vector<int> offsets = column_offsets(graph.height);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      adjacency_matrix(graph) / std::numbers::sqrt2);
  const Eigen::VectorXd start =
      solver.eigenvectors().row(graph.in_vertex).transpose();

  const std::complex<double> imag_unit(0.0, 1.0);
  Eigen::MatrixXcd out(cols, static_cast<Eigen::Index>(times.size()));
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Eigen::VectorXcd phases =
        (-imag_unit * times[k] * solver.eigenvalues().array()).exp().matrix();
    const Eigen::VectorXcd psi =
        solver.eigenvectors() * (phases.array() * start.array()).matrix();
    for (int j = 0; j < cols; ++j) {
      out(j, static_cast<Eigen::Index>(k)) =
          psi.segment(offsets[j], sizes[j]).sum() / std::sqrt(double(sizes[j]));
    }
  }
  return out;
}

Eigen::MatrixXcd full_graph_step_propagator(const GluedTreeGraph& graph,
                                            double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      adjacency_matrix(graph) / std::numbers::sqrt2);
  const std::complex<double> imag_unit(0.0, 1.0);
  const Eigen::VectorXcd phases =
      (-imag_unit * dt * solver.eigenvalues().array()).exp().matrix();
  return solver.eigenvectors().cast<std::complex<double>>() *
         phases.asDiagonal() *
         solver.eigenvectors().transpose().cast<std::complex<double>>();
}

}  // namespace majoq
