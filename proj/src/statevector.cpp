#include "majoq/statevector.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace majoq {

PureState PureState::basis(int width, std::uint64_t label) {
  if (width < 1 || width > 26) {
    throw std::invalid_argument("PureState: unsupported register width");
  }
  PureState s;
  s.width = width;
  s.amps = Eigen::VectorXcd::Zero(Eigen::Index(1) << width);
  if (label >= s.dim()) {
    throw std::invalid_argument("PureState: basis label out of range");
  }
  s.amps(static_cast<Eigen::Index>(label)) = 1.0;
  return s;
}

GateOp GateOp::hadamard(int target) {
  GateOp g;
  g.kind = Kind::Hadamard;
  g.target = target;
  g.name = "h " + std::to_string(target);
  return g;
}

GateOp GateOp::controlled_phase(int control, int target, double angle) {
  GateOp g;
  g.kind = Kind::ControlledPhase;
  g.control = control;
  g.target = target;
  g.angle = angle;
  g.name = "cp " + std::to_string(control) + " " + std::to_string(target);
  return g;
}

GateOp GateOp::permutation(std::vector<std::uint64_t> map, std::string name) {
  std::vector<bool> seen(map.size(), false);
  for (std::uint64_t image : map) {
    if (image >= map.size() || seen[image]) {
      throw std::invalid_argument("GateOp: map is not a permutation");
    }
    seen[image] = true;
  }
  GateOp g;
  g.kind = Kind::Permutation;
  g.perm = std::move(map);
  g.name = std::move(name);
  return g;
}

GateOp GateOp::oracle_unitary(Eigen::MatrixXcd matrix, std::string name) {
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("GateOp: oracle matrix not square");
  }
  const Eigen::MatrixXcd gram =
      matrix.adjoint() * matrix -
      Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
  if (gram.cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("GateOp: oracle matrix not unitary");
  }
  GateOp g;
  g.kind = Kind::OracleUnitary;
  g.matrix = std::move(matrix);
  g.name = std::move(name);
  return g;
}

Eigen::MatrixXcd GateOp::dense(int width) const {
  const Eigen::Index dim = Eigen::Index(1) << width;
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    PureState col = PureState::basis(width, static_cast<std::uint64_t>(j));
    m.col(j) = apply_gate(col, *this).amps;
  }
  return m;
}

PureState apply_gate(const PureState& state, const GateOp& gate) {
  const std::uint64_t dim = state.dim();
  PureState out = state;
  switch (gate.kind) {
    case GateOp::Kind::Hadamard: {
      if (gate.target < 0 || gate.target >= state.width) {
        throw std::invalid_argument("apply_gate: target out of range");
      }
      const std::uint64_t mask = std::uint64_t{1}
                                 << (state.width - 1 - gate.target);
      const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & mask) == 0) {
          const auto a0 = out.amps(static_cast<Eigen::Index>(i));
          const auto a1 = out.amps(static_cast<Eigen::Index>(i | mask));
          out.amps(static_cast<Eigen::Index>(i)) = inv_sqrt2 * (a0 + a1);
          out.amps(static_cast<Eigen::Index>(i | mask)) = inv_sqrt2 * (a0 - a1);
        }
      }
      break;
    }
    case GateOp::Kind::ControlledPhase: {
      if (gate.target < 0 || gate.target >= state.width || gate.control < 0 ||
          gate.control >= state.width || gate.control == gate.target) {
        throw std::invalid_argument("apply_gate: control/target out of range");
      }
      const std::uint64_t mask =
          (std::uint64_t{1} << (state.width - 1 - gate.target)) |
          (std::uint64_t{1} << (state.width - 1 - gate.control));
      const std::complex<double> phase =
          std::polar(1.0, gate.angle);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & mask) == mask) {
          out.amps(static_cast<Eigen::Index>(i)) *= phase;
        }
      }
      break;
    }
    case GateOp::Kind::Permutation: {
      if (gate.perm.size() != dim) {
        throw std::invalid_argument("apply_gate: permutation size mismatch");
      }
      for (std::uint64_t i = 0; i < dim; ++i) {
        out.amps(static_cast<Eigen::Index>(gate.perm[i])) =
            state.amps(static_cast<Eigen::Index>(i));
      }
      break;
    }
    case GateOp::Kind::OracleUnitary: {
      if (gate.matrix.rows() != static_cast<Eigen::Index>(dim)) {
        throw std::invalid_argument("apply_gate: oracle dimension mismatch");
      }
      out.amps = gate.matrix * state.amps;
      break;
    }
  }
  return out;
}

std::vector<GateOp> qft_gate_sequence(int register_width, int total_width,
                                      bool inverse) {
  if (register_width < 1 || register_width > total_width) {
    throw std::invalid_argument("qft_gate_sequence: bad register width");
  }
  std::vector<GateOp> gates;
  for (int q = 0; q < register_width; ++q) {
    gates.push_back(GateOp::hadamard(q));
    for (int k = 2; k <= register_width - q; ++k) {
      const double angle = 2.0 * std::numbers::pi / std::ldexp(1.0, k);
      gates.push_back(GateOp::controlled_phase(q + k - 1, q, angle));
    }
  }
  // Bit reversal of the first register_width qubits, as an explicit gate so
  // traces expose it.
  const std::uint64_t dim = std::uint64_t{1} << total_width;
  const int low_width = total_width - register_width;
  std::vector<std::uint64_t> map(dim);
  for (std::uint64_t i = 0; i < dim; ++i) {
    const std::uint64_t high = i >> low_width;
    std::uint64_t rev = 0;
    for (int b = 0; b < register_width; ++b) {
      rev = (rev << 1) | ((high >> b) & 1);
    }
    map[i] = (rev << low_width) | (i & ((std::uint64_t{1} << low_width) - 1));
  }
  gates.push_back(GateOp::permutation(std::move(map), "bitrev"));

  if (inverse) {
    std::reverse(gates.begin(), gates.end());
    for (GateOp& g : gates) {
      if (g.kind == GateOp::Kind::ControlledPhase) {
        g.angle = -g.angle;
      }
      // Hadamard and the bit reversal are their own inverses.
    }
  }
  return gates;
}

std::vector<std::vector<double>> SnapshotTrace::dists() const {
  std::vector<std::vector<double>> out;
  out.reserve(records.size());
  for (const Snapshot& s : records) {
    out.push_back(s.dist);
  }
  return out;
}

PureState qft(const PureState& state, bool inverse, SnapshotTrace* trace,
              bool record_amps) {
  const std::vector<GateOp> gates =
      qft_gate_sequence(state.width, state.width, inverse);
  PureState s = state;
  if (trace != nullptr && trace->records.empty()) {
    Snapshot in;
    in.label = "input";
    in.step_or_time = 0.0;
    in.dist = probabilities(s);
    if (record_amps) {
      in.amps = s.amps;
    }
    trace->records.push_back(std::move(in));
  }
  for (const GateOp& g : gates) {
    s = apply_gate(s, g);
    if (trace != nullptr) {
      Snapshot snap;
      snap.label = g.name;
      snap.step_or_time = static_cast<double>(trace->records.size());
      snap.dist = probabilities(s);
      snap.step_gate = g;
      if (record_amps) {
        snap.amps = s.amps;
      }
      trace->records.push_back(std::move(snap));
    }
  }
  return s;
}

std::vector<double> probabilities(const PureState& state) {
  std::vector<double> p(state.dim());
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    p[i] = std::norm(state.amps(static_cast<Eigen::Index>(i)));
  }
  return p;
}

std::vector<double> probabilities(const PureState& state, int first_qubit,
                                  int qubit_count) {
  if (first_qubit < 0 || qubit_count < 1 ||
      first_qubit + qubit_count > state.width) {
    throw std::invalid_argument("probabilities: invalid subregister");
  }
  const int shift = state.width - first_qubit - qubit_count;
  const std::uint64_t mask = (std::uint64_t{1} << qubit_count) - 1;
  std::vector<double> p(std::size_t{1} << qubit_count, 0.0);
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    p[(i >> shift) & mask] += std::norm(state.amps(static_cast<Eigen::Index>(i)));
  }
  return p;
}

bool schmidt_rank_one(const PureState& state, int cut_after, double tol) {
  if (cut_after < 1 || cut_after >= state.width) {
    throw std::invalid_argument("schmidt_rank_one: invalid cut");
  }
  const Eigen::Index rows = Eigen::Index(1) << cut_after;
  const Eigen::Index cols = Eigen::Index(1) << (state.width - cut_after);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = state.amps(r * cols + c);
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0) >= 1.0 - tol;
}

}  // namespace majoq
