#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace majoq {

/// Dense pure state over 2^width computational basis labels. Labels read the
/// most significant qubit first: qubit 0 is the top bit of the label.
struct PureState {
  int width = 0;
  Eigen::VectorXcd amps;

  static PureState basis(int width, std::uint64_t label);
  std::uint64_t dim() const { return std::uint64_t{1} << width; }
};

struct GateOp {
  enum class Kind { Hadamard, ControlledPhase, Permutation, OracleUnitary };

  Kind kind = Kind::Hadamard;
  int target = -1;
  int control = -1;
  double angle = 0.0;                // ControlledPhase, radians
  std::vector<std::uint64_t> perm;   // Permutation: label -> label
  Eigen::MatrixXcd matrix;           // OracleUnitary
  std::string name;

  static GateOp hadamard(int target);
  static GateOp controlled_phase(int control, int target, double angle);
  static GateOp permutation(std::vector<std::uint64_t> map, std::string name);
  static GateOp oracle_unitary(Eigen::MatrixXcd matrix, std::string name);

  /// Dense matrix of this gate on a 2^width register.
  Eigen::MatrixXcd dense(int width) const;
};

struct Snapshot {
  std::string label;
  double step_or_time = 0.0;
  std::vector<double> dist;
  std::optional<GateOp> step_gate;  // gate that produced this snapshot
  Eigen::VectorXcd amps;            // empty unless amplitude recording is on
};

struct SnapshotTrace {
  std::vector<Snapshot> records;

  std::vector<std::vector<double>> dists() const;
};

PureState apply_gate(const PureState& state, const GateOp& gate);

/// Gate sequence of the textbook QFT decomposition on the first
/// register_width qubits of a total_width register: per-qubit Hadamard and
/// controlled phases, then one explicit bit-reversal permutation.
std::vector<GateOp> qft_gate_sequence(int register_width, int total_width,
                                      bool inverse);

/// Applies the QFT (or its inverse) to the whole register, appending one
/// snapshot per elementary gate to trace when given. record_amps additionally
/// stores the amplitude vector in each snapshot.
PureState qft(const PureState& state, bool inverse, SnapshotTrace* trace,
              bool record_amps = false);

std::vector<double> probabilities(const PureState& state);
/// Marginal over qubits [first_qubit, first_qubit + qubit_count).
std::vector<double> probabilities(const PureState& state, int first_qubit,
                                  int qubit_count);

/// True iff the state is a product state across the cut between qubits
/// [0, cut_after) and the rest: largest Schmidt coefficient >= 1 - tol.
bool schmidt_rank_one(const PureState& state, int cut_after, double tol);

}  // namespace majoq
