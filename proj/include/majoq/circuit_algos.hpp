#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "majoq/statevector.hpp"

namespace majoq {

/// f(x) = m*x + b mod 2^n, hidden slope m to be recovered.
struct AffineProblem {
  int n = 1;                // qubits per register
  std::uint64_t m = 0;
  std::uint64_t b = 0;
};

struct AffineResult {
  std::uint64_t outcome = 0;
  double outcome_probability = 0.0;
  int oracle_calls = 0;
  SnapshotTrace trace;                    // first-register view per gate
  std::vector<bool> entanglement_flags;   // product across the register cut,
                                          // one per gate-block boundary
  Eigen::VectorXcd final_state;           // full two-register state
};

AffineResult run_hidden_affine(const AffineProblem& problem);

/// Oracle permutation |x>|y> -> |x>|y + m x + b mod N> on the 2n-qubit space.
GateOp affine_oracle_gate(const AffineProblem& problem);

struct ParityProblem {
  int n_inputs = 2;        // N, even
  std::vector<int> f;      // size N, entries +1/-1; f[i] is f(x = i + 1)
};

struct ParityTraceRow {
  int oracle_calls_so_far = 0;
  double p_psi0 = 0.0;
  double p_psi0_perp = 0.0;
  double p_rest = 0.0;
};

struct ParityResult {
  int parity = 0;  // +1 or -1
  int oracle_calls = 0;
  std::vector<ParityTraceRow> trace;  // one row per applied operator
  int last_oracle_row = 0;            // trace index of the final oracle call
};

/// Simulates the N/2-query sequence in the N-dimensional eigenstate sector.
ParityResult run_parity(const ParityProblem& problem);

/// Same algorithm on the full 2N-dimensional register, for cross-checking the
/// sector reduction.
ParityResult run_parity_full_register(const ParityProblem& problem);

/// Uniform preparation via Hadamards (one snapshot per gate), then the given
/// number of Grover iterations (oracle sign flip + inversion about the mean,
/// one snapshot per iteration).
SnapshotTrace run_grover(int n, std::uint64_t marked, int iterations);

/// Exact success probability sin^2((2k+1) asin(1/sqrt(N))).
double grover_success_probability(int n, int iterations);

}  // namespace majoq
