#include "majoq/circuit_algos.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace majoq {

namespace {

// First-register amplitudes of a product state |v>|psi2>, extracted by
// contracting the second register against psi2.
Eigen::VectorXcd register1_amps(const Eigen::VectorXcd& full,
                                const Eigen::VectorXcd& psi2) {
  const Eigen::Index n2 = psi2.size();
  const Eigen::Index n1 = full.size() / n2;
  Eigen::VectorXcd v(n1);
  for (Eigen::Index x = 0; x < n1; ++x) {
    v(x) = psi2.dot(full.segment(x * n2, n2));  // dot conjugates the left arg
  }
  return v;
}

}  // namespace

GateOp affine_oracle_gate(const AffineProblem& problem) {
  const std::uint64_t reg = std::uint64_t{1} << problem.n;
  std::vector<std::uint64_t> map(reg * reg);
  for (std::uint64_t x = 0; x < reg; ++x) {
    const std::uint64_t fx = (problem.m * x + problem.b) % reg;
    for (std::uint64_t y = 0; y < reg; ++y) {
      map[x * reg + y] = x * reg + ((y + fx) % reg);
    }
  }
  return GateOp::permutation(std::move(map), "U_f");
}

AffineResult run_hidden_affine(const AffineProblem& problem) {
  if (problem.n < 1 || problem.n > 8) {
    throw std::invalid_argument("run_hidden_affine: n out of range");
  }
  const std::uint64_t reg = std::uint64_t{1} << problem.n;
  if (problem.m >= reg || problem.b >= reg) {
    throw std::invalid_argument("run_hidden_affine: m, b must lie in [0, 2^n)");
  }

  // |psi1> = QFT^{-1}|1>, prepared off-trace.
  const PureState psi1 = qft(PureState::basis(problem.n, 1), true, nullptr);

  PureState state;
  state.width = 2 * problem.n;
  state.amps = Eigen::VectorXcd::Zero(Eigen::Index(1) << state.width);
  state.amps.segment(0, static_cast<Eigen::Index>(reg)) = psi1.amps;

  AffineResult result;
  result.oracle_calls = 0;

  auto snapshot = [&](const std::string& label,
                      const std::optional<GateOp>& reg1_gate) {
    Snapshot snap;
    snap.label = label;
    snap.step_or_time = static_cast<double>(result.trace.records.size());
    snap.dist = probabilities(state, 0, problem.n);
    snap.step_gate = reg1_gate;
    snap.amps = register1_amps(state.amps, psi1.amps);
    result.trace.records.push_back(std::move(snap));
  };
  auto mark_boundary = [&] {
    result.entanglement_flags.push_back(
        schmidt_rank_one(state, problem.n, 1e-9));
  };

  snapshot("prepare", std::nullopt);
  mark_boundary();

  const std::vector<GateOp> fwd_full =
      qft_gate_sequence(problem.n, state.width, false);
  const std::vector<GateOp> fwd_local =
      qft_gate_sequence(problem.n, problem.n, false);
  for (std::size_t i = 0; i < fwd_full.size(); ++i) {
    state = apply_gate(state, fwd_full[i]);
    snapshot(fwd_full[i].name, fwd_local[i]);
  }
  mark_boundary();

  // Single oracle call. On the first register it acts as the diagonal phase
  // e^{2 pi i f(x)/N}, recorded as the step unitary of this snapshot.
  state = apply_gate(state, affine_oracle_gate(problem));
  ++result.oracle_calls;
  Eigen::MatrixXcd phases =
      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(reg),
                             static_cast<Eigen::Index>(reg));
  for (std::uint64_t x = 0; x < reg; ++x) {
    const double fx = static_cast<double>((problem.m * x + problem.b) % reg);
    phases(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) =
        std::polar(1.0, 2.0 * std::numbers::pi * fx / static_cast<double>(reg));
  }
  snapshot("U_f", GateOp::oracle_unitary(std::move(phases), "U_f phases"));
  mark_boundary();

  const std::vector<GateOp> inv_full =
      qft_gate_sequence(problem.n, state.width, true);
  const std::vector<GateOp> inv_local =
      qft_gate_sequence(problem.n, problem.n, true);
  for (std::size_t i = 0; i < inv_full.size(); ++i) {
    state = apply_gate(state, inv_full[i]);
    snapshot(inv_full[i].name, inv_local[i]);
  }
  mark_boundary();

  const std::vector<double> final_dist = probabilities(state, 0, problem.n);
  std::uint64_t best = 0;
  for (std::uint64_t x = 1; x < reg; ++x) {
    if (final_dist[x] > final_dist[best]) {
      best = x;
    }
  }
  result.outcome = best;
  result.outcome_probability = final_dist[best];
  result.final_state = state.amps;
  return result;
}

namespace {

void validate_parity_problem(const ParityProblem& problem) {
  if (problem.n_inputs < 2 || problem.n_inputs % 2 != 0) {
    throw std::invalid_argument("run_parity: N must be even and >= 2");
  }
  if (static_cast<int>(problem.f.size()) != problem.n_inputs) {
    throw std::invalid_argument("run_parity: f must have N entries");
  }
  for (int v : problem.f) {
    if (v != 1 && v != -1) {
      throw std::invalid_argument("run_parity: f entries must be +1 or -1");
    }
  }
}

// Two-block cyclic shift on 0-indexed labels.
template <typename Vec>
Vec block_shift(const Vec& in, int n, int stride) {
  Vec out = in;
  const int half = n / 2;
  for (int x = 0; x < n; ++x) {
    const int base = x < half ? 0 : half;
    const int next = base + (x - base + 1) % half;
    for (int k = 0; k < stride; ++k) {
      out[next * stride + k] = in[x * stride + k];
    }
  }
  return out;
}

}  // namespace

ParityResult run_parity(const ParityProblem& problem) {
  validate_parity_problem(problem);
  const int n = problem.n_inputs;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  std::vector<std::complex<double>> psi(n, inv_sqrt_n);

  ParityResult result;
  auto record = [&](int calls) {
    std::complex<double> o0 = 0.0, operp = 0.0;
    for (int x = 0; x < n; ++x) {
      o0 += psi[x];
      operp += (x < n / 2) ? psi[x] : -psi[x];
    }
    ParityTraceRow row;
    row.oracle_calls_so_far = calls;
    row.p_psi0 = std::norm(o0 * inv_sqrt_n);
    row.p_psi0_perp = std::norm(operp * inv_sqrt_n);
    row.p_rest = std::max(0.0, 1.0 - row.p_psi0 - row.p_psi0_perp);
    result.trace.push_back(row);
  };

  record(0);
  for (int i = 1; i <= n / 2; ++i) {
    for (int x = 0; x < n; ++x) {
      psi[x] *= static_cast<double>(problem.f[x]);
    }
    record(i);
    if (i == n / 2) {
      result.last_oracle_row = static_cast<int>(result.trace.size()) - 1;
    }
    // V_i is the identity for i = N/2 and the two-block shift otherwise.
    if (i != n / 2) {
      psi = block_shift(psi, n, 1);
    }
    record(i);
  }
  result.oracle_calls = n / 2;
  const ParityTraceRow& last = result.trace.back();
  result.parity = last.p_psi0 >= last.p_psi0_perp ? 1 : -1;
  return result;
}

ParityResult run_parity_full_register(const ParityProblem& problem) {
  validate_parity_problem(problem);
  const int n = problem.n_inputs;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const double inv_sqrt_2 = std::numbers::sqrt2 / 2.0;

  // Label x*2 + a with a = 0 for |+1> and a = 1 for |-1>.
  std::vector<std::complex<double>> psi(2 * n);
  for (int x = 0; x < n; ++x) {
    psi[2 * x] = inv_sqrt_n * inv_sqrt_2;
    psi[2 * x + 1] = -inv_sqrt_n * inv_sqrt_2;
  }

  ParityResult result;
  auto record = [&](int calls) {
    std::complex<double> o0 = 0.0, operp = 0.0;
    for (int x = 0; x < n; ++x) {
      const std::complex<double> proj =
          inv_sqrt_2 * (psi[2 * x] - psi[2 * x + 1]);
      o0 += proj;
      operp += (x < n / 2) ? proj : -proj;
    }
    ParityTraceRow row;
    row.oracle_calls_so_far = calls;
    row.p_psi0 = std::norm(o0 * inv_sqrt_n);
    row.p_psi0_perp = std::norm(operp * inv_sqrt_n);
    row.p_rest = std::max(0.0, 1.0 - row.p_psi0 - row.p_psi0_perp);
    result.trace.push_back(row);
  };

  record(0);
  for (int i = 1; i <= n / 2; ++i) {
    for (int x = 0; x < n; ++x) {
      if (problem.f[x] == -1) {
        std::swap(psi[2 * x], psi[2 * x + 1]);
      }
    }
    record(i);
    if (i == n / 2) {
      result.last_oracle_row = static_cast<int>(result.trace.size()) - 1;
    }
    if (i != n / 2) {
      psi = block_shift(psi, n, 2);
    }
    record(i);
  }
  result.oracle_calls = n / 2;
  const ParityTraceRow& last = result.trace.back();
  result.parity = last.p_psi0 >= last.p_psi0_perp ? 1 : -1;
  return result;
}

SnapshotTrace run_grover(int n, std::uint64_t marked, int iterations) {
  if (n < 1 || n > 24) {
    throw std::invalid_argument("run_grover: n out of range");
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  if (marked >= dim) {
    throw std::invalid_argument("run_grover: marked index out of range");
  }
  if (iterations < 0) {
    throw std::invalid_argument("run_grover: negative iteration count");
  }

  PureState state = PureState::basis(n, 0);
  SnapshotTrace trace;
  auto snapshot = [&](const std::string& label) {
    Snapshot snap;
    snap.label = label;
    snap.step_or_time = static_cast<double>(trace.records.size());
    snap.dist = probabilities(state);
    trace.records.push_back(std::move(snap));
  };

  snapshot("initial");
  for (int q = 0; q < n; ++q) {
    state = apply_gate(state, GateOp::hadamard(q));
    snapshot("h " + std::to_string(q));
  }
  for (int it = 1; it <= iterations; ++it) {
    state.amps(static_cast<Eigen::Index>(marked)) *= -1.0;
    const std::complex<double> mean = state.amps.mean();
    state.amps = (2.0 * mean - state.amps.array()).matrix();
    snapshot("grover " + std::to_string(it));
  }
  return trace;
}

double grover_success_probability(int n, int iterations) {
  const double theta = std::asin(std::pow(2.0, -0.5 * n));
  const double s = std::sin((2.0 * iterations + 1.0) * theta);
  return s * s;
}

}  // namespace majoq
