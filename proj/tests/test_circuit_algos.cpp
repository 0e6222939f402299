#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "majoq/circuit_algos.hpp"
#include "majoq/rand_util.hpp"
#include "majoq/trajectory.hpp"

using namespace majoq;

namespace {

Eigen::MatrixXcd dft_matrix(int width, bool inverse) {
  const Eigen::Index dim = Eigen::Index(1) << width;
  const double sign = inverse ? -1.0 : 1.0;
  Eigen::MatrixXcd f(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      f(k, j) = std::polar(1.0 / std::sqrt(double(dim)),
                           sign * 2.0 * std::numbers::pi * double(k) * double(j) /
                               double(dim));
    }
  }
  return f;
}

Eigen::MatrixXcd kron_with_identity(const Eigen::MatrixXcd& a, Eigen::Index n) {
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(a.rows() * n, a.cols() * n);
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * n, c * n, n, n) =
          a(r, c) * Eigen::MatrixXcd::Identity(n, n);
    }
  }
  return out;
}

std::vector<int> random_pm_ones(int n, std::mt19937_64& rng) {
  std::vector<int> f(n);
  for (int& v : f) {
    v = (rng() & 1) == 0 ? 1 : -1;
  }
  return f;
}

}  // namespace

TEST_SUITE("circuit_algos") {

TEST_CASE("hidden affine: dense end-to-end oracle at n=3") {
  const AffineProblem problem{3, 3, 5};
  const AffineResult result = run_hidden_affine(problem);
  CHECK(result.outcome == 3);
  CHECK(result.outcome_probability >= 1.0 - 1e-10);
  CHECK(result.oracle_calls == 1);

  // Independent route: one dense 64x64 matrix product.
  const Eigen::Index reg = 8;
  const Eigen::MatrixXcd fwd = kron_with_identity(dft_matrix(3, false), reg);
  const Eigen::MatrixXcd inv = kron_with_identity(dft_matrix(3, true), reg);
  const Eigen::MatrixXcd oracle = affine_oracle_gate(problem).dense(6);
  Eigen::VectorXcd initial = Eigen::VectorXcd::Zero(64);
  const Eigen::VectorXcd psi1 = dft_matrix(3, true).col(1);
  initial.segment(0, reg) = psi1;
  const Eigen::VectorXcd expected = inv * oracle * fwd * initial;
  CHECK((result.final_state - expected).cwiseAbs().maxCoeff() <= 1e-10);

  // And the closed form: a global phase times |m>|psi1>.
  Eigen::VectorXcd closed = Eigen::VectorXcd::Zero(64);
  closed.segment(3 * reg, reg) = psi1;
  closed *= std::polar(1.0, 2.0 * std::numbers::pi * 5.0 / 8.0);
  CHECK((result.final_state - closed).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("hidden affine: constant function returns zero") {
  const AffineResult result = run_hidden_affine({3, 0, 0});
  CHECK(result.outcome == 0);
  CHECK(result.outcome_probability >= 1.0 - 1e-10);
}

TEST_CASE("hidden affine: cycle, separability, single oracle call") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 6; ++rep) {
    const int n = 2 + int(uniform_below(rng, 3));
    const std::uint64_t reg = std::uint64_t{1} << n;
    const AffineProblem problem{n, uniform_below(rng, reg),
                                uniform_below(rng, reg)};
    const AffineResult result = run_hidden_affine(problem);
    CHECK(result.outcome == problem.m);
    CHECK(result.outcome_probability >= 1.0 - 1e-9);
    CHECK(result.oracle_calls == 1);
    for (bool flag : result.entanglement_flags) {
      CHECK(flag);
    }
    const CycleReport cycle = detect_cycle(result.trace.dists(), 1e-9);
    CHECK(cycle.is_clean_cycle);
    // Turnaround sits at the oracle step between the two transform blocks.
    const int gates_per_block = int(result.trace.records.size() / 2) - 1;
    CHECK(cycle.turnaround_step >= gates_per_block - n);
    CHECK(cycle.turnaround_step <= gates_per_block + n + 1);
  }
}

TEST_CASE("hidden affine: natural arrows gate by gate") {
  const AffineProblem problem{3, 5, 2};
  const AffineResult result = run_hidden_affine(problem);
  const std::size_t half = result.trace.records.size() / 2;
  for (std::size_t i = 1; i < result.trace.records.size(); ++i) {
    const auto rep = natural_majorization_check(
        result.trace.records[i - 1].amps, result.trace.records[i].amps,
        result.trace.records[i].step_gate->dense(problem.n), 1e-9);
    if (i <= half) {
      CHECK(rep.natural_reverse);
    } else {
      CHECK(rep.natural_majorization);
    }
  }
}

TEST_CASE("hidden affine: the register cut stays separable at every gate") {
  // Gates act on one register at a time and the oracle only imprints phases,
  // so the product structure across the cut survives each elementary gate.
  const int n = 2;
  const AffineProblem problem{n, 2, 1};
  const PureState psi1 = qft(PureState::basis(n, 1), true, nullptr);
  PureState state;
  state.width = 2 * n;
  state.amps = Eigen::VectorXcd::Zero(16);
  state.amps.segment(0, 4) = psi1.amps;

  std::vector<GateOp> gates = qft_gate_sequence(n, 2 * n, false);
  gates.push_back(affine_oracle_gate(problem));
  const std::vector<GateOp> inverse = qft_gate_sequence(n, 2 * n, true);
  gates.insert(gates.end(), inverse.begin(), inverse.end());

  CHECK(schmidt_rank_one(state, n, 1e-9));
  for (const GateOp& gate : gates) {
    state = apply_gate(state, gate);
    CHECK(schmidt_rank_one(state, n, 1e-9));
  }
}

TEST_CASE("parity: identity oracle keeps the start state") {
  ParityProblem problem{4, {1, 1, 1, 1}};
  const ParityResult result = run_parity(problem);
  CHECK(result.parity == 1);
  CHECK(result.oracle_calls == 2);
  CHECK(result.trace.back().p_psi0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parity: single flip lands on the orthogonal state") {
  ParityProblem problem{4, {-1, 1, 1, 1}};
  const ParityResult result = run_parity(problem);
  CHECK(result.parity == -1);
  CHECK(result.trace.back().p_psi0 <= 1e-12);
  CHECK(result.trace.back().p_psi0_perp == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parity: exhaustive N=4 against the full-register simulation") {
  for (int mask = 0; mask < 16; ++mask) {
    ParityProblem problem;
    problem.n_inputs = 4;
    int expected = 1;
    for (int x = 0; x < 4; ++x) {
      problem.f.push_back((mask >> x) & 1 ? -1 : 1);
      expected *= problem.f.back();
    }
    const ParityResult sector = run_parity(problem);
    const ParityResult full = run_parity_full_register(problem);
    CHECK(sector.parity == expected);
    CHECK(full.parity == expected);
    REQUIRE(sector.trace.size() == full.trace.size());
    for (std::size_t i = 0; i < sector.trace.size(); ++i) {
      CHECK(sector.trace[i].p_psi0 ==
            doctest::Approx(full.trace[i].p_psi0).epsilon(1e-10));
      CHECK(sector.trace[i].p_psi0_perp ==
            doctest::Approx(full.trace[i].p_psi0_perp).epsilon(1e-10));
      const double sum = sector.trace[i].p_psi0 + sector.trace[i].p_psi0_perp +
                         sector.trace[i].p_rest;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("parity: erratic pre-final evolution, separating final call") {
  std::mt19937_64 rng(19);
  int with_decrease = 0;
  for (int rep = 0; rep < 50; ++rep) {
    ParityProblem problem{8, random_pm_ones(8, rng)};
    int expected = 1;
    for (int v : problem.f) expected *= v;
    const ParityResult result = run_parity(problem);
    CHECK(result.parity == expected);
    CHECK(result.oracle_calls == 4);

    auto winner_prob = [&](const ParityTraceRow& row) {
      return expected == 1 ? row.p_psi0 : row.p_psi0_perp;
    };
    // The last oracle always produces the separating jump.
    CHECK(winner_prob(result.trace[result.last_oracle_row]) ==
          doctest::Approx(1.0).epsilon(1e-9));
    for (int i = 0; i + 1 < result.last_oracle_row; ++i) {
      if (winner_prob(result.trace[i + 1]) < winner_prob(result.trace[i]) - 1e-12) {
        ++with_decrease;
        break;
      }
    }
  }
  CHECK(with_decrease >= 1);
}

TEST_CASE("parity rejects invalid problems") {
  CHECK_THROWS_AS(run_parity({3, {1, 1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(run_parity({4, {1, 1, 1, 2}}), std::invalid_argument);
}

TEST_CASE("grover: one iteration is exact at N=4") {
  const SnapshotTrace trace = run_grover(2, 3, 1);
  CHECK(trace.records.back().dist[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grover: success follows the rotation formula") {
  const int n = 5;
  const int iters = 8;
  const SnapshotTrace trace = run_grover(n, 7, iters);
  for (int k = 0; k <= iters; ++k) {
    const double p = trace.records[n + k].dist[7];
    CHECK(p == doctest::Approx(grover_success_probability(n, k)).epsilon(1e-9));
  }
}

TEST_CASE("grover: majorization toward the peak, reverse past it") {
  const int n = 5;
  const SnapshotTrace trace = run_grover(n, 7, 8);
  const auto dists = trace.dists();
  // Iterations 1..4 approach the success peak.
  const std::vector<std::vector<double>> rising(dists.begin() + n,
                                                dists.begin() + n + 5);
  CHECK(step_verdicts(rising, 1e-9, Direction::Majorize).violation_count == 0);
  // Iterations 5..7 walk back toward uniform; the recurrence sits near
  // k = (pi/theta - 2)/2 ~ 7.8, so the 7 -> 8 step crosses through the
  // uniform point and is incomparable.
  const std::vector<std::vector<double>> falling(dists.begin() + n + 4,
                                                 dists.begin() + n + 8);
  CHECK(step_verdicts(falling, 1e-9, Direction::ReverseMajorize)
            .violation_count == 0);
  CHECK(compare(dists[n + 7], dists[n + 8], 1e-9).relation ==
        Relation::Incomparable);
  // Preparation plus optimal iterations forms a clean cycle.
  const std::vector<std::vector<double>> to_peak(dists.begin(),
                                                 dists.begin() + n + 5);
  const CycleReport cycle = detect_cycle(to_peak, 1e-9);
  CHECK(cycle.is_clean_cycle);
  CHECK(cycle.turnaround_step == n);
}

}  // TEST_SUITE
