#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace majoq {

/// Interpolating pair H(s) = (1-s) H0 + s Hp.
struct HamiltonianSpec {
  enum class Kind { Search, RingOfAgrees };

  Kind kind = Kind::Search;
  int dim = 2;               // Hilbert space dimension
  std::uint64_t marked = 0;  // Search
  int ring_bits = 0;         // RingOfAgrees

  /// H0 = I - |psi0><psi0| (uniform psi0), Hp = I - |m><m|.
  static HamiltonianSpec search(int n_entries, std::uint64_t marked);

  /// Hp counts cyclic adjacent-bit disagreements; H0 = sum_j (1 - X_j)/2,
  /// whose ground state is the uniform superposition. Requires n >= 3.
  static HamiltonianSpec ring_of_agrees(int n_bits);

  Eigen::MatrixXd h0() const;
  Eigen::MatrixXd hp() const;
  Eigen::VectorXd hp_diagonal() const;  // RingOfAgrees only
  Eigen::MatrixXd hamiltonian(double s) const;

  /// Probability mass on the problem ground space: the marked state for
  /// Search, the two satisfying strings for RingOfAgrees.
  double ground_subspace_probability(const std::vector<double>& dist) const;
};

/// Number of violated agree clauses of the cyclic instance on n bits.
int ring_violations(std::uint64_t assignment, int n_bits);

/// t(s) of the locally adiabatic search schedule.
double local_schedule_time(double s, int n_entries, double epsilon);

class Schedule {
 public:
  enum class Kind { Linear, LocalSearch };

  static Schedule linear(double total_time);
  /// Total time from t(1); asymptotic_total instead stretches the same path
  /// linearly onto [0, pi sqrt(N) / (2 epsilon)].
  static Schedule local_search(int n_entries, double epsilon,
                               bool asymptotic_total = false);

  Kind kind() const { return kind_; }
  double total_time() const { return total_time_; }
  double epsilon() const { return epsilon_; }
  int n_entries() const { return n_entries_; }

  double s_of_t(double t) const;
  double dsdt_at(double t) const;

 private:
  Kind kind_ = Kind::Linear;
  double total_time_ = 1.0;
  int n_entries_ = 0;
  double epsilon_ = 0.0;
  double exact_total_ = 0.0;
};

struct EvolutionRecord {
  double t = 0.0;
  std::vector<double> dist;
  double p_plus = 0.0;
  double gap = 0.0;
  double adiabatic_lhs = 0.0;
};

struct EvolutionTrace {
  std::vector<EvolutionRecord> records;
  double norm_drift = 0.0;  // max | ||psi|| - 1 | over the run
};

/// Integrates the Schrodinger equation from the uniform ground state with a
/// midpoint-exponential step (exactly norm preserving per step); snapshots
/// every stride steps plus the initial and final times.
EvolutionTrace evolve(const HamiltonianSpec& spec, const Schedule& schedule,
                      double dt, int snapshot_stride);

/// Same integrator restricted to the invariant span of the marked state and
/// the uniform rest; Search only. Distributions are expanded back to dim N.
EvolutionTrace evolve_search_reduced(const HamiltonianSpec& spec,
                                     const Schedule& schedule, double dt,
                                     int snapshot_stride);

/// E1(s) - E0(s); a 2x2 reduced eigenproblem for Search, a full solve for
/// RingOfAgrees.
double instantaneous_gap(const HamiltonianSpec& spec, double s);

/// |dH_{1,0}/dt| / g^2 at time t, with dH/dt = (ds/dt)(Hp - H0).
double adiabatic_lhs(const HamiltonianSpec& spec, const Schedule& schedule,
                     double t);

}  // namespace majoq
