#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace majoq {

// Default comparison tolerances: exact (gate-by-gate) traces vs traces
// produced by a time integrator, where stepping error dominates.
inline constexpr double kCircuitTol = 1e-9;
inline constexpr double kContinuousTol = 1e-6;

/// Nonnegative real vector summing to one: the outcome distribution of a
/// measurement in a fixed basis.
class ProbDist {
 public:
  explicit ProbDist(std::vector<double> values, double tol = 1e-9);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double tol() const { return tol_; }

 private:
  std::vector<double> values_;
  double tol_;
};

/// Partial sums of the decreasingly sorted entries of a distribution.
struct CumulantVector {
  std::vector<double> sums;
};

enum class Relation { Majorizes, ReverselyMajorizes, Equal, Incomparable };

std::string to_string(Relation r);

struct MajorizationVerdict {
  Relation relation = Relation::Incomparable;
  // Signed value of the largest-magnitude difference cum(q)_k - cum(p)_k.
  double max_cumulant_gap = 0.0;
  // Entrywise extremes of cum(q) - cum(p), clamped at zero. max_under > tol
  // means some cumulant of q falls below the matching cumulant of p.
  double max_over = 0.0;
  double max_under = 0.0;
};

enum class WitnessKind { DoublyStochastic, ConvexPermutationSum };

struct StochasticWitness {
  Eigen::MatrixXd matrix;
  WitnessKind kind = WitnessKind::DoublyStochastic;
};

struct PermutationTerm {
  double weight;
  std::vector<int> perm;  // row i draws from column perm[i]
};

struct NaturalMajorizationReport {
  bool natural_majorization = false;
  bool natural_reverse = false;
  double max_residual = 0.0;  // largest interference residual, forward direction
};

// Prefix sums of the entries sorted in decreasing order. Valid on
// unnormalized nonnegative vectors as well; the last entry is the total mass.
std::vector<double> sorted_cumulants(std::span<const double> values);
CumulantVector sorted_cumulants(const ProbDist& p);

// Majorization verdict between two equal-length vectors. Majorizes means
// q majorizes p (p is a doubly stochastic image of q). Throws on dimension
// mismatch.
MajorizationVerdict compare(std::span<const double> p, std::span<const double> q,
                            double tol);
MajorizationVerdict compare(const ProbDist& p, const ProbDist& q,
                            double tol = kCircuitTol);

// Shannon entropy in bits, with 0 log 0 taken as 0.
double shannon_entropy(std::span<const double> values);
double shannon_entropy(const ProbDist& p);

// Constructive doubly stochastic witness: when q majorizes p, returns D with
// p = D q built from a finite sequence of pairwise-averaging transforms.
// Returns nullopt when the construction cannot reach p (the relation fails).
// Does not consult compare(); the two routes stay independent.
std::optional<StochasticWitness> doubly_stochastic_witness(const ProbDist& p,
                                                           const ProbDist& q);

// Expands a doubly stochastic matrix into a convex sum of permutation
// matrices. Limited to d <= 6 and at most d*d terms.
std::vector<PermutationTerm> birkhoff_decompose(const Eigen::MatrixXd& d_matrix,
                                                double tol = 1e-12);

// Interference-residual test: with C the inverse of step_unitary, evaluates
// r_i = |before_i|^2 - sum_j |C_ij|^2 |after_j|^2 and the analogous residual
// with the roles of the two states swapped. Throws if step_unitary is not
// unitary or does not map before to after.
NaturalMajorizationReport natural_majorization_check(
    const Eigen::VectorXcd& before, const Eigen::VectorXcd& after,
    const Eigen::MatrixXcd& step_unitary, double tol);

}  // namespace majoq
