#pragma once

#include <cstdint>
#include <vector>

#include "tvgp/environment.hpp"
#include "tvgp/kernel.hpp"

namespace tvgp {

/// Inputs to the closed-form regret-bound evaluators. `gamma` is the
/// information-capacity value the caller supplies (gamma-tilde_T for the
/// tight time-varying form, gamma_N for the block forms). a0/b0 are the
/// sup-norm tail constants; the theory gives no values for SE/Matern, so
/// they are user-supplied.
struct BoundInputs {
    int horizon;
    int block;  // N or N-tilde
    double eps;
    double noise_variance;
    double delta;
    double beta;
    double gamma;
    double a0 = 1.0;
    double b0 = 1.0;
};

/// C1 = 8 / log(1 + sigma^-2).
double capacity_constant(double noise_variance);

/// Tight form: sqrt(C1 T beta gamma) + 2.
double regret_bound_tv(const BoundInputs& in);

/// Weakened form: sqrt(C1 T beta (T/N + 1)(gamma + N^3 eps)) + 2.
double regret_bound_tv_weakened(const BoundInputs& in);

/// sqrt(C1 T beta (T/N + 1) gamma) + 2 + T psi_T(N, eps), with
/// psi_T = sqrt(beta (3 s^-2 + s^-4) N^3 eps)
///       + (s^-2 + s^-4) N^3 eps (2 + b0) sqrt(log(2 (1+a0) pi^2 T^2 / (3 delta))).
double regret_bound_r(const BoundInputs& in);

enum class KernelFamily { SquaredExponential, Matern };

struct CorollaryRates {
    double tv;
    double r;
};

/// max{sqrt(T^(1+c)), T eps^alpha} with the corollary exponents; c = 0 for
/// the SE family.
CorollaryRates corollary_rates(KernelFamily family, double nu, int dim, int horizon, double eps);

struct CheckResult {
    bool pass;
    double lhs;
    double bound;
};

/// ||K o D - K||_F <= N^2 eps on the given points at times 1..N.
CheckResult frobenius_bound_check(const std::vector<Point>& points, double eps,
                                  const KernelSpec& kernel);

/// I-tilde(f_T; y_T) <= (T/N + 1)(gamma_N + N^3 eps), with gamma_N the
/// exact maximum over size-N multisets of the candidate points (brute
/// force; requires N <= 8 and a small candidate set).
CheckResult mi_split_bound_check(const std::vector<Point>& sequence,
                                 const std::vector<Point>& candidates, double eps, int block,
                                 double noise_variance, const KernelSpec& kernel);

struct MismatchCheckResult {
    bool pass;
    double mean_gap;
    double mean_bound;
    double std_gap;
    double std_bound;
};

/// Lemma-style mismatch bounds between the time-varying and time-invariant
/// posteriors built from the same <= N-sample history:
///   sup |mu-tilde - mu|      <= (s^-2 + s^-4) N^3 eps L
///   sup |sigma-tilde - sigma| <= sqrt((3 s^-2 + s^-4) N^3 eps)
/// with L the realized max |y_t|.
MismatchCheckResult mismatch_bounds_check(const std::vector<Point>& history_points,
                                          const std::vector<double>& history_values, double eps,
                                          double noise_variance,
                                          const std::vector<Point>& queries,
                                          const KernelSpec& kernel);

/// Mean per-step regret of the full-information genie (play the argmax of
/// the previous snapshot) for each eps value, averaged over trials and
/// steps 2..T.
std::vector<double> genie_baseline(const DomainGrid& grid, const KernelSpec& kernel,
                                   const std::vector<double>& eps_values, int horizon, int trials,
                                   std::uint64_t master_seed);

}  // namespace tvgp
