#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "odds/metrics.hpp"
#include "odds/parallel.hpp"
#include "odds/rng.hpp"

namespace odds::chains {

/// Doubly stochastic transition matrix: entry(j,h) is the probability of
/// moving from state h to state j in one operation. Rows and columns must
/// each sum to 1 within 1e-12.
class TransitionKernel {
public:
    explicit TransitionKernel(std::vector<std::vector<double>> to_from);

    std::size_t size() const { return entries_.size(); }
    double entry(std::size_t to, std::size_t from) const { return entries_[to][from]; }
    /// Entrywise minimum (the Doeblin regularity parameter).
    double min_entry() const { return min_entry_; }

    DiscreteDistribution apply(const DiscreteDistribution& p) const;

private:
    std::vector<std::vector<double>> entries_;
    double min_entry_;
};

struct EnvelopeStep {
    std::size_t n;
    double upper;  // max_j p_{j,n}
    double lower;  // min_j p_{j,n}
};

struct IterationResult {
    DiscreteDistribution final;
    std::vector<EnvelopeStep> trace;  // n = 0..kernel count
};

/// Expected payoff (2p-1)^n of the two-card game: +1 if the order after n
/// shuffles is unchanged, -1 otherwise, each shuffle keeping the order with
/// probability p.
double two_card_expectation(double p, int n);

/// Monte Carlo mean of the two-card payoff over `replicates` runs.
double two_card_mc(double p, int n, std::uint64_t replicates, RngStream rng,
                   Exec exec = Exec::parallel);

/// Random walk on the symmetric group S_m (m <= 5) by left-composition with a
/// shuffle drawn from `law` over the m! permutations in lexicographic order.
TransitionKernel shuffle_kernel(int m, const DiscreteDistribution& law);

/// Exact distribution iteration p_{n+1} = K_n p_n with the max/min envelope
/// recorded at every step.
IterationResult iterate_distribution(std::span<const TransitionKernel> kernels,
                                     const DiscreteDistribution& p0);
IterationResult iterate_distribution(const TransitionKernel& kernel, std::size_t steps,
                                     const DiscreteDistribution& p0);

struct ContractionRow {
    std::size_t n;
    double spread;  // P_n - p_n
    double bound;   // (1 - k*eps)^n * spread_0
};

/// Per-step certificate that the envelope spread contracts at least by the
/// Doeblin factor (1 - k*eps) per operation, eps being the common entrywise
/// lower bound of the kernels. Refused when eps is zero.
std::vector<ContractionRow> borel_contraction_certificate(
    std::span<const TransitionKernel> kernels, const DiscreteDistribution& p0);

/// Smallest n such that the worst point-mass start has tv distance to uniform
/// at most tol. Throws after a 10^6-iteration cap (reducible/periodic chain).
std::uint64_t mixing_time(const TransitionKernel& kernel, double tol);

/// Empirical state distribution after `steps` operations over `paths`
/// simulated trajectories from `start`.
DiscreteDistribution simulate_paths(const TransitionKernel& kernel, std::size_t steps,
                                    std::uint64_t paths, std::size_t start, RngStream rng,
                                    Exec exec = Exec::parallel);

/// Permutations of {0..m-1} in lexicographic order (the state space of
/// shuffle_kernel).
std::vector<std::vector<std::uint8_t>> permutation_table(int m);

}  // namespace odds::chains
