#include "odds/chains.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace odds::chains {

TransitionKernel::TransitionKernel(std::vector<std::vector<double>> to_from)
    : entries_(std::move(to_from)) {
    const std::size_t k = entries_.size();
    if (k == 0) throw std::invalid_argument("TransitionKernel: empty");
    min_entry_ = 1.0;
    std::vector<double> col_sum(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        if (entries_[j].size() != k) throw std::invalid_argument("TransitionKernel: not square");
        double row_sum = 0.0;
        for (std::size_t h = 0; h < k; ++h) {
            const double a = entries_[j][h];
            if (!std::isfinite(a) || a < 0)
                throw std::invalid_argument("TransitionKernel: invalid entry");
            row_sum += a;
            col_sum[h] += a;
            min_entry_ = std::min(min_entry_, a);
        }
        if (std::abs(row_sum - 1.0) > 1e-12)
            throw std::invalid_argument("TransitionKernel: row sums must be 1 within 1e-12");
    }
    for (double s : col_sum)
        if (std::abs(s - 1.0) > 1e-12)
            throw std::invalid_argument("TransitionKernel: column sums must be 1 within 1e-12");
}

DiscreteDistribution TransitionKernel::apply(const DiscreteDistribution& p) const {
    if (p.size() != size()) throw std::invalid_argument("TransitionKernel: dimension mismatch");
    std::vector<double> out(size(), 0.0);
    for (std::size_t j = 0; j < size(); ++j) {
        double s = 0.0;
        for (std::size_t h = 0; h < size(); ++h) s += entries_[j][h] * p[h];
        out[j] = s;
    }
    return DiscreteDistribution(std::move(out), true);
}

double two_card_expectation(double p, int n) {
    if (p < 0 || p > 1) throw std::invalid_argument("two_card_expectation: p outside [0,1]");
    if (n < 0) throw std::invalid_argument("two_card_expectation: n must be >= 0");
    return std::pow(2.0 * p - 1.0, n);
}

double two_card_mc(double p, int n, std::uint64_t replicates, RngStream rng, Exec exec) {
    if (replicates < 1) throw std::invalid_argument("two_card_mc: need replicates >= 1");
    // The payoff is +-1, so the mean reduces to an exact integer count.
    const std::uint64_t positive = par::chunked_count(
        replicates,
        [&](std::uint64_t i) {
            RngStream local = rng.substream(i);
            int sign = 1;
            for (int step = 0; step < n; ++step)
                if (!(local.uniform01() < p)) sign = -sign;
            return sign > 0;
        },
        exec);
    return (2.0 * static_cast<double>(positive) - static_cast<double>(replicates)) /
           static_cast<double>(replicates);
}

std::vector<std::vector<std::uint8_t>> permutation_table(int m) {
    if (m < 1 || m > 5) throw std::invalid_argument("permutation_table: m must be in [1,5]");
    std::vector<std::uint8_t> id(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) id[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    std::vector<std::vector<std::uint8_t>> table;
    do {
        table.push_back(id);
    } while (std::next_permutation(id.begin(), id.end()));
    return table;
}

TransitionKernel shuffle_kernel(int m, const DiscreteDistribution& law) {
    if (m < 1 || m > 5)
        throw std::invalid_argument("shuffle_kernel: state space capped at 5 cards (120 states)");
    const auto perms = permutation_table(m);
    const std::size_t k = perms.size();
    if (law.size() != k)
        throw std::invalid_argument("shuffle_kernel: law must cover all m! permutations");
    std::map<std::vector<std::uint8_t>, std::size_t> rank;
    for (std::size_t i = 0; i < k; ++i) rank[perms[i]] = i;

    std::vector<std::vector<double>> kernel(k, std::vector<double>(k, 0.0));
    for (std::size_t h = 0; h < k; ++h) {
        for (std::size_t g = 0; g < k; ++g) {
            // applying shuffle g to state h: next = g o h
            std::vector<std::uint8_t> next(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i)
                next[static_cast<std::size_t>(i)] = perms[g][perms[h][static_cast<std::size_t>(i)]];
            kernel[rank[next]][h] += law[g];
        }
    }
    return TransitionKernel(std::move(kernel));
}

IterationResult iterate_distribution(std::span<const TransitionKernel> kernels,
                                     const DiscreteDistribution& p0) {
    IterationResult out{p0, {}};
    out.trace.push_back({0, p0.max_weight(), p0.min_weight()});
    std::size_t n = 0;
    for (const auto& k : kernels) {
        out.final = k.apply(out.final);
        ++n;
        out.trace.push_back({n, out.final.max_weight(), out.final.min_weight()});
    }
    return out;
}

IterationResult iterate_distribution(const TransitionKernel& kernel, std::size_t steps,
                                     const DiscreteDistribution& p0) {
    std::vector<TransitionKernel> ks(steps, kernel);
    return iterate_distribution(std::span<const TransitionKernel>(ks), p0);
}

std::vector<ContractionRow> borel_contraction_certificate(
    std::span<const TransitionKernel> kernels, const DiscreteDistribution& p0) {
    if (kernels.empty()) throw std::invalid_argument("contraction certificate: no kernels");
    const std::size_t k = kernels.front().size();
    double eps = 1.0;
    for (const auto& kk : kernels) {
        if (kk.size() != k)
            throw std::invalid_argument("contraction certificate: kernel sizes differ");
        eps = std::min(eps, kk.min_entry());
    }
    if (!(eps > 0))
        throw std::domain_error(
            "contraction certificate refused: kernels must have strictly positive entries");

    const auto run = iterate_distribution(kernels, p0);
    const double factor = 1.0 - static_cast<double>(k) * eps;
    const double spread0 = run.trace.front().upper - run.trace.front().lower;
    std::vector<ContractionRow> rows;
    rows.reserve(run.trace.size());
    double bound = spread0;
    for (const auto& step : run.trace) {
        const double spread = step.upper - step.lower;
        rows.push_back({step.n, spread, bound});
        if (spread > bound + 1e-12)
            throw std::runtime_error("contraction certificate violated at step " +
                                     std::to_string(step.n));
        bound *= factor;
    }
    return rows;
}

std::uint64_t mixing_time(const TransitionKernel& kernel, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("mixing_time: tol must be positive");
    const std::size_t k = kernel.size();
    const auto uniform = DiscreteDistribution::uniform(k);
    constexpr std::uint64_t kCap = 1000000;

    // Wielandt primitivity precheck when some entry is zero: a primitive
    // k-state boolean matrix has a strictly positive power by (k-1)^2 + 1.
    if (!(kernel.min_entry() > 0)) {
        std::vector<std::vector<bool>> reach(k, std::vector<bool>(k));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t h = 0; h < k; ++h) reach[j][h] = kernel.entry(j, h) > 0;
        auto all_positive = [&] {
            for (const auto& row : reach)
                for (bool b : row)
                    if (!b) return false;
            return true;
        };
        const std::uint64_t wielandt = (k - 1) * (k - 1) + 1;
        std::uint64_t power = 1;
        while (!all_positive() && power <= wielandt) {
            std::vector<std::vector<bool>> next(k, std::vector<bool>(k, false));
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t h = 0; h < k; ++h) {
                    if (!reach[j][h]) continue;
                    for (std::size_t i = 0; i < k; ++i)
                        if (kernel.entry(i, j)) next[i][h] = true;
                }
            reach = std::move(next);
            ++power;
        }
        if (!all_positive())
            throw std::runtime_error(
                "mixing_time: chain is reducible or periodic, no convergence within cap");
    }

    std::uint64_t worst = 0;
    for (std::size_t start = 0; start < k; ++start) {
        auto p = DiscreteDistribution::point_mass(k, start);
        std::uint64_t n = 0;
        while (tv_distance(p, uniform) > tol) {
            p = kernel.apply(p);
            ++n;
            if (n > kCap)
                throw std::runtime_error(
                    "mixing_time: no convergence within 10^6 iterations");
        }
        worst = std::max(worst, n);
    }
    return worst;
}

DiscreteDistribution simulate_paths(const TransitionKernel& kernel, std::size_t steps,
                                    std::uint64_t paths, std::size_t start, RngStream rng,
                                    Exec exec) {
    if (paths < 1) throw std::invalid_argument("simulate_paths: need paths >= 1");
    const std::size_t k = kernel.size();
    if (start >= k) throw std::invalid_argument("simulate_paths: start state out of range");
    // column CDFs for O(log k) sampling of the next state
    std::vector<std::vector<double>> col_cdf(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t h = 0; h < k; ++h)
        for (std::size_t j = 0; j < k; ++j)
            col_cdf[h][j + 1] = col_cdf[h][j] + kernel.entry(j, h);

    const std::size_t chunks = par::chunk_count(paths);
    std::vector<std::vector<std::uint64_t>> counts(chunks, std::vector<std::uint64_t>(k, 0));
    const std::uint64_t per = paths / chunks, extra = paths % chunks;
    auto body = [&](std::size_t c) {
        std::uint64_t lo = c * per + (c < extra ? c : extra);
        std::uint64_t hi = lo + per + (c < extra ? 1 : 0);
        for (std::uint64_t i = lo; i < hi; ++i) {
            RngStream local = rng.substream(i);
            std::size_t state = start;
            for (std::size_t s = 0; s < steps; ++s) {
                const double u = local.uniform01();
                const auto& cdf = col_cdf[state];
                state = static_cast<std::size_t>(
                    std::upper_bound(cdf.begin(), cdf.end() - 1, u) - cdf.begin() - 1);
                if (state >= k) state = k - 1;
            }
            ++counts[c][state];
        }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c)
            body(static_cast<std::size_t>(c));
    } else {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
    }
    std::vector<double> freq(k, 0.0);
    for (std::size_t c = 0; c < chunks; ++c)
        for (std::size_t j = 0; j < k; ++j) freq[j] += static_cast<double>(counts[c][j]);
    for (double& f : freq) f /= static_cast<double>(paths);
    return DiscreteDistribution(std::move(freq), true);
}

}  // namespace odds::chains
