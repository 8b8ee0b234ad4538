#pragma once

// Reference computations used only by the tests. Each one re-derives its
// answer from raw rows or raw counts without calling the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace catml::oracle {

using Rows = std::vector<std::vector<int>>;

// observed[i][j] by tallying (feature, label) pairs into a map.
inline std::vector<std::vector<std::uint64_t>> tally_pairs(const std::vector<int>& feature, const std::vector<int>& label,
                                                           int feature_levels, int label_levels) {
    std::map<std::pair<int, int>, std::uint64_t> counts;
    for (std::size_t r = 0; r < feature.size(); ++r) ++counts[{feature[r], label[r]}];
    std::vector<std::vector<std::uint64_t>> out(feature_levels, std::vector<std::uint64_t>(label_levels, 0));
    for (const auto& [key, n] : counts) out[key.first][key.second] = n;
    return out;
}

// sum (O - E)^2 / E with E recomputed from scratch per cell.
inline double chi_square_sum(const std::vector<std::vector<std::uint64_t>>& observed) {
    long double total = 0;
    for (const auto& row : observed)
        for (auto v : row) total += v;
    long double stat = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        for (std::size_t j = 0; j < observed[i].size(); ++j) {
            long double row_sum = 0, col_sum = 0;
            for (auto v : observed[i]) row_sum += v;
            for (const auto& r : observed) col_sum += r[j];
            const long double e = row_sum * col_sum / total;
            if (e == 0) continue;
            const long double d = observed[i][j] - e;
            stat += d * d / e;
        }
    }
    return static_cast<double>(stat);
}

// Upper tail of chi-square(dof) at x by direct quadrature of the density.
// exp_sinh handles [x, inf); for x == 0 the dof-1 endpoint singularity is
// removed by substituting t = u^2.
inline double chi_square_tail(double x, int dof) {
    using real = long double;
    const real k = static_cast<real>(dof) / 2;
    const real log_norm = -k * std::log(static_cast<real>(2)) - std::lgamma(k);
    if (x == 0.0) return 1.0;
    boost::math::quadrature::exp_sinh<real> integrator;
    auto density = [&](real t) -> real {
        if (t <= 0) return 0;
        return std::exp(log_norm + (k - 1) * std::log(t) - t / 2);
    };
    const real lower = x;
    // Integrate over [x, inf) as [0, inf) shifted.
    auto shifted = [&](real s) -> real { return density(lower + s); };
    return static_cast<double>(integrator.integrate(shifted, std::sqrt(std::numeric_limits<real>::epsilon())));
}

inline std::size_t mismatches(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

// Cost of a partition when each block uses its own column-wise modes.
inline std::uint64_t mode_cost(const Rows& rows, const std::vector<int>& block_of, int blocks) {
    std::uint64_t cost = 0;
    const std::size_t columns = rows.front().size();
    for (int b = 0; b < blocks; ++b) {
        for (std::size_t c = 0; c < columns; ++c) {
            std::map<int, std::uint64_t> freq;
            std::uint64_t size = 0;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (block_of[r] != b) continue;
                ++freq[rows[r][c]];
                ++size;
            }
            std::uint64_t best = 0;
            for (const auto& [v, n] : freq) best = std::max(best, n);
            cost += size - best;
        }
    }
    return cost;
}

// Minimum mode cost over every split of the rows into two non-empty blocks.
inline std::uint64_t best_two_partition_cost(const Rows& rows) {
    const std::size_t n = rows.size();
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t mask = 1; mask + 1 < (1ULL << n); ++mask) {
        std::vector<int> block(n);
        for (std::size_t r = 0; r < n; ++r) block[r] = (mask >> r) & 1ULL ? 1 : 0;
        best = std::min(best, mode_cost(rows, block, 2));
    }
    return best;
}

// Naive Bayes joint log P(c, x) for every class, from raw counts with the
// same additive smoothing. Also returns, through joint_mass, the total
// probability mass of the joint over all classes and all category
// combinations of the given per-feature vocabulary sizes (must be 1).
struct BayesOracle {
    Rows rows;
    std::vector<int> labels;
    std::vector<int> vocab;
    int classes = 0;
    double alpha = 1.0;

    long double prior(int c) const {
        long double n = 0;
        for (int y : labels) n += (y == c);
        return (n + alpha) / (static_cast<long double>(labels.size()) + alpha * classes);
    }

    long double conditional(std::size_t f, int v, int c) const {
        long double hit = 0, in_class = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (labels[r] != c) continue;
            ++in_class;
            if (rows[r][f] == v) ++hit;
        }
        return (hit + alpha) / (in_class + alpha * vocab[f]);
    }

    long double joint(const std::vector<int>& x, int c) const {
        long double p = prior(c);
        for (std::size_t f = 0; f < x.size(); ++f) p *= conditional(f, x[f], c);
        return p;
    }

    // Every category combination of the vocabulary, in odometer order.
    std::vector<std::vector<int>> all_rows() const {
        std::vector<std::vector<int>> out;
        std::vector<int> x(vocab.size(), 0);
        for (;;) {
            out.push_back(x);
            std::size_t f = 0;
            while (f < x.size() && ++x[f] == vocab[f]) x[f++] = 0;
            if (f == x.size()) break;
        }
        return out;
    }
};

inline double entropy_bits(const std::vector<std::size_t>& counts) {
    double total = 0;
    for (auto c : counts) total += static_cast<double>(c);
    double h = 0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        h += -p * std::log(p) / std::log(2.0);
    }
    return h;
}

}  // namespace catml::oracle
