#pragma once

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "ustlab/error.hpp"
#include "ustlab/parallel.hpp"
#include "ustlab/rng.hpp"

namespace ustlab {

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

/// Goodness of fit of observed category counts against the uniform law.
inline ChiSquareResult chi_square_uniform(std::span<const std::size_t> counts) {
    if (counts.size() < 2) return {0.0, 0, 1.0};
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    const double expected = total / static_cast<double>(counts.size());
    double stat = 0.0;
    for (auto c : counts) {
        const double diff = static_cast<double>(c) - expected;
        stat += diff * diff / expected;
    }
    const std::size_t dof = counts.size() - 1;
    boost::math::chi_squared dist(static_cast<double>(dof));
    return {stat, dof, boost::math::cdf(boost::math::complement(dist, stat))};
}

/// 64-bit FNV-1a followed by a SplitMix finaliser. Used to key degree vectors
/// and canonical codes when counting collisions.
class Digest {
public:
    void bytes(std::string_view data) noexcept {
        for (unsigned char c : data) {
            h_ ^= c;
            h_ *= 0x100000001b3ULL;
        }
    }
    void word(std::uint64_t x) noexcept {
        for (int i = 0; i < 8; ++i) {
            h_ ^= (x >> (8 * i)) & 0xffU;
            h_ *= 0x100000001b3ULL;
        }
    }
    std::uint64_t value() const noexcept { return mix64(h_); }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// Pairwise-collision statistics of a sample of outcome digests.
struct CollisionEstimate {
    std::size_t trials = 0;
    std::size_t classes = 0;
    std::uint64_t colliding_pairs = 0;
    double collision = 0.0;           ///< unbiased U-statistic for Σ p_x²
    double max_mass_bound = 0.0;      ///< √collision, an upper proxy for max_x p_x
    double max_class_frequency = 0.0; ///< largest empirical class frequency
    Interval ci95;                    ///< for collision
    Interval ci99;                    ///< for collision
    std::size_t resamples = 0;
    std::string_view ci_method = "basic bootstrap over trials";
};

inline constexpr std::size_t kBootstrapResamples = 1000;

namespace detail {

inline double collision_from_counts(std::span<const std::uint32_t> counts, std::size_t n) {
    long double pairs = 0;
    for (auto c : counts) pairs += static_cast<long double>(c) * (static_cast<long double>(c) - 1);
    return static_cast<double>(pairs / (static_cast<long double>(n) * (static_cast<long double>(n) - 1)));
}

inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace detail

/*
 * Collision probability Σ p_x² estimated by the fraction of colliding pairs
 * among all C(N,2) pairs of sampled outcomes. Confidence intervals use the
 * basic (reverse-percentile) bootstrap over trials: resampling with
 * replacement inflates collisions by roughly 1/N, and reflecting the
 * bootstrap quantiles around the point estimate cancels that shift.
 */
inline CollisionEstimate estimate_collision(std::span<const std::uint64_t> digests, Seed seed,
                                            std::size_t resamples = kBootstrapResamples, unsigned jobs = 1) {
    if (digests.size() < 2) throw Error(ErrorKind::InvalidArgument, "collision estimate needs at least 2 trials");
    const std::size_t n = digests.size();

    std::vector<std::uint64_t> sorted(digests.begin(), digests.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::uint64_t> keys;
    std::vector<std::uint32_t> counts;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && sorted[j] == sorted[i]) ++j;
        keys.push_back(sorted[i]);
        counts.push_back(static_cast<std::uint32_t>(j - i));
        i = j;
    }

    CollisionEstimate est;
    est.trials = n;
    est.classes = keys.size();
    for (auto c : counts) est.colliding_pairs += static_cast<std::uint64_t>(c) * (c - 1) / 2;
    est.collision = detail::collision_from_counts(counts, n);
    est.max_mass_bound = std::sqrt(est.collision);
    est.max_class_frequency =
        static_cast<double>(*std::max_element(counts.begin(), counts.end())) / static_cast<double>(n);
    est.resamples = resamples;

    if (resamples == 0) {
        est.ci95 = est.ci99 = {est.collision, est.collision};
        return est;
    }

    std::vector<std::uint32_t> class_of(n);
    for (std::size_t i = 0; i < n; ++i)
        class_of[i] = static_cast<std::uint32_t>(std::lower_bound(keys.begin(), keys.end(), digests[i]) - keys.begin());

    std::vector<double> replicate(resamples);
    for_each_trial(resamples, jobs, [&](std::size_t r) {
        Rng rng = Rng::stream(seed, {0x626f6f74ULL, r});
        std::vector<std::uint32_t> boot(keys.size(), 0);
        for (std::size_t i = 0; i < n; ++i) ++boot[class_of[rng.below(n)]];
        replicate[r] = detail::collision_from_counts(boot, n);
    });
    std::sort(replicate.begin(), replicate.end());
    auto basic = [&](double alpha) {
        const double lo = 2 * est.collision - detail::quantile_sorted(replicate, 1 - alpha / 2);
        const double hi = 2 * est.collision - detail::quantile_sorted(replicate, alpha / 2);
        return Interval{std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0)};
    };
    est.ci95 = basic(0.05);
    est.ci99 = basic(0.01);
    return est;
}

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    Interval ci95; ///< NaN bounds when fewer than three points
};

/// Ordinary least squares of y on x.
inline SlopeFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t k = x.size();
    if (k < 2 || y.size() != k) throw Error(ErrorKind::InvalidArgument, "line fit needs >= 2 paired points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < k; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (k < 3) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        fit.stderr_slope = nan;
        fit.ci95 = {nan, nan};
        return fit;
    }
    double rss = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        rss += r * r;
    }
    fit.stderr_slope = std::sqrt(rss / static_cast<double>(k - 2) / sxx);
    boost::math::students_t t(static_cast<double>(k - 2));
    const double q = boost::math::quantile(boost::math::complement(t, 0.025));
    fit.ci95 = {fit.slope - q * fit.stderr_slope, fit.slope + q * fit.stderr_slope};
    return fit;
}

} // namespace ustlab
