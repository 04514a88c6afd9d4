#include "repage/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace repage {

EvaluationDistribution EvaluationDistribution::from_weights(
    const std::array<double, kLevels>& weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("evaluation weights must be finite and nonnegative");
        sum += w;
    }
    if (sum <= 0.0)
        throw std::invalid_argument("evaluation weights must not all be zero");
    EvaluationDistribution d;
    for (std::size_t i = 0; i < kLevels; ++i) d.w_[i] = weights[i] / sum;
    return d;
}

EvaluationDistribution EvaluationDistribution::one_hot(Level level) {
    std::array<double, kLevels> w{};
    w[static_cast<std::size_t>(level)] = 1.0;
    return from_weights(w);
}

EvaluationDistribution quality_to_distribution(double quality) {
    if (!std::isfinite(quality) || quality < kQualityMin || quality > kQualityMax)
        throw std::invalid_argument("quality must lie in [1,100]");
    std::array<double, kLevels> w{};
    if (quality <= kLevelCentroids.front()) {
        w.front() = 1.0;
    } else if (quality >= kLevelCentroids.back()) {
        w.back() = 1.0;
    } else {
        std::size_t hi = 1;
        while (kLevelCentroids[hi] < quality) ++hi;
        std::size_t lo = hi - 1;
        double span = kLevelCentroids[hi] - kLevelCentroids[lo];
        w[hi] = (quality - kLevelCentroids[lo]) / span;
        w[lo] = 1.0 - w[hi];
    }
    return EvaluationDistribution::from_weights(w);
}

double expected_quality(const EvaluationDistribution& d) {
    double q = 0.0;
    for (std::size_t i = 0; i < kLevels; ++i) q += d[i] * kLevelCentroids[i];
    return q;
}

std::optional<Aggregate> aggregate(const std::vector<WeightedEvaluation>& items) {
    double total = 0.0;
    std::array<double, kLevels> acc{};
    for (const auto& item : items) {
        if (!std::isfinite(item.weight) || item.weight < 0.0)
            throw std::invalid_argument("aggregation weights must be finite and nonnegative");
        total += item.weight;
        for (std::size_t i = 0; i < kLevels; ++i) acc[i] += item.weight * item.distribution[i];
    }
    if (total <= 0.0) return std::nullopt;
    return Aggregate{EvaluationDistribution::from_weights(acc), strength_from_weight(total), total};
}

EvaluationDistribution reverse(const EvaluationDistribution& d) {
    std::array<double, kLevels> w{};
    for (std::size_t i = 0; i < kLevels; ++i) w[kLevels - 1 - i] = d[i];
    return EvaluationDistribution::from_weights(w);
}

double distance(const EvaluationDistribution& a, const EvaluationDistribution& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kLevels; ++i) sum += std::fabs(a[i] - b[i]);
    return 0.5 * sum;
}

std::string to_string(const EvaluationDistribution& d) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.6f,%.6f,%.6f,%.6f,%.6f)", d[0], d[1], d[2], d[3], d[4]);
    return buf;
}

}  // namespace repage
