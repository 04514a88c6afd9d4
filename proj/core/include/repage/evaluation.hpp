// Five-level social evaluations and the arithmetic the rest of the
// simulator is built on: fuzzification of scalar quality, weighted
// aggregation with a confidence strength, defuzzification, reversal
// (the lie model) and total-variation distance.
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace repage {

// Ordered quality levels of an evaluation.
enum class Level : std::size_t { VeryBad = 0, Bad = 1, Neutral = 2, Good = 3, VeryGood = 4 };

inline constexpr std::size_t kLevels = 5;

// Scalar quality lives in [1, 100]; each level is anchored at a centroid.
inline constexpr double kQualityMin = 1.0;
inline constexpr double kQualityMax = 100.0;
inline constexpr std::array<double, kLevels> kLevelCentroids{10.0, 30.0, 50.0, 70.0, 90.0};

// Aggregation strength saturates once this much weight has accumulated.
inline constexpr double kWeightSaturation = 3.0;

inline constexpr double kNormalizationTolerance = 1e-9;

// A normalized weight vector over the five levels. Construction always
// normalizes, so every instance satisfies: weights >= 0, sum == 1 (+-1e-9).
class EvaluationDistribution {
public:
    // Normalizes `weights` by their sum. Throws std::invalid_argument if any
    // weight is negative, non-finite, or all are zero.
    static EvaluationDistribution from_weights(const std::array<double, kLevels>& weights);

    static EvaluationDistribution one_hot(Level level);

    double operator[](std::size_t i) const { return w_[i]; }
    double at(Level level) const { return w_[static_cast<std::size_t>(level)]; }
    const std::array<double, kLevels>& weights() const { return w_; }

    bool operator==(const EvaluationDistribution& other) const = default;

private:
    EvaluationDistribution() = default;
    std::array<double, kLevels> w_{};
};

// Maps quality in [1,100] onto the triangular partition over the level
// centroids {10,30,50,70,90}: one-hot below 10 / above 90, linear
// interpolation between adjacent centroids otherwise. Throws on
// out-of-range input.
EvaluationDistribution quality_to_distribution(double quality);

// Centroid dot product; exact inverse of quality_to_distribution on [10,90].
double expected_quality(const EvaluationDistribution& d);

// One aggregation input: an evaluation and its nonnegative weight.
struct WeightedEvaluation {
    EvaluationDistribution distribution;
    double weight = 0.0;
};

struct Aggregate {
    EvaluationDistribution distribution;
    double strength = 0.0;     // min(1, total_weight / kWeightSaturation)
    double total_weight = 0.0;
};

// Weight-weighted mean of the items, with strength saturating at
// kWeightSaturation of accumulated weight. Empty input or zero total
// weight means "no evaluation" and yields nullopt, never a zero vector.
// Throws std::invalid_argument on negative weights.
std::optional<Aggregate> aggregate(const std::vector<WeightedEvaluation>& items);

inline double strength_from_weight(double total_weight) {
    double s = total_weight / kWeightSaturation;
    return s > 1.0 ? 1.0 : s;
}

// Mirrors the level order (very-bad <-> very-good, bad <-> good). Involution.
EvaluationDistribution reverse(const EvaluationDistribution& d);

// Total variation distance, 0.5 * sum |a_i - b_i|, in [0,1].
double distance(const EvaluationDistribution& a, const EvaluationDistribution& b);

// "(w0,w1,w2,w3,w4)" with 6 decimal digits; used by dumps and debugging.
std::string to_string(const EvaluationDistribution& d);

}  // namespace repage
