#include <doctest.h>

#include <stdexcept>

#include <array>
#include <cmath>
#include <vector>

#include "repage/evaluation.hpp"
#include "repage/rng.hpp"

using namespace repage;

namespace {

EvaluationDistribution dist(double a, double b, double c, double d, double e) {
    return EvaluationDistribution::from_weights({a, b, c, d, e});
}

bool close(double a, double b, double tol = 1e-9) { return std::fabs(a - b) <= tol; }

bool close(const EvaluationDistribution& a, const EvaluationDistribution& b, double tol = 1e-9) {
    for (std::size_t i = 0; i < kLevels; ++i)
        if (!close(a[i], b[i], tol)) return false;
    return true;
}

// Every distribution over the five levels with weights on a step grid.
std::vector<EvaluationDistribution> grid_distributions(int steps) {
    std::vector<EvaluationDistribution> out;
    for (int a = 0; a <= steps; ++a)
        for (int b = 0; b <= steps - a; ++b)
            for (int c = 0; c <= steps - a - b; ++c)
                for (int d = 0; d <= steps - a - b - c; ++d) {
                    int e = steps - a - b - c - d;
                    double s = static_cast<double>(steps);
                    out.push_back(dist(a / s, b / s, c / s, d / s, e / s));
                }
    return out;
}

EvaluationDistribution random_distribution(RngStream& rng) {
    std::array<double, kLevels> w{};
    double sum = 0.0;
    do {
        sum = 0.0;
        for (double& x : w) {
            x = rng.uniform01();
            sum += x;
        }
    } while (sum <= 0.0);
    return EvaluationDistribution::from_weights(w);
}

}  // namespace

TEST_CASE("make_distribution normalizes and validates") {
    CHECK(close(dist(0, 0, 1, 0, 0), dist(0, 0, 1, 0, 0)));
    CHECK(close(dist(2, 0, 0, 0, 2), dist(0.5, 0, 0, 0, 0.5)));
    CHECK(close(dist(1, 1, 1, 1, 1), dist(0.2, 0.2, 0.2, 0.2, 0.2)));
    CHECK_THROWS_AS(EvaluationDistribution::from_weights({0, 0, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(EvaluationDistribution::from_weights({1, -0.5, 0, 0, 0}),
                    std::invalid_argument);
}

TEST_CASE("quality_to_distribution triangular partition") {
    CHECK(close(quality_to_distribution(50), dist(0, 0, 1, 0, 0)));
    CHECK(close(quality_to_distribution(90), dist(0, 0, 0, 0, 1)));
    CHECK(close(quality_to_distribution(80), dist(0, 0, 0, 0.5, 0.5)));
    CHECK(close(quality_to_distribution(5), dist(1, 0, 0, 0, 0)));    // lower saturation
    CHECK(close(quality_to_distribution(100), dist(0, 0, 0, 0, 1)));  // upper saturation
    CHECK_THROWS_AS(quality_to_distribution(0.5), std::invalid_argument);
    CHECK_THROWS_AS(quality_to_distribution(100.5), std::invalid_argument);
}

TEST_CASE("expected_quality centroids") {
    CHECK(close(expected_quality(dist(0, 0, 1, 0, 0)), 50));
    CHECK(close(expected_quality(dist(0, 0, 0, 0, 1)), 90));
    CHECK(close(expected_quality(dist(0.5, 0, 0, 0, 0.5)), 50));
}

TEST_CASE("fuzzify/defuzzify round-trip") {
    for (double q = 10.0; q <= 90.0; q += 0.125)
        CHECK(close(expected_quality(quality_to_distribution(q)), q));
    // saturation outside the centroid span
    CHECK(close(expected_quality(quality_to_distribution(3)), 10));
    CHECK(close(expected_quality(quality_to_distribution(97)), 90));
}

TEST_CASE("aggregate examples") {
    auto one = aggregate({{dist(0, 0, 1, 0, 0), 1.0}});
    REQUIRE(one.has_value());
    CHECK(close(one->distribution, dist(0, 0, 1, 0, 0)));
    CHECK(close(one->strength, 1.0 / 3.0));

    auto idem = aggregate({{dist(0, 1, 0, 0, 0), 0.5}, {dist(0, 1, 0, 0, 0), 0.5}});
    REQUIRE(idem.has_value());
    CHECK(close(idem->distribution, dist(0, 1, 0, 0, 0)));
    CHECK(close(idem->strength, 1.0 / 3.0));

    auto sym = aggregate({{dist(1, 0, 0, 0, 0), 1.0}, {dist(0, 0, 0, 0, 1), 1.0}});
    REQUIRE(sym.has_value());
    CHECK(close(sym->distribution, dist(0.5, 0, 0, 0, 0.5)));
    CHECK(close(sym->strength, 2.0 / 3.0));
}

TEST_CASE("aggregate rejects or signals no evaluation") {
    CHECK_FALSE(aggregate({}).has_value());
    CHECK_FALSE(aggregate({{dist(0, 0, 1, 0, 0), 0.0}}).has_value());
    CHECK_THROWS_AS(aggregate({{dist(0, 0, 1, 0, 0), -1.0}}), std::invalid_argument);
}

TEST_CASE("aggregate order and scale invariance of the distribution") {
    RngStream rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<WeightedEvaluation> items;
        int n = 1 + static_cast<int>(rng.uniform_index(5));
        for (int i = 0; i < n; ++i) items.push_back({random_distribution(rng), rng.uniform01() + 0.01});

        auto base = aggregate(items);
        REQUIRE(base.has_value());

        std::vector<WeightedEvaluation> reversed_order(items.rbegin(), items.rend());
        auto swapped = aggregate(reversed_order);
        REQUIRE(swapped.has_value());
        CHECK(close(base->distribution, swapped->distribution));

        double factor = 0.25 + rng.uniform01();
        std::vector<WeightedEvaluation> scaled = items;
        for (auto& item : scaled) item.weight *= factor;
        auto rescaled = aggregate(scaled);
        REQUIRE(rescaled.has_value());
        CHECK(close(base->distribution, rescaled->distribution, 1e-9));
        CHECK(close(rescaled->total_weight, base->total_weight * factor, 1e-9));
    }
}

TEST_CASE("strength saturates at W_sat") {
    CHECK(close(strength_from_weight(0.0), 0.0));
    CHECK(close(strength_from_weight(1.5), 0.5));
    CHECK(close(strength_from_weight(3.0), 1.0));
    CHECK(close(strength_from_weight(30.0), 1.0));
}

TEST_CASE("reverse examples and involution") {
    CHECK(close(reverse(dist(1, 0, 0, 0, 0)), dist(0, 0, 0, 0, 1)));
    CHECK(close(reverse(dist(0, 0, 1, 0, 0)), dist(0, 0, 1, 0, 0)));
    RngStream rng(7);
    for (int i = 0; i < 100; ++i) {
        auto d = random_distribution(rng);
        CHECK(close(reverse(reverse(d)), d));
    }
}

TEST_CASE("distance examples") {
    auto d = dist(0.1, 0.2, 0.3, 0.2, 0.2);
    CHECK(close(distance(d, d), 0.0));
    CHECK(close(distance(dist(1, 0, 0, 0, 0), dist(0, 0, 0, 0, 1)), 1.0));
    CHECK(close(distance(dist(0.5, 0.5, 0, 0, 0), dist(0, 0.5, 0.5, 0, 0)), 0.5));
}

TEST_CASE("distance metric axioms on grid and random triples") {
    auto grid = grid_distributions(4);  // coarse grid for triples
    for (const auto& a : grid)
        for (const auto& b : grid) {
            double ab = distance(a, b);
            CHECK(ab >= 0.0);
            CHECK(ab <= 1.0 + 1e-12);
            CHECK(close(ab, distance(b, a)));
        }
    RngStream rng(99);
    for (int i = 0; i < 2000; ++i) {
        auto a = random_distribution(rng);
        auto b = random_distribution(rng);
        auto c = random_distribution(rng);
        CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12);
    }
}

TEST_CASE("distance to own reverse vanishes exactly for palindromes") {
    RngStream rng(41);
    for (int i = 0; i < 500; ++i) {
        auto d = random_distribution(rng);
        bool palindromic = close(d[0], d[4], 1e-12) && close(d[1], d[3], 1e-12);
        CHECK(close(distance(d, reverse(d)), 0.0, 1e-12) == palindromic);
    }
    CHECK(close(distance(dist(0.25, 0.1, 0.3, 0.1, 0.25), reverse(dist(0.25, 0.1, 0.3, 0.1, 0.25))),
                0.0));
}

TEST_CASE("normalization closure over grid operations") {
    auto grid = grid_distributions(20);  // 0.05 steps
    CHECK(grid.size() == 10626);         // compositions of 20 into 5 parts
    for (const auto& d : grid) {
        double sum = 0.0;
        for (std::size_t i = 0; i < kLevels; ++i) {
            CHECK(d[i] >= 0.0);
            CHECK(d[i] <= 1.0 + 1e-12);
            sum += d[i];
        }
        CHECK(close(sum, 1.0));
        auto r = reverse(d);
        double rsum = 0.0;
        for (std::size_t i = 0; i < kLevels; ++i) rsum += r[i];
        CHECK(close(rsum, 1.0));
    }
}
