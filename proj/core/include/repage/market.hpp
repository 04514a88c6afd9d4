// Sellers, stock, purchases and turnover. Sellers are reactive: constant
// quality, finite stock, immediate same-slot replacement on exhaustion so
// the live population size never changes.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "repage/memory.hpp"
#include "repage/rng.hpp"

namespace repage {

// How replacement (and initial) seller quality is drawn.
struct QualityDistSpec {
    enum class Kind : std::uint8_t { UniformInt, Point, NormalTruncated };
    Kind kind = Kind::UniformInt;
    double lo = 1.0, hi = 100.0;  // UniformInt (integer values in [lo,hi])
    double value = 50.0;          // Point
    double mean = 50.0, stddev = 15.0;  // NormalTruncated, rejected outside [1,100]
};

struct Seller {
    AgentId id = 0;
    double quality = 0.0;  // constant for the seller's lifetime
    int stock = 0;
};

struct Contract {
    AgentId buyer = 0;
    AgentId seller = 0;
    double quality = 0.0;
    Turn turn = 0;
};

class Market {
public:
    // Ids are handed out from `first_id` upward and never reused.
    Market(int n_sellers, int stock, const QualityDistSpec& quality_dist, AgentId first_id,
           RngStream draw_stream);

    const std::vector<Seller>& sellers() const { return sellers_; }
    const Seller* find(AgentId seller) const;

    Seller draw_seller();

    // Decrements stock and returns the contract; retires and replaces the
    // seller the moment its stock reaches zero. nullopt when the id is not
    // a live seller (the invalid-choice signal; the buyer re-chooses).
    std::optional<Contract> purchase(AgentId buyer, AgentId seller, Turn turn);

    // Replaces an exhausted seller with a fresh draw in the same slot.
    // Throws std::logic_error if the seller still has stock.
    Seller retire_and_replace(AgentId seller);

    int retired_count() const { return retired_count_; }
    std::uint64_t contracts_issued() const { return contracts_issued_; }

private:
    double draw_quality();

    std::vector<Seller> sellers_;
    QualityDistSpec quality_dist_;
    int stock_;
    AgentId next_id_;
    int retired_count_ = 0;
    std::uint64_t contracts_issued_ = 0;
    RngStream rng_;
};

}  // namespace repage
