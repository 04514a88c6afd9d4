#include "repage/market.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace repage {

Market::Market(int n_sellers, int stock, const QualityDistSpec& quality_dist, AgentId first_id,
               RngStream draw_stream)
    : quality_dist_(quality_dist), stock_(stock), next_id_(first_id), rng_(draw_stream) {
    if (n_sellers < 1) throw std::invalid_argument("market needs at least one seller");
    if (stock < 1) throw std::invalid_argument("seller stock must be positive");
    sellers_.reserve(static_cast<std::size_t>(n_sellers));
    for (int i = 0; i < n_sellers; ++i) sellers_.push_back(draw_seller());
}

double Market::draw_quality() {
    switch (quality_dist_.kind) {
        case QualityDistSpec::Kind::UniformInt: {
            auto lo = static_cast<std::int64_t>(quality_dist_.lo);
            auto hi = static_cast<std::int64_t>(quality_dist_.hi);
            return static_cast<double>(
                lo + static_cast<std::int64_t>(rng_.uniform_index(static_cast<std::uint64_t>(hi - lo + 1))));
        }
        case QualityDistSpec::Kind::Point:
            return quality_dist_.value;
        case QualityDistSpec::Kind::NormalTruncated: {
            // Box-Muller with rejection outside the quality range.
            for (int attempt = 0; attempt < 1000; ++attempt) {
                double u1 = rng_.uniform01();
                double u2 = rng_.uniform01();
                if (u1 <= 0.0) continue;
                double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
                double q = quality_dist_.mean + quality_dist_.stddev * z;
                if (q >= kQualityMin && q <= kQualityMax) return q;
            }
            return std::clamp(quality_dist_.mean, kQualityMin, kQualityMax);
        }
    }
    throw std::logic_error("unhandled quality distribution kind");
}

Seller Market::draw_seller() {
    return Seller{next_id_++, draw_quality(), stock_};
}

const Seller* Market::find(AgentId seller) const {
    for (const Seller& s : sellers_)
        if (s.id == seller) return &s;
    return nullptr;
}

std::optional<Contract> Market::purchase(AgentId buyer, AgentId seller, Turn turn) {
    for (Seller& s : sellers_) {
        if (s.id != seller) continue;
        if (s.stock < 1) throw std::logic_error("live seller with empty stock");
        Contract contract{buyer, seller, s.quality, turn};
        --s.stock;
        ++contracts_issued_;
        if (s.stock == 0) retire_and_replace(seller);
        return contract;
    }
    return std::nullopt;  // retired or unknown: invalid choice
}

Seller Market::retire_and_replace(AgentId seller) {
    for (Seller& s : sellers_) {
        if (s.id != seller) continue;
        if (s.stock != 0)
            throw std::logic_error("retire_and_replace called on a seller with stock left");
        s = draw_seller();
        ++retired_count_;
        return s;
    }
    throw std::logic_error("retire_and_replace: seller not live");
}

}  // namespace repage
