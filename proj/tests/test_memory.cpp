#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "repage/memory.hpp"
#include "test_support.hpp"

using namespace repage;
using repage::testing::apply_random_event;
using repage::testing::channel_state;
using repage::testing::random_distribution;
using repage::testing::replay;
using repage::testing::snapshot_deviation;

namespace {

constexpr AgentId kOwner = 1;
constexpr AgentId kSeller = 100;
constexpr AgentId kInformerA = 2;
constexpr AgentId kInformerB = 3;

EvaluationDistribution dist(double a, double b, double c, double d, double e) {
    return EvaluationDistribution::from_weights({a, b, c, d, e});
}

bool close(double a, double b, double tol = 1e-9) { return std::fabs(a - b) <= tol; }

bool close(const EvaluationDistribution& a, const EvaluationDistribution& b) {
    for (std::size_t i = 0; i < kLevels; ++i)
        if (!close(a[i], b[i])) return false;
    return true;
}

// Raises the owner's trust in `informer` to `accuracy quality` via one
// verification outcome.
void certify(RepageMemory& m, AgentId informer, double quality) {
    m.record_outcome(informer, Role::InformerAccuracy, quality, 0);
}

}  // namespace

TEST_CASE("first outcome forms an image with strength 1/3") {
    RepageMemory m(kOwner);
    m.record_outcome(kSeller, Role::SellerQuality, 90, 1);
    const Predicate* img = m.find(kSeller, Role::SellerQuality, PredicateKind::Image);
    REQUIRE(img);
    REQUIRE(img->distribution);
    CHECK(close(*img->distribution, dist(0, 0, 0, 0, 1)));
    CHECK(close(img->strength, 1.0 / 3.0));
}

TEST_CASE("three identical outcomes saturate strength") {
    RepageMemory m(kOwner);
    for (Turn t = 1; t <= 3; ++t) m.record_outcome(kSeller, Role::SellerQuality, 90, t);
    const Predicate* img = m.find(kSeller, Role::SellerQuality, PredicateKind::Image);
    REQUIRE(img);
    CHECK(close(*img->distribution, dist(0, 0, 0, 0, 1)));
    CHECK(close(img->strength, 1.0));
}

TEST_CASE("opposite outcomes average symmetrically") {
    RepageMemory m(kOwner);
    m.record_outcome(kSeller, Role::SellerQuality, 10, 1);
    m.record_outcome(kSeller, Role::SellerQuality, 90, 2);
    const Predicate* img = m.find(kSeller, Role::SellerQuality, PredicateKind::Image);
    REQUIRE(img);
    CHECK(close(*img->distribution, dist(0.5, 0, 0, 0, 0.5)));
}

TEST_CASE("fully trusted report forms the image alone") {
    RepageMemory m(kOwner);
    certify(m, kInformerA, 90);  // trust 1.0
    CHECK(close(m.informer_trust(kInformerA), 1.0));
    m.record_told_image(kInformerA, kSeller, Role::SellerQuality, dist(0, 0, 0, 0, 1), 1);
    const Predicate* img = m.find(kSeller, Role::SellerQuality, PredicateKind::Image);
    REQUIRE(img);
    CHECK(close(*img->distribution, dist(0, 0, 0, 0, 1)));
    CHECK(close(img->strength, 1.0 / 3.0));
}

TEST_CASE("zero-trust report contributes nothing") {
    RepageMemory m(kOwner);
    certify(m, kInformerA, 10);  // trust 0.0
    CHECK(close(m.informer_trust(kInformerA), 0.0));
    m.record_told_image(kInformerA, kSeller, Role::SellerQuality, dist(0, 0, 0, 0, 1), 1);
    CHECK(m.query(kSeller, Role::SellerQuality).is_idk());
    const Predicate* img = m.find(kSeller, Role::SellerQuality, PredicateKind::Image);
    REQUIRE(img);
    CHECK(img->weight == 0.0);
    CHECK_FALSE(img->distribution.has_value());
}

TEST_CASE("report at prior trust blends with an outcome at half weight") {
    RepageMemory m(kOwner);
    m.record_outcome(kSeller, Role::SellerQuality, 10, 1);  // very-bad, weight 1
    m.record_told_image(kInformerA, kSeller, Role::SellerQuality, dist(0, 0, 0, 0, 1), 2);
    const Predicate* img = m.find(kSeller, Role::SellerQuality, PredicateKind::Image);
    REQUIRE(img);
    CHECK(close(*img->distribution, dist(2.0 / 3.0, 0, 0, 0, 1.0 / 3.0)));
    CHECK(close(img->weight, 1.5));
}

TEST_CASE("newest report from one informer replaces the previous one") {
    RepageMemory m(kOwner);
    m.record_told_image(kInformerA, kSeller, Role::SellerQuality, dist(0, 0, 0, 0, 1), 1);
    std::size_t nodes_before = m.node_count();
    m.record_told_image(kInformerA, kSeller, Role::SellerQuality, dist(1, 0, 0, 0, 0), 2);
    CHECK(m.node_count() == nodes_before);  // replaced in place, no new nodes
    const Predicate* img = m.find(kSeller, Role::SellerQuality, PredicateKind::Image);
    REQUIRE(img);
    CHECK(close(*img->distribution, dist(1, 0, 0, 0, 0)));
    // a second informer adds rather than replaces
    m.record_told_image(kInformerB, kSeller, Role::SellerQuality, dist(0, 0, 0, 0, 1), 3);
    CHECK(close(*m.find(kSeller, Role::SellerQuality, PredicateKind::Image)->distribution,
                dist(0.5, 0, 0, 0, 0.5)));
}

TEST_CASE("voices never touch the image, images never touch the voice") {
    RepageMemory m(kOwner);
    m.record_outcome(kSeller, Role::SellerQuality, 10, 1);  // own bad experience
    auto image_before = m.find(kSeller, Role::SellerQuality, PredicateKind::Image)->distribution;
    m.record_told_reputation(kInformerA, kSeller, Role::SellerQuality, dist(0, 0, 0, 0, 1), 2);

    const Predicate* img = m.find(kSeller, Role::SellerQuality, PredicateKind::Image);
    const Predicate* rep = m.find(kSeller, Role::SellerQuality, PredicateKind::Reputation);
    REQUIRE(img);
    REQUIRE(rep);
    CHECK(close(*img->distribution, *image_before));        // contradictory coexistence
    CHECK(close(*rep->distribution, dist(0, 0, 0, 0, 1)));
}

TEST_CASE("two voices average; gossiper trust does not gate them") {
    RepageMemory m(kOwner);
    m.record_told_reputation(kInformerA, kSeller, Role::SellerQuality, dist(0, 0, 0, 0, 1), 1);
    m.record_told_reputation(kInformerB, kSeller, Role::SellerQuality, dist(1, 0, 0, 0, 0), 1);
    const Predicate* rep = m.find(kSeller, Role::SellerQuality, PredicateKind::Reputation);
    REQUIRE(rep);
    CHECK(close(*rep->distribution, dist(0.5, 0, 0, 0, 0.5)));
    CHECK(close(rep->weight, 2.0));
}

TEST_CASE("voice about an unknown target leaves the image absent") {
    RepageMemory m(kOwner);
    m.record_told_reputation(kInformerA, kSeller, Role::SellerQuality, dist(0, 0, 0, 0, 1), 1);
    CHECK(m.find(kSeller, Role::SellerQuality, PredicateKind::Reputation) != nullptr);
    CHECK(m.find(kSeller, Role::SellerQuality, PredicateKind::Image) == nullptr);
    Answer a = m.query(kSeller, Role::SellerQuality);
    CHECK(a.reputation.has_value());
    CHECK_FALSE(a.image.has_value());
}

TEST_CASE("recompute walks the report chain exactly once per node") {
    RepageMemory m(kOwner);
    ChangeSet cs =
        m.record_told_image(kInformerA, kSeller, Role::SellerQuality, dist(0, 0, 1, 0, 0), 1);
    // leaf -> valued-information -> shared-evaluation -> image
    CHECK(cs.recomputed.size() == 3);
    const Predicate* leaf = nullptr;
    for (const auto& [id, p] : m.nodes())
        if (p.kind == PredicateKind::ReportedEvaluation) leaf = &p;
    REQUIRE(leaf);
    ChangeSet again = m.recompute(leaf->id);
    CHECK(again.recomputed.size() == 3);
    CHECK(again.created.empty());
}

TEST_CASE("query thresholds per channel") {
    RepageMemory m(kOwner);
    CHECK(m.query(kSeller, Role::SellerQuality).is_idk());  // unknown target

    // One outcome: strength 1/3 passes the 0.3 threshold.
    m.record_outcome(kSeller, Role::SellerQuality, 90, 1);
    Answer a = m.query(kSeller, Role::SellerQuality);
    REQUIRE(a.image);
    CHECK(close(a.image->strength, 1.0 / 3.0));

    // Other seller: image from a 0.6-trust report stays below threshold,
    // a single voice passes, so only the reputation comes back.
    AgentId other = kSeller + 1;
    certify(m, kInformerA, 58);  // trust (58-10)/80 = 0.6
    CHECK(close(m.informer_trust(kInformerA), 0.6));
    m.record_told_image(kInformerA, other, Role::SellerQuality, dist(0, 0, 0, 0, 1), 2);
    m.record_told_reputation(kInformerA, other, Role::SellerQuality, dist(0, 0, 0, 1, 0), 2);
    Answer b = m.query(other, Role::SellerQuality);
    CHECK(close(m.find(other, Role::SellerQuality, PredicateKind::Image)->strength, 0.2));
    CHECK_FALSE(b.image.has_value());
    REQUIRE(b.reputation);
    CHECK(close(b.reputation->strength, 1.0 / 3.0));
}

TEST_CASE("informer trust prior, bounds, and threshold gate") {
    RepageMemory m(kOwner);
    CHECK(m.informer_trust(kInformerA) == 0.5);  // nothing known
    certify(m, kInformerA, 90);
    CHECK(close(m.informer_trust(kInformerA), 1.0));
    certify(m, kInformerB, 50);
    CHECK(close(m.informer_trust(kInformerB), 0.5));
}

TEST_CASE("trust revisions retroactively reweight reports") {
    RepageMemory m(kOwner);
    m.record_told_image(kInformerA, kSeller, Role::SellerQuality, dist(0, 0, 0, 0, 1), 1);
    const Predicate* img = m.find(kSeller, Role::SellerQuality, PredicateKind::Image);
    REQUIRE(img);
    CHECK(close(img->weight, 0.5));  // prior trust
    certify(m, kInformerA, 90);      // trust rises to 1.0
    CHECK(close(img->weight, 1.0));  // report reweighted without a new report
    CHECK(snapshot_deviation(m.snapshot(), m.full_recompute()) < 1e-9);
    certify(m, kInformerA, 10);      // trust collapses
    CHECK(img->weight < 0.6);
    CHECK(snapshot_deviation(m.snapshot(), m.full_recompute()) < 1e-9);
}

TEST_CASE("accuracy-channel reports are weighted by own verifications only") {
    RepageMemory m(kOwner);
    // B vouches for A's accuracy; B itself is unverified (direct trust 0.5).
    m.record_told_image(kInformerB, kInformerA, Role::InformerAccuracy, dist(0, 0, 0, 0, 1), 1);
    const Predicate* acc = m.find(kInformerA, Role::InformerAccuracy, PredicateKind::Image);
    REQUIRE(acc);
    CHECK(close(acc->weight, 0.5));
    // Verifying B raises the weight of B's accuracy vouching.
    certify(m, kInformerB, 90);
    CHECK(close(acc->weight, 1.0));
    CHECK(snapshot_deviation(m.snapshot(), m.full_recompute()) < 1e-9);
}

TEST_CASE("full_recompute on an empty memory is empty") {
    RepageMemory m(kOwner);
    CHECK(m.full_recompute().empty());
    CHECK(m.node_count() == 0);
}

TEST_CASE("oracle equivalence after each single operation") {
    RepageMemory m(kOwner);
    m.record_outcome(kSeller, Role::SellerQuality, 42, 1);
    CHECK(snapshot_deviation(m.snapshot(), m.full_recompute()) < 1e-9);
    m.record_told_image(kInformerA, kSeller, Role::SellerQuality, dist(0, 1, 0, 0, 0), 2);
    CHECK(snapshot_deviation(m.snapshot(), m.full_recompute()) < 1e-9);
    m.record_told_reputation(kInformerB, kSeller, Role::SellerQuality, dist(0, 0, 0, 1, 0), 3);
    CHECK(snapshot_deviation(m.snapshot(), m.full_recompute()) < 1e-9);
}

TEST_CASE("oracle equivalence over a long random event sequence") {
    RepageMemory m(kOwner);
    RngStream rng(123);
    for (int i = 0; i < 1000; ++i) {
        apply_random_event(m, rng, 12, static_cast<Turn>(i));
        if (i % 97 == 0) CHECK(snapshot_deviation(m.snapshot(), m.full_recompute()) < 1e-9);
    }
    CHECK(snapshot_deviation(m.snapshot(), m.full_recompute()) < 1e-9);
    m.check_invariants();
}

TEST_CASE("channel replay independence") {
    RepageMemory m(kOwner);
    RngStream rng(321);
    for (int i = 0; i < 400; ++i) apply_random_event(m, rng, 10, static_cast<Turn>(i));

    auto no_voices = replay(kOwner, m.idk_threshold(), m.journal(), [](const MemoryEvent& e) {
        return e.type != MemoryEvent::Type::ToldReputation;
    });
    CHECK(channel_state(m, PredicateKind::Image) == channel_state(no_voices, PredicateKind::Image));

    auto only_voices = replay(kOwner, m.idk_threshold(), m.journal(), [](const MemoryEvent& e) {
        return e.type == MemoryEvent::Type::ToldReputation;
    });
    CHECK(channel_state(m, PredicateKind::Reputation) ==
          channel_state(only_voices, PredicateKind::Reputation));
}

TEST_CASE("events never delete image or reputation nodes") {
    RepageMemory m(kOwner);
    RngStream rng(555);
    std::size_t images = 0, reputations = 0;
    for (int i = 0; i < 300; ++i) {
        apply_random_event(m, rng, 8, static_cast<Turn>(i));
        std::size_t img = channel_state(m, PredicateKind::Image).size();
        std::size_t rep = channel_state(m, PredicateKind::Reputation).size();
        CHECK(img >= images);
        CHECK(rep >= reputations);
        images = img;
        reputations = rep;
    }
}

TEST_CASE("link sets stay mutually consistent and acyclic") {
    RepageMemory m(kOwner);
    RngStream rng(777);
    for (int i = 0; i < 250; ++i) apply_random_event(m, rng, 6, static_cast<Turn>(i));
    m.check_invariants();
    for (const auto& [id, p] : m.nodes())
        if (p.kind == PredicateKind::Outcome || p.kind == PredicateKind::ReportedEvaluation)
            CHECK(p.antecedents.empty());
}

TEST_CASE("dump is deterministic and reflects the graph") {
    auto build = [] {
        RepageMemory m(kOwner);
        m.record_outcome(kSeller, Role::SellerQuality, 80, 1);
        m.record_told_image(kInformerA, kSeller, Role::SellerQuality, dist(0, 0, 0, 0, 1), 2);
        m.record_told_reputation(kInformerB, kSeller, Role::SellerQuality, dist(1, 0, 0, 0, 0), 3);
        return m;
    };
    RepageMemory a = build();
    RepageMemory b = build();
    CHECK(a.dump() == b.dump());
    std::string d = a.dump();
    CHECK(d.find("kind=image") != std::string::npos);
    CHECK(d.find("kind=shared-voice") != std::string::npos);
    CHECK(d.find("role=seller-quality") != std::string::npos);
    CHECK(d.find("channel=reputation") != std::string::npos);
}

TEST_CASE("self-reports are rejected") {
    RepageMemory m(kOwner);
    CHECK_THROWS_AS(
        m.record_told_image(kOwner, kSeller, Role::SellerQuality, dist(0, 0, 1, 0, 0), 1),
        std::invalid_argument);
    CHECK_THROWS_AS(
        m.record_told_reputation(kOwner, kSeller, Role::SellerQuality, dist(0, 0, 1, 0, 0), 1),
        std::invalid_argument);
}
