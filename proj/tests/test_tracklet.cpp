#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "reidrank/errors.hpp"
#include "reidrank/synth.hpp"
#include "reidrank/tracklet.hpp"
#include "test_util.hpp"

using namespace reidrank;
using testutil::make_record;

TEST_CASE("temporal_pool averages frames") {
    auto rec = make_record("a", 0, 0, Modality::RGB, {{1, 3}, {3, 1}});
    Embedding pooled = temporal_pool(rec);
    CHECK(pooled[0] == doctest::Approx(2.0));
    CHECK(pooled[1] == doctest::Approx(2.0));
}

TEST_CASE("temporal_pool is identity for a single frame") {
    auto rec = make_record("a", 0, 0, Modality::RGB, {{5, 5, 5}});
    Embedding pooled = temporal_pool(rec);
    for (int d = 0; d < 3; ++d) CHECK(pooled[d] == 5.0);
}

TEST_CASE("temporal_pool matches the scalar-loop oracle on a 10x512 matrix") {
    SplitMix64 rng(7);
    TrackletRecord rec;
    rec.tracklet_id = "r";
    rec.frames = testutil::random_frames(rng, 10, 512);
    const Embedding pooled = temporal_pool(rec);
    const auto expected = oracle::column_means(rec.frames);
    for (int d = 0; d < 512; ++d) {
        CHECK(std::abs(pooled[d] - expected[d]) <= 1e-6);
    }
}

TEST_CASE("temporal_pool rejects an empty frame matrix") {
    TrackletRecord rec;
    rec.tracklet_id = "empty";
    CHECK_THROWS_AS(temporal_pool(rec), DataError);
}

TEST_CASE("non-finite frames are rejected") {
    auto rec = make_record("a", 0, 0, Modality::RGB, {{1.0f, std::numeric_limits<float>::quiet_NaN()}});
    CHECK_THROWS_AS(validate(rec), DataError);
}

TEST_CASE("split_temporal pools two halves") {
    auto rec = make_record("a", 0, 0, Modality::RGB, {{0}, {2}, {4}, {6}});
    auto sub = split_temporal(rec, 2);
    REQUIRE(sub.groups.size() == 2);
    CHECK(sub.groups[0][0] == doctest::Approx(1.0));
    CHECK(sub.groups[1][0] == doctest::Approx(5.0));
}

TEST_CASE("split_temporal with L=1 equals temporal_pool bit for bit") {
    SplitMix64 rng(3);
    TrackletRecord rec;
    rec.tracklet_id = "r";
    rec.frames = testutil::random_frames(rng, 5, 9);
    const auto sub = split_temporal(rec, 1);
    REQUIRE(sub.groups.size() == 1);
    const Embedding pooled = temporal_pool(rec);
    CHECK((sub.groups[0] - pooled).cwiseAbs().maxCoeff() == 0.0);
    CHECK(sub.group_bounds[0] == std::pair<Eigen::Index, Eigen::Index>{0, 5});
}

TEST_CASE("split_temporal distributes remainder to earliest groups") {
    SplitMix64 rng(11);
    TrackletRecord rec;
    rec.tracklet_id = "r";
    rec.frames = testutil::random_frames(rng, 10, 4);
    const auto sub = split_temporal(rec, 4);
    std::vector<Eigen::Index> sizes;
    for (auto [b, e] : sub.group_bounds) sizes.push_back(e - b);
    CHECK(sizes == std::vector<Eigen::Index>{3, 3, 2, 2});
    for (int l = 0; l < 4; ++l) {
        const auto [b, e] = sub.group_bounds[l];
        const auto expected = oracle::column_means(rec.frames, static_cast<int>(b),
                                                   static_cast<int>(e));
        for (int d = 0; d < 4; ++d) {
            CHECK(std::abs(sub.groups[l][d] - expected[d]) <= 1e-6);
        }
    }
}

TEST_CASE("split_temporal rejects invalid group counts") {
    auto rec = make_record("a", 0, 0, Modality::RGB, {{1}, {2}});
    CHECK_THROWS_AS(split_temporal(rec, 3), ConfigError);
    CHECK_THROWS_AS(split_temporal(rec, 0), ConfigError);
}

TEST_CASE("group frame ranges partition the tracklet in order") {
    SplitMix64 rng(21);
    for (int t : {1, 2, 5, 7, 12}) {
        TrackletRecord rec;
        rec.tracklet_id = "r";
        rec.frames = testutil::random_frames(rng, t, 3);
        for (int groups = 1; groups <= t; ++groups) {
            const auto sub = split_temporal(rec, groups);
            Eigen::Index next = 0;
            for (const auto& [b, e] : sub.group_bounds) {
                CHECK(b == next);
                CHECK(e > b);
                next = e;
            }
            CHECK(next == t);
            // sizes differ by at most one
            Eigen::Index lo = t, hi = 0;
            for (const auto& [b, e] : sub.group_bounds) {
                lo = std::min(lo, e - b);
                hi = std::max(hi, e - b);
            }
            CHECK(hi - lo <= 1);
        }
    }
}

TEST_CASE("size-weighted mean of group means equals the full mean") {
    SplitMix64 rng(5);
    for (int t : {3, 8, 10}) {
        TrackletRecord rec;
        rec.tracklet_id = "r";
        rec.frames = testutil::random_frames(rng, t, 6);
        const Embedding full = temporal_pool(rec);
        for (int groups = 1; groups <= t; ++groups) {
            const auto sub = split_temporal(rec, groups);
            Embedding weighted = Embedding::Zero(6);
            for (int l = 0; l < groups; ++l) {
                const auto [b, e] = sub.group_bounds[l];
                weighted += static_cast<double>(e - b) * sub.groups[l];
            }
            weighted /= static_cast<double>(t);
            CHECK((weighted - full).cwiseAbs().maxCoeff() <= 1e-6);
        }
    }
}

TEST_CASE("split validation enforces the modality/direction rule") {
    EvalSplit split;
    split.direction = Direction::VisibleToInfrared;
    split.queries.push_back(make_record("q", 0, 0, Modality::RGB, {{1, 2}}));
    split.gallery.push_back(make_record("g", 0, 1, Modality::IR, {{1, 2}}));
    CHECK_NOTHROW(validate(split));

    split.gallery.push_back(make_record("bad", 1, 1, Modality::RGB, {{3, 4}}));
    CHECK_THROWS_AS(validate(split), DataError);
}

TEST_CASE("split validation enforces a uniform feature dimension") {
    EvalSplit split;
    split.queries.push_back(make_record("q", 0, 0, Modality::RGB, {{1, 2}}));
    split.gallery.push_back(make_record("g", 0, 1, Modality::IR, {{1, 2, 3}}));
    CHECK_THROWS_AS(validate(split), DataError);
}

TEST_CASE("swapped exchanges roles and flips the direction") {
    EvalSplit split;
    split.direction = Direction::VisibleToInfrared;
    split.queries.push_back(make_record("q", 0, 0, Modality::RGB, {{1}}));
    split.gallery.push_back(make_record("g", 0, 1, Modality::IR, {{2}}));
    const EvalSplit rev = swapped(split);
    CHECK(rev.direction == Direction::InfraredToVisible);
    CHECK(rev.queries.front().tracklet_id == "g");
    CHECK(rev.gallery.front().tracklet_id == "q");
    CHECK_NOTHROW(validate(rev));
}
