#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles/hand_formulas.hpp"
#include "wpt/geometry.hpp"
#include "wpt/htree.hpp"

using namespace wpt;

namespace {

const Length kPitch = Length::from_um(50000);

std::int64_t sum_path(const RoutingTree& t, CoilIndex c) {
  std::int64_t sum = 0;
  for (const auto& s : path_to_leaf(t, c)) {
    const auto& a = t.nodes[s.node_a].position;
    const auto& b = t.nodes[s.node_b].position;
    sum += std::abs(a.x - b.x) + std::abs(a.y - b.y);
  }
  return sum;
}

// One H of half-arm h holds 6h of wire and spawns four subtrees:
// L(0) = 0, L(k) = 4 L(k-1) + 3 * 2^(k-1) pitch.
std::int64_t recurrence_total(int k, std::int64_t pitch) {
  std::int64_t l = 0;
  for (int i = 1; i <= k; ++i) l = 4 * l + 3 * (std::int64_t{1} << (i - 1)) * pitch;
  return l;
}

}  // namespace

TEST_SUITE("htree") {
  TEST_CASE("k=1 layout") {
    const auto t = build_htree(1, kPitch);
    REQUIRE(t.leaves.size() == 4);
    std::set<PointUm> pos;
    for (const auto& [c, id] : t.leaves) pos.insert(t.nodes[id].position);
    CHECK(pos == std::set<PointUm>{{-25000, -25000}, {-25000, 25000}, {25000, -25000}, {25000, 25000}});
    CHECK(t.nodes[t.root].position == PointUm{0, 0});
    const auto p = path_to_leaf(t, {0, 0});
    CHECK(p.size() == 2);
    CHECK(path_length(t, {0, 0}).um() == 50000);
  }

  TEST_CASE("k=2 equal paths and total wire") {
    const auto t = build_htree(2, kPitch);
    CHECK(t.leaves.size() == 16);
    for (const auto& [c, id] : t.leaves) {
      CHECK(path_length(t, c).um() == 150000);
      CHECK(sum_path(t, c) == 150000);
    }
    CHECK(t.total_length().um() == 900000);
    CHECK_THROWS_AS(path_to_leaf(t, {9, 9}), ValidationError);
  }

  TEST_CASE("equal path lengths for k = 1..6") {
    for (int k = 1; k <= 6; ++k) {
      const auto t = build_htree(k, kPitch);
      const std::int64_t want = ((std::int64_t{1} << k) - 1) * kPitch.um();
      CHECK(t.leaves.size() == (std::size_t{1} << (2 * k)));
      bool all = true;
      for (const auto& [c, id] : t.leaves) all = all && sum_path(t, c) == want;
      CAPTURE(k);
      CHECK(all);
    }
  }

  TEST_CASE("leaves sit exactly on the coil lattice") {
    for (int k = 1; k <= 4; ++k) {
      auto spec = prototype_sheet();
      spec.grid_order = k;
      const auto t = build_htree(k, kPitch);
      for (const auto& [c, id] : t.leaves) CHECK(t.nodes[id].position == coil_center(spec, c));
    }
  }

  TEST_CASE("total length recurrence against enumeration") {
    for (int k = 1; k <= 4; ++k) {
      const auto t = build_htree(k, kPitch);
      std::int64_t enumerated = 0;
      for (const auto& s : t.segments) enumerated += t.segment_length(s).um();
      CHECK(enumerated == recurrence_total(k, kPitch.um()));
      CHECK(t.total_length().um() == enumerated);
    }
  }

  TEST_CASE("segments are axis aligned and only meet at shared nodes") {
    for (int k = 1; k <= 3; ++k) {
      const auto t = build_htree(k, kPitch);
      for (const auto& s : t.segments) {
        const auto& a = t.nodes[s.node_a].position;
        const auto& b = t.nodes[s.node_b].position;
        CHECK(((a.x == b.x) != (a.y == b.y)));
      }
      for (std::size_t i = 0; i < t.segments.size(); ++i)
        for (std::size_t j = i + 1; j < t.segments.size(); ++j) {
          const auto& s = t.segments[i];
          const auto& u = t.segments[j];
          const geom::Segment gs{t.nodes[s.node_a].position, t.nodes[s.node_b].position};
          const geom::Segment gu{t.nodes[u.node_a].position, t.nodes[u.node_b].position};
          if (!geom::segments_intersect(gs, gu)) continue;
          const bool share = s.node_a == u.node_a || s.node_a == u.node_b || s.node_b == u.node_a ||
                             s.node_b == u.node_b;
          CHECK(share);
          // Sharing a node must not mean overlapping.
          CHECK(geom::intersection_points(gs, gu).size() == 1);
        }
    }
  }

  TEST_CASE("feeds stay clear of coil footprints") {
    auto spec = prototype_sheet();
    for (int k = 1; k <= 3; ++k) {
      spec.grid_order = k;
      const auto t = build_htree(k, spec.pitch);
      for (const auto& s : t.segments) {
        const geom::Segment g{t.nodes[s.node_a].position, t.nodes[s.node_b].position};
        for (const auto& [c, id] : t.leaves) {
          const std::int64_t h = spec.coil.outer_side.um() / 2;
          const auto cc = coil_center(spec, c);
          // Shrink by one um: leaf arms end at the centre, which is inside.
          if (s.node_b == id) continue;
          CHECK_FALSE(geom::segment_touches_box(g, {cc.x - h, cc.y - h}, {cc.x + h, cc.y + h}));
        }
      }
    }
  }

  TEST_CASE("feed resistance") {
    const auto t = build_htree(2, kPitch);
    const ChannelXSection x;
    MaterialDb m;
    const double r = feed_resistance(t, {1, 2}, x, m);
    CHECK(r == doctest::Approx(oracle::feed_r(150.0, 1.2, 1.44, 0.32e-3, 11.7e-3)).epsilon(1e-9));
    CHECK(r == doctest::Approx(0.0512).epsilon(0.01));
    m.contact_resistance_per_joint = 0.0;
    const double bulk = feed_resistance(t, {1, 2}, x, m);
    CHECK(bulk == doctest::Approx(0.0278).epsilon(0.01));
    ChannelXSection thick = x;
    thick.thickness = Length::from_um(2880);
    CHECK(feed_resistance(t, {1, 2}, thick, m) == doctest::Approx(bulk / 2.0).epsilon(1e-12));
  }

  TEST_CASE("router rejects bad orders and odd pitch") {
    CHECK_THROWS_AS(build_htree(0, kPitch), ValidationError);
    CHECK_THROWS_AS(build_htree(7, kPitch), ValidationError);
    CHECK_THROWS_AS(build_htree(2, Length::from_um(50001)), ValidationError);
  }
}
