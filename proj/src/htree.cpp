#include "wpt/htree.hpp"

#include <cstdlib>
#include <string>

namespace wpt {

Length RoutingTree::segment_length(const TreeSegment& s) const {
  const auto& a = nodes[s.node_a].position;
  const auto& b = nodes[s.node_b].position;
  return Length::from_um(std::llabs(a.x - b.x) + std::llabs(a.y - b.y));
}

Length RoutingTree::total_length() const {
  Length sum;
  for (const auto& s : segments) sum += segment_length(s);
  return sum;
}

namespace {

struct Builder {
  RoutingTree tree;
  std::int64_t pitch_um = 0;
  int grid = 0;

  int add_node(PointUm p) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({id, p});
    return id;
  }

  void add_segment(int a, int b, int level) {
    const int id = static_cast<int>(tree.segments.size());
    tree.segments.push_back({id, a, b, level});
  }

  // One H: a horizontal bar through the centre, vertical bars at both ends.
  void build(int center, std::int64_t half_arm, int level, int levels) {
    const PointUm c = tree.nodes[center].position;
    for (int sx : {-1, 1}) {
      const int mid = add_node({c.x + sx * half_arm, c.y});
      add_segment(center, mid, level);
      for (int sy : {-1, 1}) {
        const int tip = add_node({c.x + sx * half_arm, c.y + sy * half_arm});
        add_segment(mid, tip, level);
        if (level == levels) {
          const PointUm p = tree.nodes[tip].position;
          // Inverse of coil_center().
          const int col = static_cast<int>((2 * p.x / pitch_um + (grid - 1)) / 2);
          const int row = static_cast<int>((2 * p.y / pitch_um + (grid - 1)) / 2);
          tree.leaves[{row, col}] = tip;
        } else {
          build(tip, half_arm / 2, level + 1, levels);
        }
      }
    }
  }
};

}  // namespace

RoutingTree build_htree(int order, Length pitch) {
  if (order < 1) throw ValidationError("H-tree order must be >= 1");
  if (order > 6) throw ValidationError("H-tree order " + std::to_string(order) + " exceeds the limit of 6");
  if (pitch.um() <= 0) throw ValidationError("pitch must be > 0");
  if (pitch.um() % 2 != 0) throw ValidationError("pitch must be a whole multiple of 2 um");

  Builder b;
  b.pitch_um = pitch.um();
  b.grid = 1 << order;
  b.tree.order = order;
  b.tree.pitch = pitch;
  b.tree.root = b.add_node({0, 0});
  // Top-level half-arm is 2^(k-2) * pitch, i.e. 2^(k-1) * pitch / 2.
  const std::int64_t half_arm = (std::int64_t{1} << (order - 1)) * (pitch.um() / 2);
  b.build(b.tree.root, half_arm, 1, order);
  return std::move(b.tree);
}

std::vector<TreeSegment> path_to_leaf(const RoutingTree& tree, CoilIndex coil) {
  const auto it = tree.leaves.find(coil);
  if (it == tree.leaves.end())
    throw ValidationError("coil (" + std::to_string(coil.row) + "," + std::to_string(coil.col) +
                          ") is outside the " + std::to_string(1 << tree.order) + "x" +
                          std::to_string(1 << tree.order) + " grid");
  // node_b is always the child; walk parents via a reverse index.
  std::vector<int> parent_segment(tree.nodes.size(), -1);
  for (const auto& s : tree.segments) parent_segment[s.node_b] = s.id;

  std::vector<TreeSegment> path;
  for (int n = it->second; n != tree.root;) {
    const auto& s = tree.segments[parent_segment[n]];
    path.push_back(s);
    n = s.node_a;
  }
  return {path.rbegin(), path.rend()};
}

Length path_length(const RoutingTree& tree, CoilIndex coil) {
  Length sum;
  for (const auto& s : path_to_leaf(tree, coil)) sum += tree.segment_length(s);
  return sum;
}

double feed_resistance(const RoutingTree& tree, CoilIndex coil, const ChannelXSection& xsec,
                       const MaterialDb& m) {
  const double area_mm2 = xsec.width.mm() * xsec.thickness.mm();
  if (!(area_mm2 > 0.0)) throw ValidationError("feed channel cross-section is zero");
  const double length_mm = path_length(tree, coil).mm();
  return m.lm_resistivity * length_mm / area_mm2 + 2.0 * m.contact_resistance_per_joint;
}

}  // namespace wpt
