#pragma once

#include <map>
#include <vector>

#include "wpt/core_model.hpp"

namespace wpt {

struct TreeNode {
  int id = 0;
  PointUm position;
};

struct TreeSegment {
  int id = 0;
  int node_a = 0;  // end nearer the root
  int node_b = 0;
  int level = 1;   // 1 = the H centred on the root
};

/// Equal-path-length H-tree feed network. Node 0 is the root at the sheet
/// centre; every leaf sits on a coil centre.
struct RoutingTree {
  int order = 0;
  Length pitch;
  std::vector<TreeNode> nodes;
  std::vector<TreeSegment> segments;
  int root = 0;
  std::map<CoilIndex, int> leaves;

  Length segment_length(const TreeSegment& s) const;
  Length total_length() const;
};

/// Builds the recursive H for a 2^k x 2^k grid. The top-level half-arm is
/// 2^(k-1) * pitch / 2 and halves per level, ending at pitch / 2.
RoutingTree build_htree(int order, Length pitch);

/// Root-to-leaf segments in order (root first).
std::vector<TreeSegment> path_to_leaf(const RoutingTree& tree, CoilIndex coil);

Length path_length(const RoutingTree& tree, CoilIndex coil);

/// Bulk liquid-metal resistance of the feed path plus the root and leaf
/// contact joints.
double feed_resistance(const RoutingTree& tree, CoilIndex coil, const ChannelXSection& xsec,
                       const MaterialDb& materials);

}  // namespace wpt
