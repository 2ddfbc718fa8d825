#pragma once

#include <vector>

#include "wpt/geometry.hpp"

namespace wpt::geom {

/// Planar arrangement of integer segments with exact rational vertices.
///
/// Faces are traced per connected component of the segment set. Two points
/// lie in the same face of the full arrangement iff they lie in the same
/// face of every component: components are pairwise disjoint compact
/// connected sets, so separation by their union implies separation by one
/// of them (Janiszewski). This avoids nesting bookkeeping for holes.
class Arrangement {
 public:
  explicit Arrangement(std::vector<Segment> segments);

  bool on_curve(PointUm p) const;

  /// Both points are off every segment and not separated by them.
  bool same_region(PointUm p, PointUm q) const;

  struct Boundary {
    std::vector<PointD> outer;               // counter-clockwise, um
    std::vector<std::vector<PointD>> holes;  // clockwise, um
  };

  /// Boundary cycles of the bounded region containing `p`. Empty outer when
  /// `p` is on a segment or in the unbounded face.
  Boundary region_boundary(PointUm p) const;

  std::size_t component_count() const { return components_.size(); }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return half_edges_.size() / 2; }

 private:
  struct Vertex {
    RationalPoint p;
    std::vector<int> out;  // half-edges sorted counter-clockwise
  };
  struct HalfEdge {
    int from = 0;
    int to = 0;
    PointUm dir;       // integer direction of travel
    int segment = 0;   // supporting input segment
    int next = -1;
    int face = -1;
  };
  struct Component {
    std::vector<int> half_edges;
    int outer_face = -1;
    PointUm sample;  // an input endpoint lying on the component
  };

  int twin(int h) const { return h ^ 1; }
  int locate(int component, PointUm q) const;
  std::vector<PointD> face_cycle(int face) const;

  std::vector<Segment> segments_;
  std::vector<int> segment_component_;
  std::vector<Vertex> vertices_;
  std::vector<HalfEdge> half_edges_;
  std::vector<int> face_first_edge_;
  std::vector<Component> components_;
};

}  // namespace wpt::geom
