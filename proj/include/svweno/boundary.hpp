#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "svweno/physics.hpp"

namespace svweno {

enum class BoundaryKind { periodic, reflective, outflow, prescribed };

BoundaryKind parse_boundary_kind(const std::string& name);
std::string to_string(BoundaryKind kind);

/// Conserved state as a function of (x, y, t); y is ignored in 1D.
using StateFunction = std::function<State(double x, double y, double t)>;

/// Condition on the part of a side whose tangential coordinate lies in
/// [lo, hi). 1D sides have a single unbounded segment.
struct BoundarySegment {
  BoundaryKind kind = BoundaryKind::outflow;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  StateFunction state;  // prescribed only
};

struct BoundarySide {
  std::vector<BoundarySegment> segments;

  static BoundarySide uniform(BoundaryKind kind);
  static BoundarySide prescribed(StateFunction f);

  /// Segment covering tangential coordinate s (the last one if none does).
  const BoundarySegment& at(double s) const;
  bool is_periodic() const;
};

enum class Side { left = 0, right = 1, bottom = 2, top = 3 };

struct BoundarySpec {
  BoundarySide left = BoundarySide::uniform(BoundaryKind::outflow);
  BoundarySide right = BoundarySide::uniform(BoundaryKind::outflow);
  BoundarySide bottom = BoundarySide::uniform(BoundaryKind::outflow);
  BoundarySide top = BoundarySide::uniform(BoundaryKind::outflow);

  static BoundarySpec uniform(BoundaryKind kind);

  const BoundarySide& side(Side s) const;

  /// Throws std::invalid_argument if a periodic side is not paired with a
  /// periodic opposite side, a segment mixes periodic with other kinds, or
  /// a prescribed segment has no state function.
  void validate(int dim) const;
};

/// Reflects the normal momentum component for `axis` (identity for scalars).
State mirror_state(const Model& model, const State& u, Axis axis);

/// Outside state at a boundary point for non-periodic segments:
/// reflective mirrors, outflow copies, prescribed evaluates the function.
State outside_state(const Model& model, const BoundarySegment& seg, const State& inside, Axis axis,
                    double x, double y, double t);

}  // namespace svweno
