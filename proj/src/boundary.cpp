#include "svweno/boundary.hpp"

#include <stdexcept>

namespace svweno {

BoundaryKind parse_boundary_kind(const std::string& name) {
  if (name == "periodic") return BoundaryKind::periodic;
  if (name == "reflective") return BoundaryKind::reflective;
  if (name == "outflow") return BoundaryKind::outflow;
  if (name == "prescribed") return BoundaryKind::prescribed;
  throw std::invalid_argument("unknown boundary kind '" + name + "'");
}

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::periodic: return "periodic";
    case BoundaryKind::reflective: return "reflective";
    case BoundaryKind::outflow: return "outflow";
    case BoundaryKind::prescribed: return "prescribed";
  }
  return "?";
}

BoundarySide BoundarySide::uniform(BoundaryKind kind) {
  BoundarySide s;
  s.segments.push_back(BoundarySegment{kind, -std::numeric_limits<double>::infinity(),
                                       std::numeric_limits<double>::infinity(), {}});
  return s;
}

BoundarySide BoundarySide::prescribed(StateFunction f) {
  BoundarySide s = uniform(BoundaryKind::prescribed);
  s.segments.front().state = std::move(f);
  return s;
}

const BoundarySegment& BoundarySide::at(double s) const {
  for (const auto& seg : segments) {
    if (s >= seg.lo && s < seg.hi) return seg;
  }
  return segments.back();
}

bool BoundarySide::is_periodic() const {
  return !segments.empty() && segments.front().kind == BoundaryKind::periodic;
}

BoundarySpec BoundarySpec::uniform(BoundaryKind kind) {
  BoundarySpec b;
  b.left = b.right = b.bottom = b.top = BoundarySide::uniform(kind);
  return b;
}

const BoundarySide& BoundarySpec::side(Side s) const {
  switch (s) {
    case Side::left: return left;
    case Side::right: return right;
    case Side::bottom: return bottom;
    case Side::top: return top;
  }
  return left;
}

void BoundarySpec::validate(int dim) const {
  const auto check_side = [](const BoundarySide& side) {
    if (side.segments.empty()) throw std::invalid_argument("boundary side without segments");
    const bool periodic = side.is_periodic();
    for (const auto& seg : side.segments) {
      if ((seg.kind == BoundaryKind::periodic) != periodic) {
        throw std::invalid_argument("periodic boundaries cannot be mixed with other kinds on one side");
      }
      if (seg.kind == BoundaryKind::prescribed && !seg.state) {
        throw std::invalid_argument("prescribed boundary needs a state function");
      }
    }
  };
  check_side(left);
  check_side(right);
  if (left.is_periodic() != right.is_periodic()) {
    throw std::invalid_argument("periodic boundary must be paired with the opposite side");
  }
  if (dim == 2) {
    check_side(bottom);
    check_side(top);
    if (bottom.is_periodic() != top.is_periodic()) {
      throw std::invalid_argument("periodic boundary must be paired with the opposite side");
    }
  }
}

State mirror_state(const Model& model, const State& u, Axis axis) {
  if (model.equation == Equation::advection) return u;
  State m = u;
  const std::size_t mom = axis == Axis::y ? 2 : 1;
  m[mom] = -m[mom];
  return m;
}

State outside_state(const Model& model, const BoundarySegment& seg, const State& inside, Axis axis,
                    double x, double y, double t) {
  switch (seg.kind) {
    case BoundaryKind::reflective: return mirror_state(model, inside, axis);
    case BoundaryKind::outflow: return inside;
    case BoundaryKind::prescribed: return seg.state(x, y, t);
    case BoundaryKind::periodic: break;
  }
  throw std::logic_error("periodic boundary has no local outside state");
}

}  // namespace svweno
