#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "sorlayout/constraint_system.hpp"
#include "sorlayout/sor_engine.hpp"

namespace sorlayout {

/// Smallest window width or height accepted by resize.
inline constexpr double kMinWindow = 10.0;

/// A widget region bounded by four tabstop variables.
struct Area {
  VariableId left, top, right, bottom;
  friend bool operator==(const Area&, const Area&) = default;
};

struct WindowConstraints {
  ConstraintId left, top, right, bottom;
  friend bool operator==(const WindowConstraints&, const WindowConstraints&) = default;
};

/// A generated GUI layout: the constraint system plus the bookkeeping that
/// maps it back to areas and the window.
///
/// Tabstops are the only variables. Window edges are pinned by the four
/// highest-priority constraints. Every area pins its left and top tabstops
/// to a fixed fraction of the window's right and bottom edge, and keeps
/// right >= left and bottom >= top.
struct LayoutSpec {
  ConstraintSystem system;
  std::vector<Area> areas;
  WindowConstraints window;
  double width = 0.0;
  double height = 0.0;
  std::vector<VariableId> x_tabs;
  std::vector<VariableId> y_tabs;

  bool is_window_constraint(ConstraintId id) const {
    return id == window.left || id == window.top || id == window.right || id == window.bottom;
  }

  friend bool operator==(const LayoutSpec&, const LayoutSpec&) = default;
};

struct Rect {
  double left = 0.0, top = 0.0, right = 0.0, bottom = 0.0;
};

/// Random recursive subdivision of a width x height window into `n_areas`
/// areas. The result has 4 * n_areas + 4 constraints and is conflict-free
/// at every window size.
LayoutSpec generate_layout(int n_areas, double width, double height, std::uint64_t seed);

/// Moves the window's right and bottom pins. Throws Error(kBelowMinimum)
/// for dimensions under kMinWindow.
void resize(LayoutSpec& layout, double new_width, double new_height);

/// Drawn change of a resize step, before clamping at kMinWindow.
struct ResizeDelta {
  double dw = 0.0;
  double dh = 0.0;
};

/// Resize by independent deltas with magnitude uniform in [0, 3] px.
ResizeDelta small_step(LayoutSpec& layout, Rng& rng);

/// Resize by independent deltas with magnitude uniform in [4, 3000] px.
ResizeDelta big_step(LayoutSpec& layout, Rng& rng);

/// Gives round(fraction * m) distinct non-window constraints a new rhs drawn
/// uniformly from [0, max(width, height)]. Returns the changed ids in
/// ascending order.
std::vector<ConstraintId> perturb_constraints(LayoutSpec& layout, double fraction, Rng& rng);

/// Pixel rectangles of every area under `solution`.
std::vector<Rect> area_rects(const LayoutSpec& layout, const Solution& solution);

nlohmann::json layout_to_json(const LayoutSpec& layout);
LayoutSpec layout_from_json(const nlohmann::json& doc);

}  // namespace sorlayout
