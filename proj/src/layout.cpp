#include "sorlayout/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sorlayout/error.hpp"
#include "sorlayout/json_io.hpp"

namespace sorlayout {

namespace {

struct Region {
  Area tabs;
  double x0, y0, x1, y1;
};

ConstraintId pin(ConstraintSystem& system, VariableId v, double value, int priority) {
  return system.add_constraint({Term{v, 1.0}}, Relation::kEq, value, priority);
}

// tab = fraction * window edge, so the layout scales with the window.
ConstraintId proportional_pin(ConstraintSystem& system, VariableId tab, VariableId edge,
                              double fraction, int priority) {
  return system.add_constraint({Term{tab, 1.0}, Term{edge, -fraction}}, Relation::kEq, 0.0,
                               priority);
}

ConstraintId ordered(ConstraintSystem& system, VariableId lo, VariableId hi, int priority) {
  return system.add_constraint({Term{hi, 1.0}, Term{lo, -1.0}}, Relation::kGe, 0.0, priority);
}

double draw_delta(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> magnitude(lo, hi);
  std::bernoulli_distribution negative(0.5);
  double m = magnitude(rng);
  return negative(rng) ? -m : m;
}

ResizeDelta step(LayoutSpec& layout, Rng& rng, double lo, double hi) {
  ResizeDelta d;
  d.dw = draw_delta(rng, lo, hi);
  d.dh = draw_delta(rng, lo, hi);
  resize(layout, std::max(kMinWindow, layout.width + d.dw),
         std::max(kMinWindow, layout.height + d.dh));
  return d;
}

}  // namespace

LayoutSpec generate_layout(int n_areas, double width, double height, std::uint64_t seed) {
  if (n_areas < 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_areas must be non-negative");
  }
  if (!(width > 0.0 && height > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "window dimensions must be positive");
  }

  Rng rng(seed);
  LayoutSpec layout;
  layout.width = width;
  layout.height = height;
  ConstraintSystem& system = layout.system;

  const VariableId left = system.add_variable();
  const VariableId top = system.add_variable();
  const VariableId right = system.add_variable();
  const VariableId bottom = system.add_variable();
  layout.x_tabs = {left, right};
  layout.y_tabs = {top, bottom};

  layout.window.left = pin(system, left, 0.0, 1);
  layout.window.top = pin(system, top, 0.0, 2);
  layout.window.right = pin(system, right, width, 3);
  layout.window.bottom = pin(system, bottom, height, 4);

  if (n_areas == 0) return layout;

  std::vector<Region> regions{{Area{left, top, right, bottom}, 0.0, 0.0, width, height}};
  std::uniform_real_distribution<double> cut(0.25, 0.75);
  std::bernoulli_distribution vertical(0.5);
  for (int i = 1; i < n_areas; ++i) {
    std::uniform_int_distribution<std::size_t> which(0, regions.size() - 1);
    const std::size_t index = which(rng);
    Region first = regions[index];
    Region second = first;
    if (vertical(rng)) {
      const double x = first.x0 + cut(rng) * (first.x1 - first.x0);
      const VariableId tab = system.add_variable();
      layout.x_tabs.push_back(tab);
      first.tabs.right = tab;
      first.x1 = x;
      second.tabs.left = tab;
      second.x0 = x;
    } else {
      const double y = first.y0 + cut(rng) * (first.y1 - first.y0);
      const VariableId tab = system.add_variable();
      layout.y_tabs.push_back(tab);
      first.tabs.bottom = tab;
      first.y1 = y;
      second.tabs.top = tab;
      second.y0 = y;
    }
    regions[index] = first;
    regions.push_back(second);
  }

  std::vector<int> priorities(4 * regions.size());
  std::iota(priorities.begin(), priorities.end(), 5);
  std::shuffle(priorities.begin(), priorities.end(), rng);

  std::size_t next = 0;
  for (const Region& r : regions) {
    layout.areas.push_back(r.tabs);
    proportional_pin(system, r.tabs.left, right, r.x0 / width, priorities[next++]);
    proportional_pin(system, r.tabs.top, bottom, r.y0 / height, priorities[next++]);
    ordered(system, r.tabs.left, r.tabs.right, priorities[next++]);
    ordered(system, r.tabs.top, r.tabs.bottom, priorities[next++]);
  }
  return layout;
}

void resize(LayoutSpec& layout, double new_width, double new_height) {
  if (!(new_width >= kMinWindow && new_height >= kMinWindow)) {
    throw Error(ErrorCode::kBelowMinimum,
                "window must be at least " + std::to_string(kMinWindow) + " px per side");
  }
  layout.system.update_rhs(layout.window.right, new_width);
  layout.system.update_rhs(layout.window.bottom, new_height);
  layout.width = new_width;
  layout.height = new_height;
}

ResizeDelta small_step(LayoutSpec& layout, Rng& rng) { return step(layout, rng, 0.0, 3.0); }

ResizeDelta big_step(LayoutSpec& layout, Rng& rng) { return step(layout, rng, 4.0, 3000.0); }

std::vector<ConstraintId> perturb_constraints(LayoutSpec& layout, double fraction, Rng& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fraction must lie in (0, 1]");
  }
  std::vector<ConstraintId> pool;
  for (const Constraint& c : layout.system.constraints()) {
    if (!layout.is_window_constraint(c.id)) pool.push_back(c.id);
  }
  const auto wanted = static_cast<std::size_t>(
      std::lround(fraction * static_cast<double>(layout.system.size())));
  const std::size_t k = std::min(wanted, pool.size());

  // Partial Fisher-Yates: the first k entries become a uniform sample.
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);

  std::uniform_real_distribution<double> value(0.0, std::max(layout.width, layout.height));
  for (ConstraintId id : pool) layout.system.update_rhs(id, value(rng));
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<Rect> area_rects(const LayoutSpec& layout, const Solution& solution) {
  std::vector<Rect> rects;
  rects.reserve(layout.areas.size());
  for (const Area& a : layout.areas) {
    rects.push_back(Rect{solution[a.left], solution[a.top], solution[a.right], solution[a.bottom]});
  }
  return rects;
}

nlohmann::json layout_to_json(const LayoutSpec& layout) {
  using nlohmann::json;
  json doc = system_to_json(layout.system);
  json areas = json::array();
  for (const Area& a : layout.areas) {
    areas.push_back(json::array({a.left.index, a.top.index, a.right.index, a.bottom.index}));
  }
  auto indices = [](const std::vector<VariableId>& vars) {
    json out = json::array();
    for (VariableId v : vars) out.push_back(v.index);
    return out;
  };
  doc["areas"] = std::move(areas);
  doc["window"] = {{"left", layout.window.left.value},
                   {"top", layout.window.top.value},
                   {"right", layout.window.right.value},
                   {"bottom", layout.window.bottom.value}};
  doc["width"] = layout.width;
  doc["height"] = layout.height;
  doc["x_tabs"] = indices(layout.x_tabs);
  doc["y_tabs"] = indices(layout.y_tabs);
  return doc;
}

LayoutSpec layout_from_json(const nlohmann::json& doc) {
  LayoutSpec layout;
  layout.system = system_from_json(doc);
  const std::size_t n = layout.system.variable_count();
  auto var = [n](const nlohmann::json& j) {
    const auto index = j.get<std::size_t>();
    if (index >= n) {
      throw Error(ErrorCode::kBadFormat, "tabstop " + std::to_string(index) + " out of range");
    }
    return VariableId{index};
  };
  try {
    for (const auto& a : doc.at("areas")) {
      if (!a.is_array() || a.size() != 4) {
        throw Error(ErrorCode::kBadFormat, "area must list four tabstops");
      }
      layout.areas.push_back(Area{var(a[0]), var(a[1]), var(a[2]), var(a[3])});
    }
    const auto& w = doc.at("window");
    auto cid = [&](const char* key) {
      ConstraintId id{w.at(key).get<std::size_t>()};
      layout.system.constraint(id);
      return id;
    };
    layout.window = WindowConstraints{cid("left"), cid("top"), cid("right"), cid("bottom")};
    layout.width = doc.at("width").get<double>();
    layout.height = doc.at("height").get<double>();
    for (const auto& v : doc.at("x_tabs")) layout.x_tabs.push_back(var(v));
    for (const auto& v : doc.at("y_tabs")) layout.y_tabs.push_back(var(v));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadFormat, std::string("malformed layout: ") + e.what());
  }
  return layout;
}

}  // namespace sorlayout
