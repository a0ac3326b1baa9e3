#include "pushplan/scenario.hpp"

#include <set>

namespace pushplan {

const WorldObject& Scenario::object(ObjectId id) const {
  for (const auto& o : objects) {
    if (o.id == id) return o;
  }
  throw std::out_of_range("unknown object id " + std::to_string(id));
}

void validate_scenario(const Scenario& s) {
  try {
    s.robot.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
  std::set<ObjectId> ids;
  std::vector<Polygon2D> starts;
  std::vector<Polygon2D> goals;
  for (const auto& o : s.objects) {
    if (!ids.insert(o.id).second) {
      throw ScenarioError("duplicate object id " + std::to_string(o.id));
    }
    if (o.symmetry.order < 1) {
      throw ScenarioError("symmetry order must be >= 1 for object " + std::to_string(o.id));
    }
    starts.push_back(footprint_at(o.shape, o.start));
    goals.push_back(footprint_at(o.shape, o.goal));
    if (!inside_workspace(starts.back(), s.ws)) {
      throw ScenarioError("start of object " + std::to_string(o.id) + " leaves the workspace");
    }
    if (!inside_workspace(goals.back(), s.ws)) {
      throw ScenarioError("goal of object " + std::to_string(o.id) + " leaves the workspace");
    }
  }
  for (std::size_t i = 0; i < starts.size(); ++i) {
    for (std::size_t j = i + 1; j < starts.size(); ++j) {
      if (polygons_intersect(starts[i], starts[j])) {
        throw ScenarioError("starts of objects " + std::to_string(s.objects[i].id) + " and " +
                            std::to_string(s.objects[j].id) + " overlap");
      }
      if (polygons_intersect(goals[i], goals[j])) {
        throw ScenarioError("goals of objects " + std::to_string(s.objects[i].id) + " and " +
                            std::to_string(s.objects[j].id) + " overlap");
      }
    }
  }
  if (!pose_clear(s.robot_start, s.robot.body(), ObstacleSet(starts), s.ws)) {
    throw ScenarioError("robot start pose is in collision");
  }
}

}  // namespace pushplan
