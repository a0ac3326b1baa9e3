#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pushplan/ptgraph.hpp"

namespace pushplan {

struct ScenarioError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A rearrangement problem. Object `start` is the initial pose.
struct Scenario {
  Workspace ws = Workspace::make({0, 0, 4, 5.2}, 0.1);
  RobotParams robot;
  Pose2D robot_start;
  std::vector<WorldObject> objects;

  const WorldObject& object(ObjectId id) const;
};

/// Throws ScenarioError describing the first violated invariant.
void validate_scenario(const Scenario& s);

}  // namespace pushplan
