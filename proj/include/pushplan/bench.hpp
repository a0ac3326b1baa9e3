#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pushplan/sequencer.hpp"

namespace pushplan {

inline constexpr int kSchemaVersion = 1;

// Scenario and plan documents (JSON, meters and radians).
nlohmann::json scenario_to_json(const Scenario& s);
/// Throws ScenarioError on malformed documents or invariant violations.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

nlohmann::json plan_to_json(const RearrangementPlan& p);
RearrangementPlan plan_from_json(const nlohmann::json& j);
RearrangementPlan load_plan(const std::string& path);
void save_plan(const RearrangementPlan& p, const std::string& path);

struct PerturbConfig {
  double pos_range = 0.05;
  double ang_range = 0.1;
  int max_resamples = 1000;
};

/// `count` copies with every object start and goal jittered uniformly; invalid draws
/// are redrawn. Throws std::runtime_error after `max_resamples` consecutive failures.
std::vector<Scenario> perturb(const Scenario& s, int count, std::uint64_t seed, const PerturbConfig& cfg = {});

struct GeneratorConfig {
  int num_objects = 8;
  std::uint64_t seed = 0;
  double width = 4.0;
  double height = 5.2;
  double side = 0.15;
  double min_clearance = 0.05;
  double wall_margin = 0.5;
  int max_attempts = 100000;
};

/// Dense random layout: square objects with random start and goal poses, seeded
/// rejection sampling. Throws std::runtime_error when the layout cannot be filled.
Scenario generate_scenario(const GeneratorConfig& cfg);

struct InstanceRecord {
  int instance = 0;
  Method method = Method::BOSS;
  bool success = false;
  double seconds = 0.0;
  std::int64_t work = 0;
  double pushing_length = 0.0;
  double total_length = 0.0;
  /// none, timeout, no_solution or invalid_plan.
  std::string failure = "none";
};

struct Distribution {
  int count = 0;
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};
Distribution summarize(std::vector<double> values);

struct MethodSummary {
  Method method = Method::BOSS;
  int instances = 0;
  int successes = 0;
  double success_rate = 0.0;
  Distribution pushing_length;
  Distribution total_length;
  Distribution seconds;
};

struct BenchReport {
  std::vector<InstanceRecord> records;
  std::vector<MethodSummary> summaries;

  /// Timing fields are omitted when `include_timing` is false, which makes runs with
  /// work-unit limits byte-comparable.
  nlohmann::json to_json(bool include_timing = true) const;
  std::string summary_text() const;
  const MethodSummary& summary(Method m) const;
};

struct BenchOptions {
  double time_limit = 1200.0;
  std::optional<std::int64_t> work_limit;
};

/// Plans every (instance, method) pair; successes count only after validate_plan.
BenchReport run_benchmark(const std::vector<Scenario>& suite, const std::vector<Method>& methods,
                          const BenchOptions& opts = {},
                          const std::function<void(const InstanceRecord&)>& progress = {});

/// SVG at 100 units per meter. Start footprints blue, goals yellow, dotted start-goal
/// connectors, pushes as yellow polylines and transits as blue ones.
std::string render_svg(const Scenario& s, const RearrangementPlan* plan = nullptr);
/// Throws std::runtime_error when the file cannot be written.
void render(const Scenario& s, const RearrangementPlan* plan, const std::string& out_path);

}  // namespace pushplan
