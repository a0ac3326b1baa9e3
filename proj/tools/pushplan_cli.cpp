#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pushplan/bench.hpp"

using namespace pushplan;

namespace {

constexpr int kOk = 0;
constexpr int kPlanFailed = 2;
constexpr int kBadInput = 3;

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(method_from_string(item));
  }
  if (out.empty()) throw std::invalid_argument("no methods given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-object push rearrangement planner"};
  app.require_subcommand(1);

  std::string scenario_path, method = "boss", out_path, plan_path, report_path, methods = "boss,b,bo,relopush";
  double time_limit = 1200.0;
  std::int64_t work_limit = 0;
  int count = 100, num_objects = 8;
  std::uint64_t seed = 0;

  auto* plan_cmd = app.add_subcommand("plan", "plan a rearrangement for one scenario");
  plan_cmd->add_option("scenario", scenario_path)->required();
  plan_cmd->add_option("--method", method)->check(CLI::IsMember({"relopush", "b", "bo", "boss"}));
  plan_cmd->add_option("--time-limit", time_limit);
  plan_cmd->add_option("--work-limit", work_limit, "deterministic budget in work units (0 = none)");
  plan_cmd->add_option("--out", out_path);

  auto* bench_cmd = app.add_subcommand("bench", "run methods over a perturbed suite");
  bench_cmd->add_option("--scenario", scenario_path)->required();
  bench_cmd->add_option("--perturb", count);
  bench_cmd->add_option("--seed", seed);
  bench_cmd->add_option("--methods", methods);
  bench_cmd->add_option("--time-limit", time_limit);
  bench_cmd->add_option("--work-limit", work_limit);
  bench_cmd->add_option("--report", report_path);

  auto* render_cmd = app.add_subcommand("render", "draw a scenario and optional plan as SVG");
  render_cmd->add_option("scenario", scenario_path)->required();
  render_cmd->add_option("--plan", plan_path);
  render_cmd->add_option("-o,--out", out_path)->required();

  auto* validate_cmd = app.add_subcommand("validate", "replay a plan against a scenario");
  validate_cmd->add_option("scenario", scenario_path)->required();
  validate_cmd->add_option("plan", plan_path)->required();

  auto* gen_cmd = app.add_subcommand("generate", "write a random dense scenario");
  gen_cmd->add_option("--objects", num_objects);
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("-o,--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  std::optional<std::int64_t> work;
  if (work_limit > 0) work = work_limit;

  try {
    if (*plan_cmd) {
      const Scenario s = load_scenario(scenario_path);
      PlanOptions opts;
      opts.time_limit = time_limit;
      opts.work_limit = work;
      const auto res = plan(s, method_from_string(method), opts);
      if (!res.ok()) {
        std::cerr << "planning failed: " << to_string(res.failure) << " after " << res.stats.seconds << " s ("
                  << res.stats.depths_entered << " depths, " << res.stats.backtracks << " backtracks, "
                  << res.stats.edges_evaluated << " edges)\n";
        return kPlanFailed;
      }
      std::printf("pushing %.3f m, transit %.3f m, total %.3f m, %zu actions, %.2f s\n", res.plan->pushing_length,
                  res.plan->transit_length, res.plan->total_length, res.plan->actions.size(), res.stats.seconds);
      if (!out_path.empty()) save_plan(*res.plan, out_path);
      return kOk;
    }
    if (*bench_cmd) {
      const Scenario s = load_scenario(scenario_path);
      const auto suite = perturb(s, count, seed);
      BenchOptions opts;
      opts.time_limit = time_limit;
      opts.work_limit = work;
      const auto report = run_benchmark(suite, parse_methods(methods), opts, [](const InstanceRecord& r) {
        std::fprintf(stderr, "instance %d %s: %s\n", r.instance, std::string(to_string(r.method)).c_str(),
                     r.success ? "ok" : r.failure.c_str());
      });
      std::cout << report.summary_text();
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw std::runtime_error("cannot write " + report_path);
        out << report.to_json().dump(2) << "\n";
      }
      return kOk;
    }
    if (*render_cmd) {
      const Scenario s = load_scenario(scenario_path);
      std::optional<RearrangementPlan> p;
      if (!plan_path.empty()) p = load_plan(plan_path);
      render(s, p ? &*p : nullptr, out_path);
      return kOk;
    }
    if (*validate_cmd) {
      const Scenario s = load_scenario(scenario_path);
      const auto p = load_plan(plan_path);
      if (auto v = find_plan_violation(p, s)) {
        std::cerr << "invalid plan: " << *v << "\n";
        return kPlanFailed;
      }
      std::cout << "plan valid\n";
      return kOk;
    }
    if (*gen_cmd) {
      GeneratorConfig cfg;
      cfg.num_objects = num_objects;
      cfg.seed = seed;
      save_scenario(generate_scenario(cfg), out_path);
      return kOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kOk;
}
