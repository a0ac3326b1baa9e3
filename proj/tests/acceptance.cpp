// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dubins_oracle.hpp"
#include "pushplan/bench.hpp"
#include "support.hpp"

using namespace pushplan;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Polygon2D kSquare = Polygon2D::square(0.15);
const Workspace kPaperWs = Workspace::make({0, 0, 4, 5.2}, 0.1);

// Plans found by any criterion; all of them go through the validator in criterion 6.
struct Emitted {
  Scenario scenario;
  RearrangementPlan plan;
};
std::vector<Emitted> g_emitted;

Outcome dubins_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  int mismatches = 0;
  int oracle_mismatches = 0;
  double worst_end = 0.0;
  for (double rho : {1.09, 1.43}) {
    for (int i = 0; i < 10000; ++i) {
      const Pose2D s = testing::random_pose(rng, 3.0);
      const Pose2D g = testing::random_pose(rng, 3.0);
      const auto best = shortest_dubins(s, g, rho);
      double per_word = std::numeric_limits<double>::infinity();
      for (DubinsWord w : {DubinsWord::LSL, DubinsWord::RSR, DubinsWord::LSR, DubinsWord::RSL, DubinsWord::RLR,
                           DubinsWord::LRL}) {
        if (auto p = dubins_word_path(s, g, rho, w)) per_word = std::min(per_word, p->length());
      }
      if (std::abs(best.length() - per_word) > 1e-9) ++mismatches;
      if (std::abs(best.length() - testing::oracle_shortest(s, g, rho)) > 1e-9) ++oracle_mismatches;
      const Pose2D e = best.end_pose();
      worst_end = std::max({worst_end, planar_distance(e, g), std::abs(normalize_angle(e.theta - g.theta))});
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && oracle_mismatches == 0 && worst_end <= 1e-9 && secs < 10.0,
          fmt("20000 pairs, %d per-word mismatches, %d geometric-oracle mismatches, max endpoint error %.2e, %.2f s",
              mismatches, oracle_mismatches, worst_end, secs)};
}

Outcome turning_lower_bound() {
  std::mt19937_64 rng(2);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const double rho = i % 2 ? 1.43 : 1.09;
    const Pose2D s = testing::random_pose(rng, 3.0);
    const Pose2D g = testing::random_pose(rng, 3.0);
    const double len = shortest_dubins_length(s, g, rho);
    const double turn = std::abs(normalize_angle(g.theta - s.theta));
    if (len + 1e-12 < rho * turn) ++violations;
    if (len + 1e-12 < planar_distance(s, g)) ++violations;
  }
  return {violations == 0, fmt("1000 queries, %d violations", violations)};
}

PrereloQuery random_query(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(0.6, 3.4);
  std::uniform_real_distribution<double> y(0.6, 4.6);
  std::uniform_real_distribution<double> th(-kPi, kPi);
  std::uniform_int_distribution<int> face(0, 3);
  std::vector<Polygon2D> obstacles;
  const Pose2D s{x(rng), y(rng), th(rng)};
  const Pose2D g{x(rng), y(rng), th(rng)};
  for (int i = 0; i < 3; ++i) {
    const Pose2D o{x(rng), y(rng), th(rng)};
    if (planar_distance(o, s) > 0.6 && planar_distance(o, g) > 0.6) obstacles.push_back(footprint_at(kSquare, o));
  }
  return make_prerelo_query(0, kSquare, s, g, face(rng), face(rng),
                            std::make_shared<ObstacleSet>(std::move(obstacles)), kPaperWs, RobotParams{});
}

Outcome seed_structure() {
  std::mt19937_64 rng(3);
  int queries = 0;
  int seeds = 0;
  int violations = 0;
  while (queries < 500) {
    const auto q = random_query(rng);
    std::vector<PrereloSolution> feasible;
    for (int v : {1, 2}) {
      if (auto s = seed_fillet(q, v)) feasible.push_back(*s);
    }
    if (feasible.empty()) continue;
    ++queries;
    const double rho = q.params.rho_push;
    double best_seed = std::numeric_limits<double>::infinity();
    for (const auto& s : feasible) {
      ++seeds;
      const bool arc_first_leg = s.seed_used == SeedKind::Fillet1;
      const auto& arc_leg = arc_first_leg ? s.path1 : s.path2;
      const auto& line_leg = arc_first_leg ? s.path2 : s.path1;
      // Exactly one turning segment in total, and the other leg is a straight.
      int arcs = 0;
      const auto kinds = segment_kinds(arc_leg.word);
      for (std::size_t k = 0; k < 3; ++k) arcs += kinds[k] != SegmentKind::Straight && arc_leg.seg_lengths[k] > 0.0;
      const double turn = arc_leg.total_turning();
      const double s1 = arc_leg.length() - rho * turn;
      const bool structured = arcs <= 1 && line_leg.total_turning() == 0.0;
      if (!structured || std::abs(s.cost - (rho * turn + s1 + line_leg.length())) > 1e-9) ++violations;
      best_seed = std::min(best_seed, s.cost);
    }
    const auto opt = optimize_prerelocation(q);
    if (!opt || opt->cost > best_seed + 1e-12) ++violations;
  }
  return {violations == 0, fmt("500 queries with %d feasible seeds, %d violations", seeds, violations)};
}

Outcome optimizer_vs_axis() {
  std::mt19937_64 rng(4);
  int both = 0;
  int not_worse = 0;
  double improvement = 0.0;
  int attempts = 0;
  while (both < 200 && attempts < 20000) {
    ++attempts;
    const auto q = random_query(rng);
    const auto opt = optimize_prerelocation(q);
    if (!opt) continue;
    const auto axis = sample_axis_prerelocation(q, q.ws.grid_resolution, q.ws.bounds.diagonal());
    if (!axis) continue;
    ++both;
    not_worse += opt->cost <= axis->cost + 1e-12;
    improvement += axis->cost - opt->cost;
  }
  const double frac = both ? static_cast<double>(not_worse) / both : 0.0;
  const double mean = both ? improvement / both : 0.0;
  return {both == 200 && frac >= 0.95 && mean > 0.0,
          fmt("%d queries, optimized <= axis in %.1f%%, mean improvement %.3f m", both, 100.0 * frac, mean)};
}

std::vector<Scenario> ablation_suite(int m, int count) {
  std::vector<Scenario> out;
  for (int i = 0; i < count; ++i) {
    GeneratorConfig cfg;
    cfg.num_objects = m;
    cfg.seed = static_cast<std::uint64_t>(1000 * m + i);
    out.push_back(generate_scenario(cfg));
  }
  return out;
}

Outcome ablation_ordering() {
  const auto t0 = Clock::now();
  const std::vector<Method> methods{Method::BOSS, Method::B, Method::ReloPush};
  std::map<Method, int> success;
  std::map<Method, int> timeouts;
  double boss_push = 0.0;
  double b_push = 0.0;
  int joint = 0;
  int total = 0;
  std::string per_m;
  PlanOptions opts;
  opts.time_limit = 60.0;
  for (int m : {4, 6, 8}) {
    std::map<Method, int> local;
    for (const auto& s : ablation_suite(m, 50)) {
      ++total;
      std::map<Method, std::optional<RearrangementPlan>> plans;
      for (Method me : methods) {
        auto r = plan(s, me, opts);
        if (r.failure == FailureReason::Timeout) ++timeouts[me];
        if (!r.plan) continue;
        g_emitted.push_back({s, *r.plan});
        if (!validate_plan(*r.plan, s)) continue;
        ++success[me];
        ++local[me];
        plans[me] = std::move(r.plan);
      }
      if (plans.count(Method::BOSS) && plans.count(Method::B)) {
        ++joint;
        boss_push += plans[Method::BOSS]->pushing_length;
        b_push += plans[Method::B]->pushing_length;
      }
    }
    per_m += fmt(" m=%d boss/b/relopush=%d/%d/%d;", m, local[Method::BOSS], local[Method::B], local[Method::ReloPush]);
    std::fprintf(stderr, "  ablation m=%d done at %.0f s\n", m, seconds_since(t0));
  }
  const double secs = seconds_since(t0);
  const double boss_mean = joint ? boss_push / joint : 0.0;
  const double b_mean = joint ? b_push / joint : 0.0;
  const bool order = success[Method::BOSS] >= success[Method::B] && success[Method::B] >= success[Method::ReloPush];
  const bool shorter = joint > 0 && boss_mean <= b_mean;
  return {order && shorter && secs < 1800.0,
          fmt("%d instances, success boss %d, b %d, relopush %d (timeouts %d/%d/%d);%s joint %d, mean push boss %.3f m "
              "vs b %.3f m, %.0f s",
              total, success[Method::BOSS], success[Method::B], success[Method::ReloPush], timeouts[Method::BOSS],
              timeouts[Method::B], timeouts[Method::ReloPush], per_m.c_str(), joint, boss_mean, b_mean, secs)};
}

Outcome plan_soundness() {
  int violations = 0;
  std::string first;
  for (const auto& e : g_emitted) {
    if (auto v = find_plan_violation(e.plan, e.scenario)) {
      if (first.empty()) first = *v;
      ++violations;
    }
  }
  return {!g_emitted.empty() && violations == 0,
          fmt("%zu plans replayed, %d violations%s%s", g_emitted.size(), violations, first.empty() ? "" : ": ",
              first.c_str())};
}

Outcome perturbation_fidelity() {
  int out_of_bounds = 0;
  int instances = 0;
  double max_dp = 0.0;
  double max_da = 0.0;
  for (int m : {8, 10, 13}) {
    GeneratorConfig cfg;
    cfg.num_objects = m;
    cfg.seed = static_cast<std::uint64_t>(77 + m);
    const auto base = generate_scenario(cfg);
    const auto suite = perturb(base, 100, static_cast<std::uint64_t>(m));
    for (const auto& c : suite) {
      ++instances;
      for (std::size_t i = 0; i < base.objects.size(); ++i) {
        for (auto [a, b] : {std::pair{base.objects[i].start, c.objects[i].start},
                            std::pair{base.objects[i].goal, c.objects[i].goal}}) {
          const double dp = std::max(std::abs(b.x - a.x), std::abs(b.y - a.y));
          const double da = std::abs(normalize_angle(b.theta - a.theta));
          max_dp = std::max(max_dp, dp);
          max_da = std::max(max_da, da);
          if (dp > 0.05 || da > 0.1 + 1e-12) ++out_of_bounds;
        }
      }
    }
  }
  // Determinism: the same seeded suite and work budget produce identical reports.
  GeneratorConfig cfg;
  cfg.num_objects = 4;
  cfg.seed = 4000;
  const auto base = generate_scenario(cfg);
  BenchOptions opts;
  opts.work_limit = 300000;
  const std::vector<Method> methods{Method::BOSS, Method::B, Method::BO, Method::ReloPush};
  const auto r1 = run_benchmark(perturb(base, 4, 99), methods, opts).to_json(false);
  const auto r2 = run_benchmark(perturb(base, 4, 99), methods, opts).to_json(false);
  const bool same = r1 == r2;
  return {out_of_bounds == 0 && same,
          fmt("%d instances, max |dxy| %.4f m, max |dtheta| %.4f rad, %d out of bounds; repeated report %s", instances,
              max_dp, max_da, out_of_bounds, same ? "identical" : "DIFFERS")};
}

Outcome graph_scaling() {
  const std::vector<int> sizes{2, 4, 6, 8, 10, 13};
  std::vector<double> times;
  for (int m : sizes) {
    std::vector<double> reps;
    for (int seed = 0; seed < 3; ++seed) {
      GeneratorConfig cfg;
      cfg.num_objects = m;
      cfg.seed = static_cast<std::uint64_t>(500 + 10 * m + seed);
      const auto s = generate_scenario(cfg);
      const auto t0 = Clock::now();
      const auto g = build_graph(s.objects, s.ws, s.robot, {PrereloMethod::FilletSeeds, {}});
      reps.push_back(seconds_since(t0));
      if (g.vertices().empty()) return {false, "empty graph"};
    }
    times.push_back(std::accumulate(reps.begin(), reps.end(), 0.0) / reps.size());
  }
  // Least-squares cubic in m via the normal equations.
  constexpr int kDeg = 3;
  std::array<std::array<double, kDeg + 2>, kDeg + 1> a{};
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    std::array<double, kDeg + 1> pw{};
    for (int k = 0; k <= kDeg; ++k) pw[k] = std::pow(sizes[i], k);
    for (int r = 0; r <= kDeg; ++r) {
      for (int c = 0; c <= kDeg; ++c) a[r][c] += pw[r] * pw[c];
      a[r][kDeg + 1] += pw[r] * times[i];
    }
  }
  for (int c = 0; c <= kDeg; ++c) {
    int piv = c;
    for (int r = c + 1; r <= kDeg; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    for (int r = 0; r <= kDeg; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k <= kDeg + 1; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::array<double, kDeg + 1> coef{};
  for (int k = 0; k <= kDeg; ++k) coef[k] = a[k][kDeg + 1] / a[k][k];
  const double mean = std::accumulate(times.begin(), times.end(), 0.0) / times.size();
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    double pred = 0.0;
    for (int k = 0; k <= kDeg; ++k) pred += coef[k] * std::pow(sizes[i], k);
    ss_res += (times[i] - pred) * (times[i] - pred);
    ss_tot += (times[i] - mean) * (times[i] - mean);
  }
  const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  std::string series;
  for (std::size_t i = 0; i < sizes.size(); ++i) series += fmt(" m=%d:%.3fs", sizes[i], times[i]);
  return {r2 >= 0.95, fmt("cubic fit R^2 = %.4f;%s", r2, series.c_str())};
}

Outcome backtracking_fixture() {
  Scenario s;
  s.ws = Workspace::make({0, 0, 5.2, 0.8}, 0.1);
  s.robot_start = {5.0, 0.4, kPi};
  s.objects = {{0, kSquare, {2.5, 0.6, 0}, {0.7, 0.2, 0}, {4}}, {1, kSquare, {3.5, 0.2, 0}, {0.2, 0.2, 0}, {4}}};
  std::string detail;
  bool ok = true;
  for (Method m : {Method::ReloPush, Method::B, Method::BO, Method::BOSS}) {
    const auto r = plan(s, m);
    const bool solved = r.plan && validate_plan(*r.plan, s);
    if (r.plan) g_emitted.push_back({s, *r.plan});
    ok = ok && (m == Method::ReloPush ? !solved : solved);
    detail += fmt(" %s=%s", std::string(to_string(m)).c_str(), solved ? "solved" : std::string(to_string(r.failure)).c_str());
  }
  return {ok, "mutual-blocking corridor:" + detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Dubins oracle equivalence", dubins_oracle},
      {"turning lower bound", turning_lower_bound},
      {"fillet seed structure", seed_structure},
      {"optimizer vs axis sampling", optimizer_vs_axis},
      {"ablation ordering", ablation_ordering},
      {"plan soundness", plan_soundness},
      {"perturbation fidelity", perturbation_fidelity},
      {"graph construction scaling", graph_scaling},
      {"backtracking fixture", backtracking_fixture},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  // Soundness replays what the other criteria emitted, so it runs after them.
  std::vector<int> order{1, 2, 3, 4, 5, 7, 8, 9, 6};
  std::map<int, Outcome> results;
  for (int id : order) {
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = Clock::now();
    results[id] = criteria[static_cast<std::size_t>(id - 1)].second();
    std::fprintf(stderr, "criterion %d finished in %.1f s\n", id, seconds_since(t0));
  }
  int failed = 0;
  for (const auto& [id, r] : results) {
    std::printf("%s %d %s: %s\n", r.pass ? "PASS" : "FAIL", id, criteria[static_cast<std::size_t>(id - 1)].first.c_str(),
                r.detail.c_str());
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}
