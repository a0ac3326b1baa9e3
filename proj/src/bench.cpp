#include "pushplan/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace pushplan {

using nlohmann::json;

namespace {

json pose_json(const Pose2D& p) { return json::array({p.x, p.y, p.theta}); }

Pose2D pose_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ScenarioError("pose must be [x, y, theta]");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json polygon_json(const Polygon2D& p) {
  json out = json::array();
  for (const auto& v : p.vertices()) out.push_back({v.x, v.y});
  return out;
}

Polygon2D polygon_from(const json& j) {
  if (!j.is_array()) throw ScenarioError("polygon must be a list of [x, y] points");
  std::vector<Vec2> pts;
  for (const auto& v : j) {
    if (!v.is_array() || v.size() != 2) throw ScenarioError("polygon vertex must be [x, y]");
    pts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  }
  try {
    return Polygon2D(std::move(pts));
  } catch (const GeometryError& e) {
    throw ScenarioError(std::string("invalid polygon: ") + e.what());
  }
}

json units_json() { return {{"length", "m"}, {"angle", "rad"}}; }

void check_header(const json& j) {
  if (!j.is_object()) throw ScenarioError("document must be a JSON object");
  if (j.value("schema_version", -1) != kSchemaVersion) {
    throw ScenarioError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

json dubins_json(const DubinsPath& p) {
  return {{"word", to_string(p.word)},
          {"segments", p.seg_lengths},
          {"radius", p.radius},
          {"start", pose_json(p.start)}};
}

DubinsPath dubins_from(const json& j) {
  DubinsPath p;
  p.word = dubins_word_from_string(j.at("word").get<std::string>());
  p.seg_lengths = j.at("segments").get<std::array<double, 3>>();
  p.radius = j.at("radius").get<double>();
  p.start = pose_from(j.at("start"));
  return p;
}

}  // namespace

json scenario_to_json(const Scenario& s) {
  json objects = json::array();
  for (const auto& o : s.objects) {
    objects.push_back({{"id", o.id},
                       {"shape", polygon_json(o.shape)},
                       {"start", pose_json(o.start)},
                       {"goal", pose_json(o.goal)},
                       {"symmetry_order", o.symmetry.order}});
  }
  const auto& b = s.ws.bounds;
  return {{"schema_version", kSchemaVersion},
          {"units", units_json()},
          {"workspace", {{"bounds", {b.x_min, b.y_min, b.x_max, b.y_max}}, {"grid_resolution", s.ws.grid_resolution}}},
          {"robot",
           {{"rho_push", s.robot.rho_push},
            {"rho_transit", s.robot.rho_transit},
            {"rho_push_min", s.robot.rho_push_min},
            {"bumper_offset", s.robot.bumper_offset},
            {"footprint", polygon_json(s.robot.body_footprint)},
            {"initial_pose", pose_json(s.robot_start)}}},
          {"objects", objects}};
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  try {
    check_header(j);
    const auto& w = j.at("workspace");
    const auto bounds = w.at("bounds").get<std::array<double, 4>>();
    try {
      s.ws = Workspace::make({bounds[0], bounds[1], bounds[2], bounds[3]}, w.at("grid_resolution").get<double>());
    } catch (const GeometryError& e) {
      throw ScenarioError(std::string("invalid workspace: ") + e.what());
    }
    const auto& r = j.at("robot");
    s.robot.rho_push = r.at("rho_push").get<double>();
    s.robot.rho_transit = r.at("rho_transit").get<double>();
    s.robot.rho_push_min = r.value("rho_push_min", s.robot.rho_push_min);
    s.robot.bumper_offset = r.at("bumper_offset").get<double>();
    s.robot.body_footprint =
        r.contains("footprint") ? polygon_from(r.at("footprint")) : RobotParams::default_body(s.robot.bumper_offset);
    s.robot_start = pose_from(r.at("initial_pose"));
    for (const auto& o : j.at("objects")) {
      WorldObject obj;
      obj.id = o.at("id").get<int>();
      obj.shape = polygon_from(o.at("shape"));
      obj.start = pose_from(o.at("start"));
      obj.goal = pose_from(o.at("goal"));
      obj.symmetry.order = o.value("symmetry_order", 1);
      s.objects.push_back(std::move(obj));
    }
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("malformed scenario: ") + e.what());
  }
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(read_json(path)); }

void save_scenario(const Scenario& s, const std::string& path) { write_text(path, scenario_to_json(s).dump(2) + "\n"); }

json plan_to_json(const RearrangementPlan& p) {
  json actions = json::array();
  for (const auto& a : p.actions) {
    json ja{{"kind", to_string(a.kind)}};
    if (a.kind == ActionKind::Transit) {
      json wps = json::array();
      for (const auto& w : a.transit.waypoints) wps.push_back(pose_json(w));
      json arcs = json::array();
      for (const auto& arc : a.transit.arcs) {
        arcs.push_back({{"length", arc.length}, {"curvature", arc.curvature}, {"direction", arc.direction}});
      }
      ja["waypoints"] = wps;
      ja["arcs"] = arcs;
      ja["length"] = a.transit.length;
      ja["radius"] = a.transit.radius_used;
    } else {
      ja["object_id"] = *a.object_id;
      ja["face"] = a.face_index;
      ja["path"] = dubins_json(a.push);
      ja["object_pose_after"] = pose_json(a.object_pose_after);
    }
    actions.push_back(std::move(ja));
  }
  json trace = json::array();
  for (const auto& d : p.depth_trace) {
    trace.push_back({{"depth", d.depth},
                     {"object_id", d.object_id},
                     {"edge", to_string(d.edge_kind)},
                     {"candidates_tried", d.candidates_tried}});
  }
  return {{"schema_version", kSchemaVersion},
          {"units", units_json()},
          {"totals",
           {{"pushing_length", p.pushing_length}, {"transit_length", p.transit_length}, {"total_length", p.total_length}}},
          {"actions", actions},
          {"depth_trace", trace}};
}

RearrangementPlan plan_from_json(const json& j) {
  RearrangementPlan p;
  try {
    check_header(j);
    for (const auto& ja : j.at("actions")) {
      PlanAction a;
      const auto kind = ja.at("kind").get<std::string>();
      if (kind == "transit") {
        a.kind = ActionKind::Transit;
        for (const auto& w : ja.at("waypoints")) a.transit.waypoints.push_back(pose_from(w));
        for (const auto& arc : ja.at("arcs")) {
          a.transit.arcs.push_back(
              {arc.at("length").get<double>(), arc.at("curvature").get<double>(), arc.at("direction").get<int>()});
        }
        a.transit.length = ja.at("length").get<double>();
        a.transit.radius_used = ja.at("radius").get<double>();
      } else if (kind == "push_transfer" || kind == "obstacle_relocation") {
        a.kind = kind == "push_transfer" ? ActionKind::PushTransfer : ActionKind::ObstacleRelocation;
        a.object_id = ja.at("object_id").get<int>();
        a.face_index = ja.at("face").get<int>();
        a.push = dubins_from(ja.at("path"));
        a.object_pose_after = pose_from(ja.at("object_pose_after"));
      } else {
        throw ScenarioError("unknown action kind '" + kind + "'");
      }
      p.actions.push_back(std::move(a));
    }
    for (const auto& d : j.value("depth_trace", json::array())) {
      const auto kind = d.at("edge").get<std::string>();
      EdgeKind k = EdgeKind::Direct;
      if (kind == "prerelocated") k = EdgeKind::Prerelocated;
      if (kind == "blocked_chain") k = EdgeKind::BlockedChain;
      p.depth_trace.push_back({d.at("depth").get<int>(), d.at("object_id").get<int>(), k,
                               d.at("candidates_tried").get<int>()});
    }
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("malformed plan: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("malformed plan: ") + e.what());
  }
  p.recompute_totals();
  return p;
}

RearrangementPlan load_plan(const std::string& path) { return plan_from_json(read_json(path)); }

void save_plan(const RearrangementPlan& p, const std::string& path) { write_text(path, plan_to_json(p).dump(2) + "\n"); }

std::vector<Scenario> perturb(const Scenario& s, int count, std::uint64_t seed, const PerturbConfig& cfg) {
  if (count <= 0) throw std::invalid_argument("perturbation count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto jitter = [&](const Pose2D& p) {
    const double dx = cfg.pos_range * unit(rng);
    const double dy = cfg.pos_range * unit(rng);
    const double dt = cfg.ang_range * unit(rng);
    return Pose2D{p.x + dx, p.y + dy, p.theta + dt};
  };
  std::vector<Scenario> out;
  int failures = 0;
  while (static_cast<int>(out.size()) < count) {
    Scenario c = s;
    for (auto& o : c.objects) {
      o.start = jitter(o.start);
      o.goal = jitter(o.goal);
    }
    try {
      validate_scenario(c);
    } catch (const ScenarioError&) {
      if (++failures >= cfg.max_resamples) {
        throw std::runtime_error("perturbation failed: scenario too dense");
      }
      continue;
    }
    failures = 0;
    out.push_back(std::move(c));
  }
  return out;
}

Scenario generate_scenario(const GeneratorConfig& cfg) {
  if (cfg.num_objects < 0) throw std::invalid_argument("object count must be non-negative");
  Scenario s;
  s.ws = Workspace::make({0, 0, cfg.width, cfg.height}, 0.1);
  s.robot_start = {cfg.width / 2, 0.15, kPi / 2};
  const Polygon2D shape = Polygon2D::square(cfg.side);
  const auto robot_fp = footprint_at(s.robot.body_footprint, s.robot_start);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> x(cfg.wall_margin, cfg.width - cfg.wall_margin);
  std::uniform_real_distribution<double> y(cfg.wall_margin, cfg.height - cfg.wall_margin);
  std::uniform_real_distribution<double> th(-kPi, kPi);

  auto place = [&](std::vector<Polygon2D>& placed, bool avoid_robot) {
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
      const Pose2D p{x(rng), y(rng), th(rng)};
      const auto fp = footprint_at(shape, p);
      if (!inside_workspace(fp, s.ws)) continue;
      if (avoid_robot && !convex_separated(fp.vertices(), robot_fp.vertices(), cfg.min_clearance)) continue;
      const bool ok = std::all_of(placed.begin(), placed.end(), [&](const Polygon2D& q) {
        return convex_separated(fp.vertices(), q.vertices(), cfg.min_clearance);
      });
      if (ok) {
        placed.push_back(fp);
        return p;
      }
    }
    throw std::runtime_error("cannot place object: layout too dense");
  };

  std::vector<Polygon2D> starts;
  std::vector<Polygon2D> goals;
  for (int i = 0; i < cfg.num_objects; ++i) {
    WorldObject o;
    o.id = i;
    o.shape = shape;
    o.symmetry.order = 4;
    o.start = place(starts, true);
    o.goal = place(goals, false);
    s.objects.push_back(std::move(o));
  }
  validate_scenario(s);
  return s;
}

Distribution summarize(std::vector<double> v) {
  Distribution d;
  d.count = static_cast<int>(v.size());
  if (v.empty()) return d;
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  d.mean = sum / static_cast<double>(v.size());
  const std::size_t n = v.size();
  d.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  d.min = v.front();
  d.max = v.back();
  return d;
}

BenchReport run_benchmark(const std::vector<Scenario>& suite, const std::vector<Method>& methods,
                          const BenchOptions& opts, const std::function<void(const InstanceRecord&)>& progress) {
  if (suite.empty()) throw std::invalid_argument("benchmark suite is empty");
  BenchReport report;
  PlanOptions po;
  po.time_limit = opts.time_limit;
  po.work_limit = opts.work_limit;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    for (Method m : methods) {
      const auto res = plan(suite[i], m, po);
      InstanceRecord r;
      r.instance = static_cast<int>(i);
      r.method = m;
      r.seconds = res.stats.seconds;
      r.work = res.stats.work;
      if (res.plan && validate_plan(*res.plan, suite[i])) {
        r.success = true;
        r.pushing_length = res.plan->pushing_length;
        r.total_length = res.plan->total_length;
      } else {
        r.failure = res.plan ? "invalid_plan" : std::string(to_string(res.failure));
      }
      if (progress) progress(r);
      report.records.push_back(r);
    }
  }
  for (Method m : methods) {
    MethodSummary ms;
    ms.method = m;
    std::vector<double> push, total, secs;
    for (const auto& r : report.records) {
      if (r.method != m) continue;
      ++ms.instances;
      secs.push_back(r.seconds);
      if (!r.success) continue;
      ++ms.successes;
      push.push_back(r.pushing_length);
      total.push_back(r.total_length);
    }
    ms.success_rate = ms.instances ? static_cast<double>(ms.successes) / ms.instances : 0.0;
    ms.pushing_length = summarize(push);
    ms.total_length = summarize(total);
    ms.seconds = summarize(secs);
    report.summaries.push_back(ms);
  }
  return report;
}

const MethodSummary& BenchReport::summary(Method m) const {
  for (const auto& s : summaries) {
    if (s.method == m) return s;
  }
  throw std::out_of_range("method not in report");
}

namespace {

json dist_json(const Distribution& d) {
  return {{"count", d.count}, {"mean", d.mean}, {"median", d.median}, {"min", d.min}, {"max", d.max}};
}

}  // namespace

json BenchReport::to_json(bool include_timing) const {
  json recs = json::array();
  for (const auto& r : records) {
    json j{{"instance", r.instance}, {"method", to_string(r.method)}, {"success", r.success},
           {"work", r.work},         {"failure", r.failure}};
    if (include_timing) j["planning_time_s"] = r.seconds;
    if (r.success) {
      j["pushing_length_m"] = r.pushing_length;
      j["total_length_m"] = r.total_length;
    }
    recs.push_back(std::move(j));
  }
  json sums = json::array();
  for (const auto& s : summaries) {
    json j{{"method", to_string(s.method)},
           {"instances", s.instances},
           {"successes", s.successes},
           {"success_rate", s.success_rate},
           {"pushing_length_m", dist_json(s.pushing_length)},
           {"total_length_m", dist_json(s.total_length)}};
    if (include_timing) j["planning_time_s"] = dist_json(s.seconds);
    sums.push_back(std::move(j));
  }
  return {{"schema_version", kSchemaVersion}, {"records", recs}, {"summary", sums}};
}

std::string BenchReport::summary_text() const {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-9s %9s %8s %12s %12s %10s\n", "method", "instances", "success", "push_mean_m",
                "total_mean_m", "time_mean_s");
  os << buf;
  for (const auto& s : summaries) {
    std::snprintf(buf, sizeof buf, "%-9s %9d %7.1f%% %12.3f %12.3f %10.2f\n", std::string(to_string(s.method)).c_str(),
                  s.instances, 100.0 * s.success_rate, s.pushing_length.mean, s.total_length.mean, s.seconds.mean);
    os << buf;
  }
  return os.str();
}

namespace {

constexpr double kScale = 100.0;

struct Svg {
  const Box& b;
  std::ostringstream os;

  std::string pt(double x, double y) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f,%.2f", (x - b.x_min) * kScale, (b.y_max - y) * kScale);
    return buf;
  }
  void polygon(const Polygon2D& p, const char* cls, const char* fill) {
    os << "  <polygon class=\"" << cls << "\" points=\"";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << pt(p.vertices()[i].x, p.vertices()[i].y);
    os << "\" fill=\"" << fill << "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
  }
  void polyline(const std::vector<Pose2D>& poses, const char* cls, const char* color, const char* extra = "") {
    os << "  <polyline class=\"" << cls << "\" points=\"";
    for (std::size_t i = 0; i < poses.size(); ++i) os << (i ? " " : "") << pt(poses[i].x, poses[i].y);
    os << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"" << extra << "/>\n";
  }
};

constexpr const char* kBlue = "#2f6fdb";
constexpr const char* kYellow = "#f2c300";

}  // namespace

std::string render_svg(const Scenario& s, const RearrangementPlan* plan) {
  const Box& b = s.ws.bounds;
  Svg svg{b, {}};
  char head[256];
  std::snprintf(head, sizeof head,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.2f\" height=\"%.2f\" viewBox=\"0 0 %.2f %.2f\">\n",
                b.width() * kScale, b.height() * kScale, b.width() * kScale, b.height() * kScale);
  svg.os << head;
  svg.os << "  <rect class=\"workspace\" x=\"0\" y=\"0\" width=\"" << b.width() * kScale << "\" height=\""
         << b.height() * kScale << "\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n";
  for (const auto& o : s.objects) {
    svg.polygon(footprint_at(o.shape, o.goal), "goal", kYellow);
  }
  for (const auto& o : s.objects) {
    svg.polygon(footprint_at(o.shape, o.start), "start", kBlue);
    svg.polyline({o.start, o.goal}, "connector", "#666666", " stroke-dasharray=\"4,4\"");
  }
  if (plan) {
    for (const auto& a : plan->actions) {
      if (a.kind == ActionKind::Transit) {
        svg.polyline(a.transit.sample(0.05), "transit", kBlue);
      } else {
        svg.polyline(sample_path(a.push, 0.05), a.kind == ActionKind::PushTransfer ? "push" : "relocation", kYellow);
      }
    }
  }
  svg.os << "</svg>\n";
  return svg.os.str();
}

void render(const Scenario& s, const RearrangementPlan* plan, const std::string& out_path) {
  write_text(out_path, render_svg(s, plan));
}

}  // namespace pushplan
