#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oaf/errors.hpp"
#include "oaf/frames.hpp"
#include "oaf/geometry.hpp"
#include "oaf/rng.hpp"

namespace oaf {

// Per-step motion caps and grasp tolerances of the kinematic end effector.
inline constexpr double kMaxStepTranslation = 0.02;  // m
inline constexpr double kMaxStepRotation = 0.1;      // rad, shortest geodesic
inline constexpr double kGraspPosTol = 0.015;        // m
inline constexpr double kGraspRotTol = 0.3;          // rad
inline constexpr double kLiftHeight = 0.05;          // m above initial height

// Reach envelope the EE saturates at. Object placement sectors live inside.
struct Workspace {
  double r_max = 0.90;
  double z_min = 0.0;
  double z_max = 0.80;

  Vec3 clamp(const Vec3& p) const {
    Vec3 q = p;
    const double r = std::sqrt(q.x * q.x + q.y * q.y);
    if (r > r_max) {
      const double s = r_max / r;
      q.x *= s;
      q.y *= s;
    }
    q.z = std::clamp(q.z, z_min, z_max);
    return q;
  }
};

struct ObjectState {
  std::string object_id;
  Pose body_pose;
  Pose initial_pose;  // frozen at scene construction, used by success checks
  bool held = false;
  std::vector<AffordanceDef> affordances;
  Pose grasp_offset;   // body pose in the EE frame, valid while held
  double radius = 0.04;  // collision footprint for scene sampling

  const AffordanceDef* find_affordance(const std::string& label) const {
    for (const auto& a : affordances)
      if (a.label == label) return &a;
    return nullptr;
  }
};

// Success predicate of one sub-task.
struct SuccessSpec {
  enum class Kind { kGrasped, kPlaced, kPoured };
  Kind kind = Kind::kGrasped;
  std::string object_id;            // subject of the predicate
  std::string object_affordance;    // placed: which affordance must land
  std::string target_object_id;     // placed/poured: goal object
  std::string target_affordance;
  double pos_tol = 0.02;            // placed
  double rot_tol = 0.4;             // placed
  double tilt_min = 1.0;            // poured, rad
  int dwell_steps = 10;             // poured, consecutive steps above tilt_min
};

struct SubTaskSpec {
  std::string name;
  std::string target_object;      // object carrying the task affordance frame
  std::string affordance_label;
  ToolFrameDef tool_frame;
  std::string expert_script_id;   // "grasp" | "place" | "pour"
  SuccessSpec success;
};

// Dwell bookkeeping for the poured predicate; lives in the world value so
// stepping stays a pure state-in/state-out function.
struct PourTracker {
  std::string object_id;
  Pose tool_offset;
  std::string target_object_id;
  std::string target_affordance;
  double tilt_min = 1.0;
  int dwell_steps = 10;
  int count = 0;
  bool achieved = false;
};

struct WorldState {
  std::map<std::string, ObjectState> objects;
  Pose ee_pose;
  bool gripper_closed = false;
  int time_step = 0;
  Workspace workspace;
  std::optional<PourTracker> pour_tracker;
  int empty_close_count = 0;  // close transitions that attached nothing

  const ObjectState& object(const std::string& id) const {
    auto it = objects.find(id);
    if (it == objects.end()) throw Error("unknown object: " + id);
    return it->second;
  }

  Pose affordance_pose(const std::string& object_id, const std::string& label) const {
    const ObjectState& o = object(object_id);
    const AffordanceDef* a = o.find_affordance(label);
    if (!a) throw Error("object " + object_id + " has no affordance " + label);
    return compose(o.body_pose, a->local_offset);
  }

  Pose tool_pose(const ToolFrameDef& tf) const {
    if (tf.source == ToolFrameDef::Source::kEndEffector)
      return compose(ee_pose, tf.local_offset);
    return compose(object(tf.object_id).body_pose, tf.local_offset);
  }

  const ObjectState* held_object() const {
    for (const auto& [id, o] : objects)
      if (o.held) return &o;
    return nullptr;
  }
};

namespace detail {

// Robust axis extraction; angle in [0, pi].
inline std::pair<Vec3, double> axis_angle_of(const Rotation3& r) {
  const double angle = rotation_angle(r);
  if (angle < 1e-12) return {{1, 0, 0}, 0.0};
  if (angle < M_PI - 1e-4) {
    const Vec3 axis{r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)};
    return {axis.normalized(), angle};
  }
  // Near pi: read the axis off R + R^T.
  Vec3 axis{std::sqrt(std::max(0.0, (r(0, 0) + 1) / 2)),
            std::sqrt(std::max(0.0, (r(1, 1) + 1) / 2)),
            std::sqrt(std::max(0.0, (r(2, 2) + 1) / 2))};
  if (r(2, 1) - r(1, 2) < 0) axis.x = -axis.x;
  if (r(0, 2) - r(2, 0) < 0) axis.y = -axis.y;
  if (r(1, 0) - r(0, 1) < 0) axis.z = -axis.z;
  if (axis.norm() < 1e-9) axis = {1, 0, 0};
  return {axis.normalized(), angle};
}

// Geodesic step of at most max_angle towards target.
inline Rotation3 rotate_towards(const Rotation3& current, const Rotation3& target,
                                double max_angle) {
  const Rotation3 rel = current.transpose() * target;
  const auto [axis, angle] = axis_angle_of(rel);
  if (angle <= max_angle) return target;
  return current * Rotation3::from_axis_angle(axis, max_angle);
}

inline double yaw_of(const Rotation3& r) { return std::atan2(r(1, 0), r(0, 0)); }

// Angle between the tool frame's z-axis and the target affordance's z-axis.
inline double pour_tilt(const WorldState& w, const PourTracker& t) {
  const Pose tool = compose(w.object(t.object_id).body_pose, t.tool_offset);
  const Pose target = w.affordance_pose(t.target_object_id, t.target_affordance);
  double c = tool.rotation.col(2).dot(target.rotation.col(2));
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace detail

// Advances the world by one tick: the EE moves toward ee_target under the
// per-step caps, the gripper command is applied (attach on the open->closed
// transition when a free object's affordance is within the grasp tolerances),
// and held objects follow the EE rigidly.
inline WorldState step(const WorldState& w, const Pose& ee_target, bool gripper_cmd) {
  WorldState ns = w;
  ns.time_step = w.time_step + 1;

  // Rotation: shortest geodesic, capped. Snapped back onto SO(3) so that
  // target conditioning can never leak scale drift into the world state.
  ns.ee_pose.rotation = orthonormalized(
      detail::rotate_towards(w.ee_pose.rotation, ee_target.rotation, kMaxStepRotation));
  // Translation: straight line, capped, saturated at the workspace envelope.
  const Vec3 delta = ee_target.translation - w.ee_pose.translation;
  const double dist = delta.norm();
  Vec3 pos = dist <= kMaxStepTranslation ? ee_target.translation
                                         : w.ee_pose.translation + delta * (kMaxStepTranslation / dist);
  ns.ee_pose.translation = ns.workspace.clamp(pos);

  // Gripper transitions.
  if (gripper_cmd && !w.gripper_closed) {
    const ObjectState* best = nullptr;
    double best_dist = kGraspPosTol;
    if (!ns.held_object()) {
      for (auto& [id, o] : ns.objects) {
        for (const auto& a : o.affordances) {
          const Pose ap = compose(o.body_pose, a.local_offset);
          const double d = (ap.translation - ns.ee_pose.translation).norm();
          if (d <= best_dist &&
              rotation_distance(ap.rotation, ns.ee_pose.rotation) <= kGraspRotTol) {
            best = &o;
            best_dist = d;
          }
        }
      }
    }
    if (best) {
      ObjectState& o = ns.objects.at(best->object_id);
      o.held = true;
      o.grasp_offset = compose(inverse(ns.ee_pose), o.body_pose);
    } else {
      ns.empty_close_count = w.empty_close_count + 1;
    }
  } else if (!gripper_cmd && w.gripper_closed) {
    for (auto& [id, o] : ns.objects) o.held = false;
  }
  ns.gripper_closed = gripper_cmd;

  // Held objects move rigidly with the EE.
  for (auto& [id, o] : ns.objects)
    if (o.held) o.body_pose = compose(ns.ee_pose, o.grasp_offset);

  // Pour dwell accounting.
  if (ns.pour_tracker) {
    PourTracker& t = *ns.pour_tracker;
    const ObjectState& o = ns.object(t.object_id);
    if (o.held && detail::pour_tilt(ns, t) > t.tilt_min) {
      t.count += 1;
      if (t.count >= t.dwell_steps) t.achieved = true;
    } else {
      t.count = 0;
    }
  }
  return ns;
}

inline void install_success_tracker(WorldState& w, const SubTaskSpec& s) {
  if (s.success.kind != SuccessSpec::Kind::kPoured) return;
  PourTracker t;
  t.object_id = s.success.object_id;
  t.tool_offset = s.tool_frame.local_offset;
  t.target_object_id = s.success.target_object_id;
  t.target_affordance = s.success.target_affordance;
  t.tilt_min = s.success.tilt_min;
  t.dwell_steps = s.success.dwell_steps;
  w.pour_tracker = t;
}

inline bool check_success(const WorldState& w, const SubTaskSpec& s) {
  const SuccessSpec& sp = s.success;
  switch (sp.kind) {
    case SuccessSpec::Kind::kGrasped: {
      const ObjectState& o = w.object(sp.object_id);
      return o.held &&
             o.body_pose.translation.z - o.initial_pose.translation.z >= kLiftHeight;
    }
    case SuccessSpec::Kind::kPlaced: {
      const ObjectState& o = w.object(sp.object_id);
      if (o.held) return false;
      const Pose a = w.affordance_pose(sp.object_id, sp.object_affordance);
      const Pose g = w.affordance_pose(sp.target_object_id, sp.target_affordance);
      return (a.translation - g.translation).norm() <= sp.pos_tol &&
             rotation_distance(a.rotation, g.rotation) <= sp.rot_tol;
    }
    case SuccessSpec::Kind::kPoured:
      return w.pour_tracker && w.pour_tracker->object_id == sp.object_id &&
             w.pour_tracker->target_object_id == sp.target_object_id &&
             w.pour_tracker->achieved;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Scene sampling
// ---------------------------------------------------------------------------

// Annulus sector (polar about the robot base) plus a yaw range.
struct SectorRegion {
  double r_lo = 0.30, r_hi = 0.55;
  double ang_lo = 0.0, ang_hi = 1.0;
  double yaw_lo = -1.2, yaw_hi = 1.2;
};

struct ObjectTemplate {
  std::string id;
  double radius = 0.04;
  std::vector<AffordanceDef> affordances;
  SectorRegion ind;
  std::vector<SectorRegion> ood;
};

enum class Condition { kInD, kOoD };

inline const char* to_string(Condition c) { return c == Condition::kInD ? "IND" : "OOD"; }

struct SceneSampler {
  std::vector<ObjectTemplate> objects;
  Pose ee_home{Rotation3::identity(), {0.40, 0.00, 0.30}};
  double ee_jitter_pos = 0.03;  // uniform half-range, per axis
  double ee_jitter_yaw = 0.15;
  Workspace workspace;
};

// Rejection-samples a collision-free scene; reproducible from the seed.
inline WorldState sample_scene(uint64_t seed, const SceneSampler& sampler, Condition cond) {
  Rng rng(Rng::mix(seed, 0x5ce9eULL));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    WorldState w;
    w.workspace = sampler.workspace;
    bool ok = true;
    for (const auto& tmpl : sampler.objects) {
      const SectorRegion* region = &tmpl.ind;
      if (cond == Condition::kOoD) {
        if (tmpl.ood.empty()) throw SamplingExhausted("object " + tmpl.id + " has no OOD sectors");
        region = &tmpl.ood[rng.uniform_int(0, static_cast<int>(tmpl.ood.size()) - 1)];
      }
      const double r = rng.uniform(region->r_lo, region->r_hi);
      const double ang = rng.uniform(region->ang_lo, region->ang_hi);
      const double yaw = rng.uniform(region->yaw_lo, region->yaw_hi);
      ObjectState o;
      o.object_id = tmpl.id;
      o.radius = tmpl.radius;
      o.affordances = tmpl.affordances;
      o.body_pose = {Rotation3::about_z(yaw), {r * std::cos(ang), r * std::sin(ang), 0.0}};
      o.initial_pose = o.body_pose;
      for (const auto& [id, other] : w.objects) {
        if ((other.body_pose.translation - o.body_pose.translation).norm() <=
            other.radius + o.radius) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      w.objects.emplace(o.object_id, std::move(o));
    }
    if (!ok) continue;
    w.ee_pose.rotation = Rotation3::about_z(rng.uniform(-sampler.ee_jitter_yaw, sampler.ee_jitter_yaw)) *
                         sampler.ee_home.rotation;
    w.ee_pose.translation = sampler.ee_home.translation +
                            Vec3{rng.uniform(-sampler.ee_jitter_pos, sampler.ee_jitter_pos),
                                 rng.uniform(-sampler.ee_jitter_pos, sampler.ee_jitter_pos),
                                 rng.uniform(-sampler.ee_jitter_pos, sampler.ee_jitter_pos)};
    return w;
  }
  throw SamplingExhausted("no collision-free scene after 1000 attempts");
}

// ---------------------------------------------------------------------------
// Scripted experts
// ---------------------------------------------------------------------------

struct ExpertNoise {
  double sigma_pos = 0.003;  // m, per waypoint
  double sigma_rot = 0.02;   // rad, per waypoint
  bool enabled = true;
};

// Waypoint state machine expressed in the oriented affordance frame.
// Approaches along the funnel axis to a standoff, engages the affordance,
// then runs the task-specific tail (lift / carry-and-release / tilt-dwell).
class ScriptedExpert {
 public:
  static constexpr double kStandoff = 0.08;    // m along the funnel axis
  static constexpr double kAdvancePosTol = 0.006;
  static constexpr double kAdvanceRotTol = 0.08;

  ScriptedExpert(const SubTaskSpec& spec, const OrientedAffordanceFrame& frame,
                 const WorldState& w0, ExpertNoise noise, uint64_t noise_seed)
      : spec_(spec), frame_(frame), noise_(noise), rng_(Rng::mix(noise_seed, 0xe9e47ULL)) {
    const Pose afford = w0.affordance_pose(spec.target_object, spec.affordance_label);
    const Vec3 p = afford.translation;
    if (std::sqrt(p.x * p.x + p.y * p.y) > w0.workspace.r_max - 0.05 ||
        p.z > w0.workspace.z_max - 0.05)
      throw InfeasibleScene("target affordance out of workspace for " + spec.name);
    if (spec.expert_script_id != "grasp" && spec.expert_script_id != "place" &&
        spec.expert_script_id != "pour")
      throw ConfigError("unknown expert script: " + spec.expert_script_id);
    if (spec.expert_script_id != "grasp" && !w0.object(spec.tool_frame.object_id).held)
      throw InfeasibleScene(spec.name + ": tool object must be held at sub-task start");
    enter_phase(0, w0);
  }

  bool done() const { return done_; }

  // Next EE pose target and gripper command for the current world.
  std::pair<Pose, bool> act(const WorldState& w) {
    if (spec_.expert_script_id == "grasp") return act_grasp(w);
    if (spec_.expert_script_id == "place") return act_place(w);
    return act_pour(w);
  }

 private:
  Pose frame_pose(const WorldState& w) const {
    return current_frame_pose(frame_,
                              w.affordance_pose(spec_.target_object, spec_.affordance_label));
  }

  // EE pose that puts the held tool frame at the desired world pose.
  static Pose ee_for_tool(const WorldState& w, const ToolFrameDef& tf, const Pose& tool_target) {
    const Pose tool_in_ee = compose(inverse(w.ee_pose), w.tool_pose(tf));
    return compose(tool_target, inverse(tool_in_ee));
  }

  void enter_phase(int phase, const WorldState& w) {
    phase_ = phase;
    ticks_in_phase_ = 0;
    if (noise_.enabled) {
      pos_jitter_ = {rng_.normal(noise_.sigma_pos), rng_.normal(noise_.sigma_pos),
                     rng_.normal(noise_.sigma_pos)};
      Vec3 axis{rng_.normal(), rng_.normal(), rng_.normal()};
      const double n = axis.norm();
      axis = n > 1e-9 ? axis * (1.0 / n) : Vec3{0, 0, 1};
      rot_jitter_ = Rotation3::from_axis_angle(axis, rng_.normal(noise_.sigma_rot));
    } else {
      pos_jitter_ = {0, 0, 0};
      rot_jitter_ = Rotation3::identity();
    }
    entry_ee_ = w.ee_pose;
  }

  bool reached(const WorldState& w, const Pose& target) const {
    return (w.ee_pose.translation - target.translation).norm() <= kAdvancePosTol &&
           rotation_distance(w.ee_pose.rotation, target.rotation) <= kAdvanceRotTol;
  }

  Pose jittered(Pose p) const {
    p.translation = p.translation + pos_jitter_;
    p.rotation = rot_jitter_ * p.rotation;
    return p;
  }

  std::pair<Pose, bool> act_grasp(const WorldState& w) {
    const Pose afford = w.affordance_pose(spec_.target_object, spec_.affordance_label);
    ++ticks_in_phase_;
    switch (phase_) {
      case 0: {  // approach standoff on the funnel axis
        const Pose target = jittered({afford.rotation, frame_pose(w).apply({kStandoff, 0, 0})});
        if (reached(w, target)) enter_phase(1, w);
        return {target, false};
      }
      case 1: {  // engage the affordance
        const Pose target = jittered({afford.rotation, afford.translation});
        if (reached(w, target)) enter_phase(2, w);
        return {target, false};
      }
      case 2: {  // close; retry engagement if the grasp misses
        if (w.object(spec_.target_object).held) {
          enter_phase(3, w);
          return {w.ee_pose, true};
        }
        if (ticks_in_phase_ > 3) enter_phase(1, w);
        return {{afford.rotation, afford.translation}, true};
      }
      case 3: {  // rotate the held object to canonical yaw
        const ObjectState& o = w.object(spec_.target_object);
        const double yaw = detail::yaw_of(o.body_pose.rotation);
        if (std::abs(yaw) < 0.04 || !o.held) {
          enter_phase(4, w);
          lift_target_ = {w.ee_pose.rotation,
                          w.ee_pose.translation + Vec3{0, 0, 0.12} + pos_jitter_};
          return {lift_target_, true};
        }
        const Pose body_target{Rotation3::about_z(-yaw) * o.body_pose.rotation,
                               o.body_pose.translation};
        return {compose(body_target, inverse(o.grasp_offset)), true};
      }
      case 4: {  // lift
        if (reached(w, lift_target_)) enter_phase(5, w);
        return {lift_target_, true};
      }
      default: {  // settle
        if (ticks_in_phase_ >= kSettleTicks) done_ = true;
        return {w.ee_pose, true};
      }
    }
  }

  std::pair<Pose, bool> act_place(const WorldState& w) {
    const Pose goal = w.affordance_pose(spec_.target_object, spec_.affordance_label);
    ++ticks_in_phase_;
    const bool holding = w.object(spec_.tool_frame.object_id).held;
    switch (phase_) {
      case 0: {  // carry to standoff, aligning the tool to the goal rotation
        const Pose tool_target =
            jittered({goal.rotation, frame_pose(w).apply({kStandoff, 0, 0})});
        const Pose target = ee_for_tool(w, spec_.tool_frame, tool_target);
        if (reached(w, target)) enter_phase(1, w);
        return {target, true};
      }
      case 1: {  // land the tool on the goal affordance
        const Pose tool_target = jittered({goal.rotation, frame_pose(w).apply({0.004, 0, 0})});
        const Pose target = ee_for_tool(w, spec_.tool_frame, tool_target);
        if (reached(w, target)) enter_phase(2, w);
        return {target, true};
      }
      case 2: {  // release
        if (ticks_in_phase_ >= 2 || !holding) {
          enter_phase(3, w);
          const Vec3 back = frame_.anchored_rotation.col(0) * 0.06 + Vec3{0, 0, 0.05};
          retreat_target_ = {w.ee_pose.rotation, w.ee_pose.translation + back + pos_jitter_};
        }
        return {w.ee_pose, false};
      }
      case 3: {  // retreat
        if (reached(w, retreat_target_)) enter_phase(4, w);
        return {retreat_target_, false};
      }
      default: {
        if (ticks_in_phase_ >= kSettleTicks) done_ = true;
        return {w.ee_pose, false};
      }
    }
  }

  std::pair<Pose, bool> act_pour(const WorldState& w) {
    const Pose goal = w.affordance_pose(spec_.target_object, spec_.affordance_label);
    ++ticks_in_phase_;
    switch (phase_) {
      case 0: {  // approach standoff with the tool
        const Pose tool_now = w.tool_pose(spec_.tool_frame);
        const Pose tool_target =
            jittered({tool_now.rotation, frame_pose(w).apply({kStandoff, 0, 0})});
        const Pose target = ee_for_tool(w, spec_.tool_frame, tool_target);
        if (reached(w, target)) enter_phase(1, w);
        return {target, true};
      }
      case 1: {  // hover the tool above the goal
        const Pose tool_now = w.tool_pose(spec_.tool_frame);
        const Pose tool_target =
            jittered({tool_now.rotation, goal.translation + Vec3{0, 0, kHover}});
        const Pose target = ee_for_tool(w, spec_.tool_frame, tool_target);
        if (reached(w, target)) {
          upright_tool_ = w.tool_pose(spec_.tool_frame);
          const Vec3 zt = goal.rotation.col(2);
          Vec3 axis = zt.cross({1, 0, 0});
          if (axis.norm() < 1e-6) axis = zt.cross({0, 1, 0});
          tilt_axis_ = axis.normalized();
          enter_phase(2, w);
        }
        return {target, true};
      }
      case 2: {  // tilt until well past the dwell threshold
        const Rotation3 delta =
            Rotation3::from_axis_angle(tilt_axis_, spec_.success.tilt_min + 0.35);
        const Pose tool_target{delta * upright_tool_.rotation, upright_tool_.translation};
        const Pose target = ee_for_tool(w, spec_.tool_frame, tool_target);
        if (reached(w, target)) enter_phase(3, w);
        return {target, true};
      }
      case 3: {  // dwell
        if (ticks_in_phase_ >= spec_.success.dwell_steps + 4) enter_phase(4, w);
        return {w.ee_pose, true};
      }
      case 4: {  // untilt back to the hover pose
        const Pose target = ee_for_tool(w, spec_.tool_frame, upright_tool_);
        if (reached(w, target)) enter_phase(5, w);
        return {target, true};
      }
      default: {
        if (ticks_in_phase_ >= kSettleTicks) done_ = true;
        return {w.ee_pose, true};
      }
    }
  }

  static constexpr int kSettleTicks = 8;
  static constexpr double kHover = 0.06;

  SubTaskSpec spec_;
  OrientedAffordanceFrame frame_;
  ExpertNoise noise_;
  Rng rng_;
  int phase_ = 0;
  int ticks_in_phase_ = 0;
  bool done_ = false;
  Vec3 pos_jitter_{0, 0, 0};
  Rotation3 rot_jitter_;
  Pose entry_ee_;
  Pose lift_target_;
  Pose retreat_target_;
  Pose upright_tool_;
  Vec3 tilt_axis_{0, 1, 0};
};

// Initialises the frame for a sub-task from the current world.
inline OrientedAffordanceFrame init_subtask_frame(const WorldState& w, const SubTaskSpec& s) {
  const Pose afford = w.affordance_pose(s.target_object, s.affordance_label);
  const Pose tool = w.tool_pose(s.tool_frame);
  const AffordanceDef* def = w.object(s.target_object).find_affordance(s.affordance_label);
  try {
    return initialise_oriented_frame(afford, tool, def ? *def : AffordanceDef{});
  } catch (const DegenerateDirection& e) {
    throw FrameInitFailure(e.what());
  }
}

// Runs the scripted expert to completion; used to set up sub-task premises
// and as the data-collection driver.
inline WorldState run_expert(WorldState w, const SubTaskSpec& spec, ExpertNoise noise,
                             uint64_t noise_seed, int max_ticks = 400) {
  install_success_tracker(w, spec);
  ScriptedExpert expert(spec, init_subtask_frame(w, spec), w, noise, noise_seed);
  for (int t = 0; t < max_ticks && !expert.done(); ++t) {
    const auto [target, grip] = expert.act(w);
    w = step(w, target, grip);
  }
  return w;
}

}  // namespace oaf
