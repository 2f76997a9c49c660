#pragma once

#include <array>
#include <string>
#include <vector>

#include "oaf/errors.hpp"
#include "oaf/geometry.hpp"

namespace oaf {

inline constexpr int kChunkLen = 16;   // action steps per predicted chunk
inline constexpr int kActionDim = 11;  // per-step action slots
inline constexpr int kChunkFlat = kChunkLen * kActionDim;  // 176
inline constexpr int kStateDim = 16;         // oriented-affordance-frame state
inline constexpr int kBaselineStateDim = 19; // baselines carry the object position too

// Reference frame the policy's state/action vectors are expressed in.
enum class FrameMode {
  kOAff,        // oriented affordance frame (anchored rotation, live origin)
  kAffordance,  // live affordance frame, not oriented
  kEndEffector, // robot end-effector frame
  kGlobal,      // world frame
};

inline const char* to_string(FrameMode m) {
  switch (m) {
    case FrameMode::kOAff: return "o_aff";
    case FrameMode::kAffordance: return "affordance_non_oriented";
    case FrameMode::kEndEffector: return "end_effector";
    case FrameMode::kGlobal: return "global";
  }
  return "?";
}

inline FrameMode frame_mode_from_string(const std::string& s) {
  if (s == "o_aff") return FrameMode::kOAff;
  if (s == "affordance_non_oriented") return FrameMode::kAffordance;
  if (s == "end_effector") return FrameMode::kEndEffector;
  if (s == "global") return FrameMode::kGlobal;
  throw ConfigError("unknown frame mode: " + s);
}

inline int state_dim(FrameMode m) {
  return m == FrameMode::kOAff ? kStateDim : kBaselineStateDim;
}

// A localized, task-dependent frame on an object (handle, spout, base, ...).
struct AffordanceDef {
  std::string object_id;
  Pose local_offset;  // affordance frame in the object body frame
  std::string label;
};

// The frame on the acting entity: the end effector itself, or a functional
// point on a held object.
struct ToolFrameDef {
  enum class Source { kEndEffector, kHeldObject };
  Source source = Source::kEndEffector;
  std::string object_id;  // used when source == kHeldObject
  Pose local_offset;
};

// Affordance frame re-oriented at task start so its x-axis points at the
// tool origin. The rotation never changes afterwards; the origin tracks the
// affordance.
struct OrientedAffordanceFrame {
  Rotation3 anchored_rotation;
  AffordanceDef affordance;
  Vec3 initial_tool_origin;
};

// Anchors a frame on the affordance, rotated so that anchored_rotation * e_x
// is the unit vector from the affordance origin to the tool origin. The
// funnel vector fed to the aligner is the affordance frame's own x-axis, so
// the construction holds for arbitrary affordance orientations.
inline OrientedAffordanceFrame initialise_oriented_frame(const Pose& t_afford_w,
                                                         const Pose& t_tool_w,
                                                         const AffordanceDef& affordance = {}) {
  const Vec3 v_funnel = t_afford_w.rotation.col(0);
  const Rotation3 r_align =
      align_rotation(t_tool_w.translation, t_afford_w.translation, v_funnel);
  OrientedAffordanceFrame f;
  f.anchored_rotation = r_align * t_afford_w.rotation;
  f.affordance = affordance;
  f.initial_tool_origin = t_tool_w.translation;
  return f;
}

// Live origin, frozen rotation.
inline Pose current_frame_pose(const OrientedAffordanceFrame& f, const Pose& t_afford_w_now) {
  return {f.anchored_rotation, t_afford_w_now.translation};
}

// 16-slot observation: tool pose in the reference frame, gripper bit, and
// the target object's rotation relative to the frame.
struct PolicyState {
  Vec3 tool_position;
  Rot6d tool_rotation{1, 0, 0, 0, 1, 0};
  double gripper = 0.0;
  Rot6d object_rotation{1, 0, 0, 0, 1, 0};

  std::array<double, kStateDim> flatten() const {
    return {tool_position.x, tool_position.y, tool_position.z,
            tool_rotation[0], tool_rotation[1], tool_rotation[2],
            tool_rotation[3], tool_rotation[4], tool_rotation[5],
            gripper,
            object_rotation[0], object_rotation[1], object_rotation[2],
            object_rotation[3], object_rotation[4], object_rotation[5]};
  }
};

inline PolicyState encode_state(const Pose& frame_pose_w, const Pose& t_tool_w,
                                bool gripper_closed, const Rotation3& r_afford_w) {
  const Pose rel = compose(inverse(frame_pose_w), t_tool_w);
  PolicyState s;
  s.tool_position = rel.translation;
  s.tool_rotation = rot_to_6d(rel.rotation);
  s.gripper = gripper_closed ? 1.0 : 0.0;
  s.object_rotation = rot_to_6d(frame_pose_w.rotation.transpose() * r_afford_w);
  return s;
}

// Baseline observation: same 16-slot layout expressed in the chosen frame,
// plus the target object's 3D position in that frame (19 slots total).
inline std::vector<double> encode_state_baseline(FrameMode mode, const Pose& frame_pose_w,
                                                 const Pose& t_tool_w, bool gripper_closed,
                                                 const Pose& t_afford_w) {
  const PolicyState base = encode_state(frame_pose_w, t_tool_w, gripper_closed,
                                        t_afford_w.rotation);
  const Vec3 obj_pos = inverse(frame_pose_w).apply(t_afford_w.translation);
  const auto flat = base.flatten();
  std::vector<double> v(flat.begin(), flat.end());
  v.push_back(obj_pos.x);
  v.push_back(obj_pos.y);
  v.push_back(obj_pos.z);
  (void)mode;
  return v;
}

// One desired end-effector pose in the reference frame plus gripper and
// self-progress slots.
struct ActionStep {
  Pose pose;               // EE pose in the reference frame
  double gripper = 0.0;    // trained in [0,1], thresholded at 0.5 on execution
  double progress = 0.0;   // in [0,1]

  std::array<double, kActionDim> flatten() const {
    const Rot6d r = rot_to_6d(pose.rotation);
    return {pose.translation.x, pose.translation.y, pose.translation.z,
            r[0], r[1], r[2], r[3], r[4], r[5], gripper, progress};
  }
};

struct ActionChunk {
  std::array<ActionStep, kChunkLen> steps;

  std::array<double, kChunkFlat> flatten() const {
    std::array<double, kChunkFlat> out{};
    for (int i = 0; i < kChunkLen; ++i) {
      const auto s = steps[i].flatten();
      for (int j = 0; j < kActionDim; ++j) out[i * kActionDim + j] = s[j];
    }
    return out;
  }
};

inline ActionStep decode_action_step(const double* v) {
  ActionStep s;
  s.pose.translation = {v[0], v[1], v[2]};
  s.pose.rotation = rot_from_6d({v[3], v[4], v[5], v[6], v[7], v[8]});
  s.gripper = v[9];
  s.progress = v[10] < 0.0 ? 0.0 : (v[10] > 1.0 ? 1.0 : v[10]);
  return s;
}

inline ActionChunk encode_action_chunk(const std::vector<Pose>& ee_poses_frame,
                                       const std::vector<bool>& grippers,
                                       const std::vector<double>& progresses) {
  if (ee_poses_frame.size() != kChunkLen || grippers.size() != kChunkLen ||
      progresses.size() != kChunkLen)
    throw ChunkLengthMismatch("encode_action_chunk: expected exactly 16 steps");
  ActionChunk c;
  for (int i = 0; i < kChunkLen; ++i) {
    c.steps[i].pose = ee_poses_frame[i];
    c.steps[i].gripper = grippers[i] ? 1.0 : 0.0;
    c.steps[i].progress = progresses[i];
  }
  return c;
}

inline ActionChunk decode_action_chunk(const std::vector<double>& flat) {
  if (flat.size() != kChunkFlat)
    throw ChunkLengthMismatch("decode_action_chunk: expected 176 values, got " +
                              std::to_string(flat.size()));
  ActionChunk c;
  for (int i = 0; i < kChunkLen; ++i) c.steps[i] = decode_action_step(&flat[i * kActionDim]);
  return c;
}

// Maps a frame-relative action step to a world EE target and a binary
// gripper command.
inline std::pair<Pose, bool> action_to_world(const ActionStep& step, const Pose& frame_pose_w) {
  return {compose(frame_pose_w, step.pose), step.gripper >= 0.5};
}

}  // namespace oaf
