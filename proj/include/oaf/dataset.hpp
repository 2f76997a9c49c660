#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "oaf/errors.hpp"
#include "oaf/frames.hpp"
#include "oaf/geometry.hpp"
#include "oaf/simworld.hpp"

namespace oaf {

inline constexpr int kDemoFormatVersion = 1;

// World snapshot of one object at one tick.
struct ObjectSnapshot {
  Pose pose;
  bool held = false;
};

struct DemoRecord {
  int t = 0;
  std::map<std::string, ObjectSnapshot> objects;
  Pose ee;
  bool grip = false;
  double progress = 0.0;             // linear ramp label, see label_progress
  std::vector<double> state;         // encoded at record time (recorded_mode)
  std::vector<double> action;        // executed step, 11 slots
};

// One recorded trajectory. Snapshots carry enough world state to re-encode
// under any reference frame; the affordance/tool definitions travel with the
// demo so files are self-contained.
struct Demonstration {
  std::string sub_task;
  AffordanceDef affordance;
  ToolFrameDef tool;
  Rotation3 anchored_rotation;  // frame-init metadata
  Vec3 initial_tool_origin;
  uint64_t seed = 0;
  FrameMode recorded_mode = FrameMode::kOAff;
  std::vector<DemoRecord> records;

  Pose affordance_pose(size_t i) const {
    return compose(records[i].objects.at(affordance.object_id).pose, affordance.local_offset);
  }

  Pose tool_pose(size_t i) const {
    if (tool.source == ToolFrameDef::Source::kEndEffector)
      return compose(records[i].ee, tool.local_offset);
    return compose(records[i].objects.at(tool.object_id).pose, tool.local_offset);
  }
};

// Assigns the linear progress ramp: record i of n gets i/(n-1).
inline Demonstration label_progress(Demonstration demo) {
  const size_t n = demo.records.size();
  if (n < 2) throw TooShort("label_progress: need at least 2 records, got " + std::to_string(n));
  for (size_t i = 0; i < n; ++i)
    demo.records[i].progress = static_cast<double>(i) / static_cast<double>(n - 1);
  return demo;
}

namespace detail {

// Anchor rotation used when re-encoding a demo under a frame mode. The
// oriented mode recomputes it from the first snapshot so stored metadata
// never leaks into the ablation comparison.
inline Rotation3 demo_anchor(const Demonstration& d, FrameMode mode) {
  if (mode != FrameMode::kOAff) return Rotation3::identity();
  const auto f = initialise_oriented_frame(d.affordance_pose(0), d.tool_pose(0));
  return f.anchored_rotation;
}

inline Pose demo_frame_pose(const Demonstration& d, size_t i, FrameMode mode,
                            const Rotation3& anchor) {
  switch (mode) {
    case FrameMode::kOAff: return {anchor, d.affordance_pose(i).translation};
    case FrameMode::kAffordance: return d.affordance_pose(i);
    case FrameMode::kEndEffector: return d.records[i].ee;
    case FrameMode::kGlobal: return Pose::identity();
  }
  return Pose::identity();
}

inline std::vector<double> demo_state(const Demonstration& d, size_t i, FrameMode mode,
                                      const Rotation3& anchor) {
  const Pose frame = demo_frame_pose(d, i, mode, anchor);
  const Pose tool = d.tool_pose(i);
  const Pose afford = d.affordance_pose(i);
  if (mode == FrameMode::kOAff) {
    const auto flat = encode_state(frame, tool, d.records[i].grip, afford.rotation).flatten();
    return {flat.begin(), flat.end()};
  }
  return encode_state_baseline(mode, frame, tool, d.records[i].grip, afford);
}

}  // namespace detail

// Per-dimension affine map onto [-1, 1]; the half-range is floored so that
// constant dimensions map to zero instead of blowing up.
struct Normalization {
  std::vector<double> state_mid, state_half, target_mid, target_half;

  static constexpr double kHalfFloor = 1e-6;

  static void fit(const std::vector<double>& data, int n, int dim, std::vector<double>& mid,
                  std::vector<double>& half) {
    mid.assign(dim, 0.0);
    half.assign(dim, kHalfFloor);
    if (n == 0) return;
    std::vector<double> lo(dim, 1e300), hi(dim, -1e300);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < dim; ++j) {
        const double v = data[static_cast<size_t>(i) * dim + j];
        lo[j] = std::min(lo[j], v);
        hi[j] = std::max(hi[j], v);
      }
    for (int j = 0; j < dim; ++j) {
      mid[j] = 0.5 * (lo[j] + hi[j]);
      half[j] = std::max(0.5 * (hi[j] - lo[j]), kHalfFloor);
    }
  }

  std::vector<double> normalize_state(const std::vector<double>& v) const {
    std::vector<double> out(v.size());
    for (size_t j = 0; j < v.size(); ++j) out[j] = (v[j] - state_mid[j]) / state_half[j];
    return out;
  }

  std::vector<double> normalize_target(const std::vector<double>& v) const {
    std::vector<double> out(v.size());
    for (size_t j = 0; j < v.size(); ++j) out[j] = (v[j] - target_mid[j]) / target_half[j];
    return out;
  }

  std::vector<double> denormalize_target(const std::vector<double>& v) const {
    std::vector<double> out(v.size());
    for (size_t j = 0; j < v.size(); ++j) out[j] = v[j] * target_half[j] + target_mid[j];
    return out;
  }
};

// Supervised pairs: state vector -> flattened 16-step action chunk.
struct TrainingSet {
  int n = 0;
  int state_dim = 0;
  FrameMode mode = FrameMode::kOAff;
  std::vector<double> states;   // n x state_dim, row-major, unnormalized
  std::vector<double> targets;  // n x kChunkFlat
  Normalization norm;

  std::vector<double> state_row(int i) const {
    return {states.begin() + static_cast<size_t>(i) * state_dim,
            states.begin() + static_cast<size_t>(i + 1) * state_dim};
  }
  std::vector<double> target_row(int i) const {
    return {targets.begin() + static_cast<size_t>(i) * kChunkFlat,
            targets.begin() + static_cast<size_t>(i + 1) * kChunkFlat};
  }
};

// Re-encodes demonstrations under the requested reference frame and builds
// chunked action targets. Chunks past the trajectory end repeat the final
// step, which also saturates the progress target at 1.
inline TrainingSet build_training_set(const std::vector<Demonstration>& demos, FrameMode mode,
                                      int horizon = kChunkLen) {
  if (demos.empty()) throw Error("build_training_set: no demonstrations");
  if (horizon != kChunkLen)
    throw ShapeMismatch("build_training_set: horizon must equal the chunk length");
  TrainingSet ts;
  ts.mode = mode;
  ts.state_dim = state_dim(mode);
  for (const auto& d : demos) {
    const Rotation3 anchor = detail::demo_anchor(d, mode);
    const size_t n = d.records.size();
    for (size_t i = 0; i < n; ++i) {
      const auto s = detail::demo_state(d, i, mode, anchor);
      ts.states.insert(ts.states.end(), s.begin(), s.end());
      const Pose frame = detail::demo_frame_pose(d, i, mode, anchor);
      const Pose frame_inv = inverse(frame);
      for (int tau = 1; tau <= horizon; ++tau) {
        const size_t j = std::min(i + static_cast<size_t>(tau), n - 1);
        ActionStep step;
        step.pose = compose(frame_inv, d.records[j].ee);
        step.gripper = d.records[j].grip ? 1.0 : 0.0;
        step.progress = d.records[j].progress;
        const auto flat = step.flatten();
        ts.targets.insert(ts.targets.end(), flat.begin(), flat.end());
      }
      ++ts.n;
    }
  }
  Normalization::fit(ts.states, ts.n, ts.state_dim, ts.norm.state_mid, ts.norm.state_half);
  Normalization::fit(ts.targets, ts.n, kChunkFlat, ts.norm.target_mid, ts.norm.target_half);
  return ts;
}

// Runs the scripted expert on the given world and records the trajectory.
// Records hold the snapshot before each action plus the final state; actions
// store the realized next EE pose in the recording frame.
inline Demonstration record_expert_demo(WorldState w, const SubTaskSpec& spec,
                                        ExpertNoise noise, uint64_t seed, int max_ticks = 400) {
  install_success_tracker(w, spec);
  const OrientedAffordanceFrame frame = init_subtask_frame(w, spec);
  ScriptedExpert expert(spec, frame, w, noise, seed);

  Demonstration demo;
  demo.sub_task = spec.name;
  const AffordanceDef* def = w.object(spec.target_object).find_affordance(spec.affordance_label);
  demo.affordance = def ? *def : AffordanceDef{};
  demo.tool = spec.tool_frame;
  demo.anchored_rotation = frame.anchored_rotation;
  demo.initial_tool_origin = frame.initial_tool_origin;
  demo.seed = seed;
  demo.recorded_mode = FrameMode::kOAff;

  std::vector<WorldState> snaps;
  snaps.push_back(w);
  for (int t = 0; t < max_ticks && !expert.done(); ++t) {
    const auto [target, grip] = expert.act(w);
    w = step(w, target, grip);
    snaps.push_back(w);
  }

  const size_t n = snaps.size();
  demo.records.resize(n);
  for (size_t i = 0; i < n; ++i) {
    DemoRecord& r = demo.records[i];
    r.t = static_cast<int>(i);
    for (const auto& [id, o] : snaps[i].objects) r.objects[id] = {o.body_pose, o.held};
    r.ee = snaps[i].ee_pose;
    r.grip = snaps[i].gripper_closed;
  }
  demo = label_progress(std::move(demo));

  // Effective executed action per record: the next achieved EE pose in the
  // recording frame (terminal record holds its own pose).
  for (size_t i = 0; i < n; ++i) {
    const size_t j = std::min(i + 1, n - 1);
    const Pose frame_i = detail::demo_frame_pose(demo, i, demo.recorded_mode,
                                                 demo.anchored_rotation);
    ActionStep step;
    step.pose = compose(inverse(frame_i), demo.records[j].ee);
    step.gripper = demo.records[j].grip ? 1.0 : 0.0;
    step.progress = demo.records[j].progress;
    const auto flat = step.flatten();
    demo.records[i].action.assign(flat.begin(), flat.end());
    demo.records[i].state =
        detail::demo_state(demo, i, demo.recorded_mode, demo.anchored_rotation);
  }
  return demo;
}

// ---------------------------------------------------------------------------
// Persistence: line-delimited JSON, one header line per demonstration
// followed by its records.
// ---------------------------------------------------------------------------

namespace detail {

using json = nlohmann::json;

inline json pose_to_json(const Pose& p) {
  const PoseFlat f = pose_to_flat(p);
  return json(std::vector<double>(f.begin(), f.end()));
}

inline Pose pose_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 12) throw Error("pose array must have 12 entries");
  PoseFlat f;
  std::copy(v.begin(), v.end(), f.begin());
  return pose_from_flat(f);
}

inline json tool_to_json(const ToolFrameDef& t) {
  return {{"source", t.source == ToolFrameDef::Source::kEndEffector ? "end_effector"
                                                                    : "held_object"},
          {"object", t.object_id},
          {"offset", pose_to_json(t.local_offset)}};
}

inline ToolFrameDef tool_from_json(const json& j) {
  ToolFrameDef t;
  t.source = j.at("source").get<std::string>() == "end_effector"
                 ? ToolFrameDef::Source::kEndEffector
                 : ToolFrameDef::Source::kHeldObject;
  t.object_id = j.at("object").get<std::string>();
  t.local_offset = pose_from_json(j.at("offset"));
  return t;
}

}  // namespace detail

inline void save_demos(const std::string& path, const std::vector<Demonstration>& demos) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  using detail::json;
  for (const auto& d : demos) {
    json header;
    header["format_version"] = kDemoFormatVersion;
    json task;
    task["sub_task"] = d.sub_task;
    task["affordance"] = {{"object", d.affordance.object_id},
                          {"label", d.affordance.label},
                          {"offset", detail::pose_to_json(d.affordance.local_offset)}};
    task["tool"] = detail::tool_to_json(d.tool);
    task["anchored_rotation"] =
        std::vector<double>(d.anchored_rotation.m.begin(), d.anchored_rotation.m.end());
    task["initial_tool_origin"] = {d.initial_tool_origin.x, d.initial_tool_origin.y,
                                   d.initial_tool_origin.z};
    task["seed"] = d.seed;
    task["n_records"] = d.records.size();
    header["task"] = task;
    out << header.dump() << "\n";
    for (const auto& r : d.records) {
      json rec;
      rec["t"] = r.t;
      json objs;
      for (const auto& [id, o] : r.objects)
        objs[id] = {{"pose", detail::pose_to_json(o.pose)}, {"held", o.held}};
      rec["objects"] = objs;
      rec["ee"] = detail::pose_to_json(r.ee);
      rec["grip"] = r.grip ? 1 : 0;
      rec["frame_mode"] = to_string(d.recorded_mode);
      rec["state"] = r.state;
      rec["action"] = r.action;
      rec["progress"] = r.progress;
      out << rec.dump() << "\n";
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

inline std::vector<Demonstration> load_demos(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  using detail::json;
  std::vector<Demonstration> demos;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json header;
    try {
      header = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad JSON: ") + e.what(), line_no);
    }
    if (!header.contains("format_version"))
      throw ParseError("expected a demo header line", line_no);
    const int version = header["format_version"].get<int>();
    if (version != kDemoFormatVersion)
      throw FormatVersionMismatch("unsupported demo format version " +
                                  std::to_string(version));
    Demonstration d;
    size_t n_records = 0;
    try {
      const json& task = header.at("task");
      d.sub_task = task.at("sub_task").get<std::string>();
      const json& aff = task.at("affordance");
      d.affordance.object_id = aff.at("object").get<std::string>();
      d.affordance.label = aff.at("label").get<std::string>();
      d.affordance.local_offset = detail::pose_from_json(aff.at("offset"));
      d.tool = detail::tool_from_json(task.at("tool"));
      const auto rot = task.at("anchored_rotation").get<std::vector<double>>();
      if (rot.size() != 9) throw Error("anchored_rotation must have 9 entries");
      std::copy(rot.begin(), rot.end(), d.anchored_rotation.m.begin());
      const auto origin = task.at("initial_tool_origin").get<std::vector<double>>();
      d.initial_tool_origin = {origin.at(0), origin.at(1), origin.at(2)};
      d.seed = task.at("seed").get<uint64_t>();
      n_records = task.at("n_records").get<size_t>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad header: ") + e.what(), line_no);
    }
    for (size_t i = 0; i < n_records; ++i) {
      if (!std::getline(in, line))
        throw ParseError("truncated file: expected " + std::to_string(n_records) +
                             " records for demo " + d.sub_task,
                         line_no + 1);
      ++line_no;
      try {
        const json rec = json::parse(line);
        DemoRecord r;
        r.t = rec.at("t").get<int>();
        for (const auto& [id, o] : rec.at("objects").items())
          r.objects[id] = {detail::pose_from_json(o.at("pose")), o.at("held").get<bool>()};
        r.ee = detail::pose_from_json(rec.at("ee"));
        r.grip = rec.at("grip").get<int>() != 0;
        d.recorded_mode = frame_mode_from_string(rec.at("frame_mode").get<std::string>());
        r.state = rec.at("state").get<std::vector<double>>();
        r.action = rec.at("action").get<std::vector<double>>();
        r.progress = rec.at("progress").get<double>();
        d.records.push_back(std::move(r));
      } catch (const json::exception& e) {
        throw ParseError(std::string("bad record: ") + e.what(), line_no);
      }
    }
    demos.push_back(std::move(d));
  }
  return demos;
}

}  // namespace oaf
