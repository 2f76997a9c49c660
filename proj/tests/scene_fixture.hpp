#pragma once

#include <vector>

#include "oaf/simworld.hpp"

namespace oaf::testutil {

// Desk-scale serve task: grasp the teapot by its handle, pour into the cup,
// set the teapot down on the trivet.

inline SectorRegion ind_sector() { return {0.30, 0.55, 0.17, 1.22, -1.2, 1.2}; }

inline std::vector<SectorRegion> ood_sectors() {
  return {{0.30, 0.55, 1.75, 2.79, -1.2, 1.2},
          {0.30, 0.55, 3.32, 4.36, -1.2, 1.2},
          {0.30, 0.55, 4.89, 5.93, -1.2, 1.2}};
}

inline SceneSampler serve_sampler() {
  SceneSampler s;
  ObjectTemplate teapot;
  teapot.id = "teapot";
  teapot.radius = 0.055;
  teapot.affordances = {
      {"teapot", {Rotation3::identity(), {-0.06, 0, 0.05}}, "handle"},
      {"teapot", {Rotation3::identity(), {0.07, 0, 0.09}}, "spout"},
      {"teapot", {Rotation3::identity(), {0, 0, 0}}, "base"},
  };
  teapot.ind = ind_sector();
  teapot.ood = ood_sectors();

  ObjectTemplate cup;
  cup.id = "cup";
  cup.radius = 0.04;
  cup.affordances = {{"cup", {Rotation3::identity(), {0, 0, 0.05}}, "center"}};
  cup.ind = ind_sector();
  cup.ood = ood_sectors();

  ObjectTemplate trivet;
  trivet.id = "trivet";
  trivet.radius = 0.05;
  trivet.affordances = {{"trivet", {Rotation3::identity(), {0, 0, 0.01}}, "center"}};
  trivet.ind = ind_sector();
  trivet.ood = ood_sectors();

  s.objects = {teapot, cup, trivet};
  s.ee_home = {Rotation3::identity(), {0.42, 0.02, 0.28}};
  s.ee_jitter_pos = 0.03;
  s.ee_jitter_yaw = 0.15;
  return s;
}

inline SubTaskSpec grasp_subtask() {
  SubTaskSpec s;
  s.name = "grasp_teapot";
  s.target_object = "teapot";
  s.affordance_label = "handle";
  s.tool_frame = {ToolFrameDef::Source::kEndEffector, "", Pose::identity()};
  s.expert_script_id = "grasp";
  s.success.kind = SuccessSpec::Kind::kGrasped;
  s.success.object_id = "teapot";
  return s;
}

inline SubTaskSpec pour_subtask() {
  SubTaskSpec s;
  s.name = "pour_cup";
  s.target_object = "cup";
  s.affordance_label = "center";
  s.tool_frame = {ToolFrameDef::Source::kHeldObject, "teapot",
                  {Rotation3::identity(), {0.07, 0, 0.09}}};
  s.expert_script_id = "pour";
  s.success.kind = SuccessSpec::Kind::kPoured;
  s.success.object_id = "teapot";
  s.success.target_object_id = "cup";
  s.success.target_affordance = "center";
  s.success.tilt_min = 1.0;
  s.success.dwell_steps = 10;
  return s;
}

inline SubTaskSpec place_subtask() {
  SubTaskSpec s;
  s.name = "place_teapot";
  s.target_object = "trivet";
  s.affordance_label = "center";
  s.tool_frame = {ToolFrameDef::Source::kHeldObject, "teapot", Pose::identity()};
  s.expert_script_id = "place";
  s.success.kind = SuccessSpec::Kind::kPlaced;
  s.success.object_id = "teapot";
  s.success.object_affordance = "base";
  s.success.target_object_id = "trivet";
  s.success.target_affordance = "center";
  s.success.pos_tol = 0.02;
  s.success.rot_tol = 0.4;
  return s;
}

inline std::vector<SubTaskSpec> serve_subtasks() {
  return {grasp_subtask(), pour_subtask(), place_subtask()};
}

}  // namespace oaf::testutil
