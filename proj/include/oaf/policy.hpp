#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oaf/ddpm.hpp"
#include "oaf/mlp.hpp"

namespace oaf {

inline constexpr int kPolicyFormatVersion = 1;

enum class Learner { kMlp, kDdpm };

inline const char* to_string(Learner l) { return l == Learner::kMlp ? "mlp" : "ddpm"; }

inline Learner learner_from_string(const std::string& s) {
  if (s == "mlp") return Learner::kMlp;
  if (s == "ddpm") return Learner::kDdpm;
  throw ConfigError("unknown learner: " + s);
}

namespace detail {

// Decoder that always yields a valid chunk: degenerate rotation blocks fall
// back to the identity, so arbitrary raw net output still decodes.
inline ActionChunk decode_chunk_lenient(const std::vector<double>& flat) {
  if (flat.size() != kChunkFlat)
    throw ChunkLengthMismatch("decode_chunk_lenient: expected 176 values");
  ActionChunk c;
  for (int i = 0; i < kChunkLen; ++i) {
    const double* v = &flat[static_cast<size_t>(i) * kActionDim];
    ActionStep& s = c.steps[i];
    s.pose.translation = {v[0], v[1], v[2]};
    try {
      s.pose.rotation = rot_from_6d({v[3], v[4], v[5], v[6], v[7], v[8]});
    } catch (const DegenerateInput&) {
      s.pose.rotation = Rotation3::identity();
    }
    s.gripper = std::clamp(v[9], 0.0, 1.0);
    s.progress = std::clamp(v[10], 0.0, 1.0);
  }
  return c;
}

}  // namespace detail

// A trained behaviour-cloning policy: the learner head plus everything needed
// to run it (normalization statistics and the reference frame it was trained
// in).
struct Policy {
  Learner learner = Learner::kMlp;
  FrameMode frame_mode = FrameMode::kOAff;
  MlpNet net;
  DdpmSchedule schedule;  // used by the ddpm learner
  Normalization norm;
  bool trained = false;
  double final_loss = 0.0;

  int state_dim() const { return static_cast<int>(norm.state_mid.size()); }

  ActionChunk predict(const std::vector<double>& state, Rng& rng) const {
    if (!trained) throw NotTrained("policy has not been trained");
    if (static_cast<int>(state.size()) != state_dim())
      throw ShapeMismatch("predict: state width " + std::to_string(state.size()) +
                          ", expected " + std::to_string(state_dim()));
    const std::vector<double> x = norm.normalize_state(state);
    std::vector<double> flat_norm;
    if (learner == Learner::kMlp)
      flat_norm = mlp_forward(net, x);
    else
      flat_norm = ddpm_sample(net, schedule, x, rng);
    return detail::decode_chunk_lenient(norm.denormalize_target(flat_norm));
  }
};

inline Policy train_policy(const TrainingSet& ts, Learner learner, const TrainConfig& cfg,
                           const DdpmSchedule& schedule = DdpmSchedule::linear()) {
  Policy p;
  p.learner = learner;
  p.frame_mode = ts.mode;
  p.norm = ts.norm;
  p.schedule = schedule;
  TrainResult r = learner == Learner::kMlp ? train_bc(ts, cfg) : train_ddpm(ts, cfg, schedule);
  p.net = std::move(r.net);
  p.final_loss = r.final_loss;
  p.trained = true;
  return p;
}

inline void save_policy(const std::string& path, const Policy& p) {
  using nlohmann::json;
  json j;
  j["format_version"] = kPolicyFormatVersion;
  j["learner"] = to_string(p.learner);
  j["frame_mode"] = to_string(p.frame_mode);
  j["widths"] = p.net.widths;
  j["final_loss"] = p.final_loss;
  j["norm"] = {{"state_mid", p.norm.state_mid},
               {"state_half", p.norm.state_half},
               {"target_mid", p.norm.target_mid},
               {"target_half", p.norm.target_half}};
  j["schedule_beta"] = p.schedule.beta;
  std::vector<double> weights;
  for (size_t l = 0; l < p.net.w.size(); ++l) {
    weights.insert(weights.end(), p.net.w[l].d.begin(), p.net.w[l].d.end());
    weights.insert(weights.end(), p.net.b[l].begin(), p.net.b[l].end());
  }
  j["weights"] = weights;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump() << "\n";
  if (!out) throw IoError("write failed: " + path);
}

inline Policy load_policy(const std::string& path) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad policy file: ") + e.what(), 1);
  }
  const int version = j.at("format_version").get<int>();
  if (version != kPolicyFormatVersion)
    throw FormatVersionMismatch("unsupported policy format version " + std::to_string(version));
  Policy p;
  p.learner = learner_from_string(j.at("learner").get<std::string>());
  p.frame_mode = frame_mode_from_string(j.at("frame_mode").get<std::string>());
  p.final_loss = j.at("final_loss").get<double>();
  const auto& n = j.at("norm");
  p.norm.state_mid = n.at("state_mid").get<std::vector<double>>();
  p.norm.state_half = n.at("state_half").get<std::vector<double>>();
  p.norm.target_mid = n.at("target_mid").get<std::vector<double>>();
  p.norm.target_half = n.at("target_half").get<std::vector<double>>();
  p.schedule = DdpmSchedule::from_beta(j.at("schedule_beta").get<std::vector<double>>());
  p.net.widths = j.at("widths").get<std::vector<int>>();
  const auto weights = j.at("weights").get<std::vector<double>>();
  size_t pos = 0;
  for (size_t l = 0; l + 1 < p.net.widths.size(); ++l) {
    const int in_w = p.net.widths[l], out_w = p.net.widths[l + 1];
    Mat m(out_w, in_w);
    if (pos + m.d.size() + out_w > weights.size())
      throw ParseError("weight array too short for declared widths", 1);
    std::copy(weights.begin() + pos, weights.begin() + pos + m.d.size(), m.d.begin());
    pos += m.d.size();
    p.net.w.push_back(std::move(m));
    p.net.b.emplace_back(weights.begin() + pos, weights.begin() + pos + out_w);
    pos += out_w;
  }
  if (pos != weights.size()) throw ParseError("weight array longer than declared widths", 1);
  p.trained = true;
  return p;
}

}  // namespace oaf
