#include "samarl/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

namespace samarl::nn {

using nlohmann::json;

namespace {

json config_to_json(const PolicyConfig& cfg) {
  return json{{"d_model", cfg.encoder.d_model},
              {"heads", cfg.encoder.heads},
              {"layers", cfg.encoder.layers},
              {"history", cfg.encoder.history},
              {"hidden", cfg.hidden},
              {"waypoint_box", cfg.waypoint_box},
              {"single_agent", cfg.single_agent},
              {"init_log_std", cfg.init_log_std},
              {"shared_encoder", cfg.shared_encoder}};
}

PolicyConfig config_from_json(const json& j) {
  PolicyConfig cfg;
  cfg.encoder.d_model = j.at("d_model").get<int>();
  cfg.encoder.heads = j.at("heads").get<int>();
  cfg.encoder.layers = j.at("layers").get<int>();
  cfg.encoder.history = j.at("history").get<int>();
  cfg.hidden = j.at("hidden").get<int>();
  cfg.waypoint_box = j.at("waypoint_box").get<double>();
  cfg.single_agent = j.at("single_agent").get<bool>();
  cfg.init_log_std = j.at("init_log_std").get<double>();
  cfg.shared_encoder = j.at("shared_encoder").get<bool>();
  return cfg;
}

json store_to_json(const ParamStore& store) {
  json out = json::object();
  for (const Param& p : store.all()) {
    json data = json::array();
    for (long r = 0; r < p.value.rows(); ++r)
      for (long c = 0; c < p.value.cols(); ++c) data.push_back(p.value(r, c));
    out[p.name] = json{{"rows", p.value.rows()}, {"cols", p.value.cols()},
                       {"data", std::move(data)}};
  }
  return out;
}

void store_from_json(const json& j, ParamStore& store) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& t = it.value();
    const long rows = t.at("rows").get<long>();
    const long cols = t.at("cols").get<long>();
    const json& data = t.at("data");
    if (rows <= 0 || cols <= 0 ||
        static_cast<long>(data.size()) != rows * cols)
      throw CheckpointError("tensor '" + it.key() + "' has inconsistent shape");
    Mat m(rows, cols);
    std::size_t k = 0;
    for (long r = 0; r < rows; ++r)
      for (long c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
    store.add(it.key(), std::move(m));
  }
}

}  // namespace

void save_checkpoint(const std::string& path, const PolicyConfig& cfg,
                     const ParamStore& actor, const ParamStore& critic) {
  json j{{"schema", "samarl-checkpoint"},
         {"version", kCheckpointVersion},
         {"policy", config_to_json(cfg)},
         {"actor", store_to_json(actor)},
         {"critic", store_to_json(critic)}};
  std::ofstream out(path);
  if (!out) throw CheckpointError("cannot open checkpoint for writing: " + path);
  out << j.dump();
  out << '\n';
  if (!out) throw CheckpointError("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw CheckpointError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != "samarl-checkpoint")
      throw CheckpointError("unrecognized checkpoint schema");
    if (j.at("version").get<int>() != kCheckpointVersion)
      throw CheckpointError("unsupported checkpoint version");
    Checkpoint ckpt;
    ckpt.config = config_from_json(j.at("policy"));
    store_from_json(j.at("actor"), ckpt.actor);
    store_from_json(j.at("critic"), ckpt.critic);

    // Shapes must match what the declared configuration would allocate.
    PolicyNet net(ckpt.config);
    ParamStore ref_actor, ref_critic;
    std::mt19937_64 rng(0);
    net.init_params(ref_actor, ref_critic, rng);
    auto check = [](const ParamStore& ref, const ParamStore& got, const char* side) {
      if (ref.size() != got.size())
        throw CheckpointError(std::string(side) + " store has wrong parameter count");
      for (const Param& p : ref.all()) {
        if (!got.has(p.name))
          throw CheckpointError(std::string(side) + " store is missing '" + p.name + "'");
        const Mat& v = got.get(p.name).value;
        if (v.rows() != p.value.rows() || v.cols() != p.value.cols())
          throw CheckpointError("tensor '" + p.name + "' has the wrong shape");
      }
    };
    check(ref_actor, ckpt.actor, "actor");
    check(ref_critic, ckpt.critic, "critic");
    return ckpt;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }
}

}  // namespace samarl::nn
