#include "samarl/encoder.hpp"

#include <cmath>

namespace samarl::nn {

namespace {

Mat xavier(long rows, long cols, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Mat m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

void add_linear(ParamStore& ps, const std::string& name, long in, long out,
                std::mt19937_64& rng) {
  ps.add(name + "_w", xavier(in, out, rng));
  ps.add(name + "_b", Mat::Zero(1, out));
}

Var linear(Tape& t, ParamStore& ps, const std::string& name, Var x) {
  Var y = t.matmul(x, t.leaf(ps.get(name + "_w")));
  return t.add_row_broadcast(y, t.leaf(ps.get(name + "_b")));
}

// Sinusoidal encoding of per-token relative position (spatial streams).
Mat positional_from_xy(const Mat& tokens, int d_model) {
  Mat pe = Mat::Zero(tokens.rows(), d_model);
  const int quarter = d_model / 4;
  for (long r = 0; r < tokens.rows(); ++r) {
    const double x = tokens(r, 0), y = tokens(r, 1);
    for (int i = 0; i < quarter; ++i) {
      const double freq = std::pow(10000.0, -4.0 * i / d_model);
      pe(r, 4 * i + 0) = std::sin(x * freq);
      pe(r, 4 * i + 1) = std::cos(x * freq);
      pe(r, 4 * i + 2) = std::sin(y * freq);
      pe(r, 4 * i + 3) = std::cos(y * freq);
    }
  }
  return pe;
}

Mat positional_from_index(const std::vector<int>& slots, int d_model) {
  Mat pe = Mat::Zero(static_cast<long>(slots.size()), d_model);
  for (std::size_t r = 0; r < slots.size(); ++r) {
    for (int i = 0; i < d_model / 2; ++i) {
      const double freq = std::pow(10000.0, -2.0 * i / d_model);
      pe(static_cast<long>(r), 2 * i + 0) = std::sin(slots[r] * freq);
      pe(static_cast<long>(r), 2 * i + 1) = std::cos(slots[r] * freq);
    }
  }
  return pe;
}

struct StreamTokens {
  Mat features;              // N x kTokenDim
  std::vector<int> slot;     // window slot per token
  Groups spatial;            // by (batch, slot)
  Groups temporal;           // by (batch, agent id)
  Groups pool;               // out row = b * L + slot
};

StreamTokens assemble(const std::vector<EncoderInput>& batch, bool robot_stream, int L) {
  StreamTokens st;
  long total = 0;
  for (const auto& in : batch) {
    const auto& toks = robot_stream ? in.robot_tokens : in.human_tokens;
    for (const auto& m : toks) total += m.rows();
  }
  st.features = Mat::Zero(total, kTokenDim);
  st.slot.reserve(total);
  st.pool.assign(static_cast<std::size_t>(batch.size()) * L, {});

  std::map<std::pair<int, int>, std::vector<int>> temporal_map;  // (b, agent) -> rows
  long row = 0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto& in = batch[b];
    const auto& toks = robot_stream ? in.robot_tokens : in.human_tokens;
    const auto& ids = robot_stream ? in.robot_ids : in.human_ids;
    for (std::size_t j = 0; j < toks.size(); ++j) {
      const int l = in.pad + static_cast<int>(j);
      std::vector<int> group_rows;
      for (long r = 0; r < toks[j].rows(); ++r) {
        st.features.row(row) = toks[j].row(r);
        st.slot.push_back(l);
        group_rows.push_back(static_cast<int>(row));
        st.pool[b * L + l].push_back(static_cast<int>(row));
        temporal_map[{static_cast<int>(b), ids[j][r]}].push_back(static_cast<int>(row));
        ++row;
      }
      if (!group_rows.empty()) st.spatial.push_back(std::move(group_rows));
    }
  }
  for (auto& [_, rows] : temporal_map) st.temporal.push_back(std::move(rows));
  return st;
}

}  // namespace

EncoderInput build_encoder_input(const HistoryBuffer& hist, const EncoderConfig& cfg) {
  EncoderInput in;
  const int valid = std::min(hist.size(), cfg.history);
  in.pad = cfg.history - valid;
  const int first = hist.size() - valid;

  for (int j = 0; j < valid; ++j) {
    const Observation& obs = hist.entries[first + j];
    const Vec2 to_goal = obs.self.prv.goal - obs.self.pub.p;
    const double phi = std::atan2(to_goal.y, to_goal.x);

    auto tokenize = [&](const PublicState& ps, bool ego) {
      Eigen::RowVectorXd row(kTokenDim);
      const Vec2 rel = ego ? Vec2{0.0, 0.0} : (ps.p - obs.self.pub.p).rotated(-phi);
      const Vec2 v = ps.v.rotated(-phi);
      row << rel.x, rel.y, v.x, v.y, ps.rho, rel.norm();
      return row;
    };

    std::vector<Eigen::RowVectorXd> humans, robots;
    std::vector<int> hids, rids;
    robots.push_back(tokenize(obs.self.pub, true));
    rids.push_back(obs.self.id);
    for (std::size_t k = 0; k < obs.visible.size(); ++k) {
      if (obs.visible_kinds[k] == AgentKind::Human) {
        humans.push_back(tokenize(obs.visible[k], false));
        hids.push_back(obs.visible_ids[k]);
      } else {
        robots.push_back(tokenize(obs.visible[k], false));
        rids.push_back(obs.visible_ids[k]);
      }
    }

    auto to_mat = [](const std::vector<Eigen::RowVectorXd>& rows) {
      Mat m(static_cast<long>(rows.size()), kTokenDim);
      for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<long>(i)) = rows[i];
      return m;
    };
    in.human_tokens.push_back(to_mat(humans));
    in.human_ids.push_back(std::move(hids));
    in.robot_tokens.push_back(to_mat(robots));
    in.robot_ids.push_back(std::move(rids));
  }
  return in;
}

Eigen::RowVectorXd self_features(const Observation& obs) {
  Eigen::RowVectorXd f(kSelfFeatDim);
  const Vec2 to_goal = obs.self.prv.goal - obs.self.pub.p;
  const double phi = std::atan2(to_goal.y, to_goal.x);
  const Vec2 v = obs.self.pub.v.rotated(-phi);
  const double heading_err = wrap_angle(obs.self.prv.theta - phi);
  f << to_goal.norm(), v.x, v.y, obs.self.prv.v_pref, std::cos(heading_err),
      std::sin(heading_err), obs.self.pub.rho;
  return f;
}

Eigen::RowVectorXd waypoint_features(const Observation& obs, const Vec2& waypoint_world) {
  Eigen::RowVectorXd f(kWaypointFeatDim);
  const Vec2 to_goal = obs.self.prv.goal - obs.self.pub.p;
  const double phi = std::atan2(to_goal.y, to_goal.x);
  const Vec2 rel = (waypoint_world - obs.self.pub.p).rotated(-phi);
  const double bearing = wrap_angle(std::atan2(waypoint_world.y - obs.self.pub.p.y,
                                               waypoint_world.x - obs.self.pub.p.x) -
                                    obs.self.prv.theta);
  f << rel.x, rel.y, rel.norm(), std::cos(bearing), std::sin(bearing);
  return f;
}

void Encoder::init_params(ParamStore& ps, const std::string& prefix,
                          std::mt19937_64& rng) const {
  const int d = cfg_.d_model;
  if (d % cfg_.heads != 0) throw std::runtime_error("d_model must divide by heads");
  if (d % 4 != 0) throw std::runtime_error("d_model must be a multiple of 4");

  auto add_mha = [&](const std::string& p) {
    add_linear(ps, p + "/wq", d, d, rng);
    add_linear(ps, p + "/wk", d, d, rng);
    add_linear(ps, p + "/wv", d, d, rng);
    add_linear(ps, p + "/wo", d, d, rng);
  };

  for (const std::string stream : {"sH", "sR"}) {
    const std::string base = prefix + "/" + stream;
    add_linear(ps, base + "/emb", kTokenDim, d, rng);
    for (int l = 0; l < cfg_.layers; ++l) {
      const std::string lb = base + "/l" + std::to_string(l);
      add_mha(lb);
      add_linear(ps, lb + "/adjq", d, d, rng);
      add_linear(ps, lb + "/adjk", d, d, rng);
      add_linear(ps, lb + "/gcn", d, d, rng);
      add_linear(ps, lb + "/gate", 2 * d, d, rng);
    }
  }
  for (const std::string stream : {"tH", "tR"}) {
    const std::string base = prefix + "/" + stream;
    add_linear(ps, base + "/emb", kTokenDim, d, rng);
    for (int l = 0; l < cfg_.layers; ++l) {
      const std::string lb = base + "/l" + std::to_string(l);
      add_mha(lb);
      add_linear(ps, lb + "/ffn1", d, 2 * d, rng);
      add_linear(ps, lb + "/ffn2", 2 * d, d, rng);
    }
  }
  add_mha(prefix + "/cm");
  add_mha(prefix + "/fin");
  add_linear(ps, prefix + "/fin/ffn1", d, 2 * d, rng);
  add_linear(ps, prefix + "/fin/ffn2", 2 * d, d, rng);
}

namespace {

Var multi_head(Tape& t, ParamStore& ps, const std::string& p, const EncoderConfig& cfg,
               Var q_in, Var kv_in, const Groups& qg, const Groups& kg) {
  const int d = cfg.d_model;
  const int dh = d / cfg.heads;
  const double sc = 1.0 / std::sqrt(static_cast<double>(dh));
  Var q = linear(t, ps, p + "/wq", q_in);
  Var k = linear(t, ps, p + "/wk", kv_in);
  Var v = linear(t, ps, p + "/wv", kv_in);
  std::vector<Var> heads;
  heads.reserve(cfg.heads);
  for (int h = 0; h < cfg.heads; ++h) {
    Var qh = t.slice_cols(q, h * dh, dh);
    Var kh = t.slice_cols(k, h * dh, dh);
    Var vh = t.slice_cols(v, h * dh, dh);
    heads.push_back(t.block_attention(qh, kh, vh, qg, kg, sc));
  }
  return linear(t, ps, p + "/wo", t.concat_cols(heads));
}

Var spatial_block(Tape& t, ParamStore& ps, const std::string& base,
                  const EncoderConfig& cfg, const StreamTokens& st) {
  Var x = t.constant(st.features);
  Var e = t.relu(linear(t, ps, base + "/emb", x));
  e = t.add(e, t.constant(positional_from_xy(st.features, cfg.d_model)));
  const double sc = 1.0 / std::sqrt(static_cast<double>(cfg.d_model));
  for (int l = 0; l < cfg.layers; ++l) {
    const std::string lb = base + "/l" + std::to_string(l);
    Var attn = multi_head(t, ps, lb, cfg, e, e, st.spatial, st.spatial);
    Var adjq = linear(t, ps, lb + "/adjq", e);
    Var adjk = linear(t, ps, lb + "/adjk", e);
    Var mixed = t.block_adjacency_mix(e, adjq, adjk, st.spatial, sc);
    Var gcn = t.relu(linear(t, ps, lb + "/gcn", mixed));
    Var gate = t.sigmoid(linear(t, ps, lb + "/gate", t.concat_cols({attn, gcn})));
    Var fused = t.add(t.cwise_mul(gate, attn),
                      t.cwise_mul(t.add_scalar(t.neg(gate), 1.0), gcn));
    e = t.add(fused, e);
  }
  return e;
}

Var temporal_block(Tape& t, ParamStore& ps, const std::string& base,
                   const EncoderConfig& cfg, const StreamTokens& st) {
  Var x = t.constant(st.features);
  Var e = t.relu(linear(t, ps, base + "/emb", x));
  e = t.add(e, t.constant(positional_from_index(st.slot, cfg.d_model)));
  for (int l = 0; l < cfg.layers; ++l) {
    const std::string lb = base + "/l" + std::to_string(l);
    Var attn = multi_head(t, ps, lb, cfg, e, e, st.temporal, st.temporal);
    e = t.add(attn, e);
    Var ffn = linear(t, ps, lb + "/ffn2", t.relu(linear(t, ps, lb + "/ffn1", e)));
    e = t.add(ffn, e);
  }
  return e;
}

}  // namespace

Var Encoder::forward(Tape& tape, ParamStore& ps, const std::string& prefix,
                     const std::vector<EncoderInput>& batch) const {
  const int L = cfg_.history;
  const int B = static_cast<int>(batch.size());
  const int BL = B * L;

  StreamTokens human = assemble(batch, false, L);
  StreamTokens robot = assemble(batch, true, L);

  // Stream encodings, pooled per (batch, window slot).
  Var y_hs = tape.segment_mean(spatial_block(tape, ps, prefix + "/sH", cfg_, human),
                               human.pool, BL);
  Var y_rs = tape.segment_mean(spatial_block(tape, ps, prefix + "/sR", cfg_, robot),
                               robot.pool, BL);
  Var y_ht = tape.segment_mean(temporal_block(tape, ps, prefix + "/tH", cfg_, human),
                               human.pool, BL);
  Var y_rt = tape.segment_mean(temporal_block(tape, ps, prefix + "/tR", cfg_, robot),
                               robot.pool, BL);

  // Fused modality: token order [RS | HS | RT | HT].
  const std::vector<Var> modalities = {y_rs, y_hs, y_rt, y_ht};
  Var fused = tape.concat_rows(modalities);

  Groups qg, kg;  // one group pair per batch item
  for (int b = 0; b < B; ++b) {
    std::vector<int> qrows, krows;
    for (int l = batch[b].pad; l < L; ++l) {
      qrows.push_back(b * L + l);
      for (int m = 0; m < 4; ++m) krows.push_back(m * BL + b * L + l);
    }
    qg.push_back(std::move(qrows));
    kg.push_back(std::move(krows));
  }

  std::vector<Var> cm_out;
  cm_out.reserve(4);
  for (Var m : modalities) {
    Var o = multi_head(tape, ps, prefix + "/cm", cfg_, m, fused, qg, kg);
    cm_out.push_back(tape.add(o, m));  // residual to the queried modality
  }
  Var g = tape.concat_rows(cm_out);

  Groups fg;  // final self-attention: all valid fused rows per batch item
  for (int b = 0; b < B; ++b) {
    std::vector<int> rows;
    for (int m = 0; m < 4; ++m)
      for (int l = batch[b].pad; l < L; ++l) rows.push_back(m * BL + b * L + l);
    fg.push_back(std::move(rows));
  }
  Var attn = multi_head(tape, ps, prefix + "/fin", cfg_, g, g, fg, fg);
  g = tape.add(attn, g);
  Var ffn = linear(tape, ps, prefix + "/fin/ffn2",
                   tape.relu(linear(tape, ps, prefix + "/fin/ffn1", g)));
  g = tape.add(ffn, g);

  return tape.segment_mean(g, fg, B);
}

}  // namespace samarl::nn
