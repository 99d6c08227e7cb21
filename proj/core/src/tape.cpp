#include "samarl/tape.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace samarl::nn {

Param& ParamStore::add(const std::string& name, Mat init) {
  if (index_.count(name)) throw std::runtime_error("duplicate parameter: " + name);
  index_[name] = params_.size();
  Param p;
  p.name = name;
  p.value = std::move(init);
  p.grad = Mat::Zero(p.value.rows(), p.value.cols());
  p.adam_m = Mat::Zero(p.value.rows(), p.value.cols());
  p.adam_v = Mat::Zero(p.value.rows(), p.value.cols());
  params_.push_back(std::move(p));
  return params_.back();
}

Param& ParamStore::get(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::runtime_error("unknown parameter: " + name);
  return params_[it->second];
}

const Param& ParamStore::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::runtime_error("unknown parameter: " + name);
  return params_[it->second];
}

void ParamStore::zero_grad() {
  for (auto& p : params_) p.grad.setZero();
}

double ParamStore::grad_norm() const {
  double sq = 0.0;
  for (const auto& p : params_) sq += p.grad.squaredNorm();
  return std::sqrt(sq);
}

void ParamStore::clip_grad_norm(double max_norm) {
  double n = grad_norm();
  if (n > max_norm && n > 0.0) {
    double s = max_norm / n;
    for (auto& p : params_) p.grad *= s;
  }
}

void AdamOptimizer::step(ParamStore& params) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, t_);
  const double bc2 = 1.0 - std::pow(beta2_, t_);
  for (auto& p : params.all()) {
    p.adam_m = beta1_ * p.adam_m + (1.0 - beta1_) * p.grad;
    p.adam_v = beta2_ * p.adam_v + (1.0 - beta2_) * p.grad.cwiseProduct(p.grad);
    Mat m_hat = p.adam_m / bc1;
    Mat v_hat = p.adam_v / bc2;
    p.value -= lr_ * (m_hat.array() / (v_hat.array().sqrt() + eps_)).matrix();
  }
}

void Tape::reset() { nodes_.clear(); }

int Tape::push(Mat value, bool requires_grad, std::function<void(Tape&, Node&)> back) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

void Tape::accumulate(int idx, const Mat& g) {
  Node& n = nodes_[idx];
  if (!n.requires_grad) return;
  if (n.grad.size() == 0) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

Var Tape::constant(Mat value) { return {push(std::move(value), false, nullptr)}; }

Var Tape::leaf(Param& p) {
  Param* ptr = &p;
  return {push(p.value, true, [ptr](Tape&, Node& self) { ptr->grad += self.grad; })};
}

Var Tape::matmul(Var a, Var b) {
  const Mat& A = nodes_[a.idx].value;
  const Mat& B = nodes_[b.idx].value;
  bool rg = nodes_[a.idx].requires_grad || nodes_[b.idx].requires_grad;
  int ai = a.idx, bi = b.idx;
  return {push(A * B, rg, [ai, bi](Tape& t, Node& self) {
    t.accumulate(ai, self.grad * t.nodes_[bi].value.transpose());
    t.accumulate(bi, t.nodes_[ai].value.transpose() * self.grad);
  })};
}

Var Tape::transpose(Var a) {
  int ai = a.idx;
  bool rg = nodes_[ai].requires_grad;
  return {push(nodes_[ai].value.transpose(), rg, [ai](Tape& t, Node& self) {
    t.accumulate(ai, self.grad.transpose());
  })};
}

Var Tape::add(Var a, Var b) {
  int ai = a.idx, bi = b.idx;
  bool rg = nodes_[ai].requires_grad || nodes_[bi].requires_grad;
  return {push(nodes_[ai].value + nodes_[bi].value, rg, [ai, bi](Tape& t, Node& self) {
    t.accumulate(ai, self.grad);
    t.accumulate(bi, self.grad);
  })};
}

Var Tape::sub(Var a, Var b) {
  int ai = a.idx, bi = b.idx;
  bool rg = nodes_[ai].requires_grad || nodes_[bi].requires_grad;
  return {push(nodes_[ai].value - nodes_[bi].value, rg, [ai, bi](Tape& t, Node& self) {
    t.accumulate(ai, self.grad);
    t.accumulate(bi, -self.grad);
  })};
}

Var Tape::cwise_mul(Var a, Var b) {
  int ai = a.idx, bi = b.idx;
  bool rg = nodes_[ai].requires_grad || nodes_[bi].requires_grad;
  return {push(nodes_[ai].value.cwiseProduct(nodes_[bi].value), rg,
               [ai, bi](Tape& t, Node& self) {
                 t.accumulate(ai, self.grad.cwiseProduct(t.nodes_[bi].value));
                 t.accumulate(bi, self.grad.cwiseProduct(t.nodes_[ai].value));
               })};
}

Var Tape::cwise_min(Var a, Var b) {
  int ai = a.idx, bi = b.idx;
  bool rg = nodes_[ai].requires_grad || nodes_[bi].requires_grad;
  const Mat& A = nodes_[ai].value;
  const Mat& B = nodes_[bi].value;
  Mat pick_a = (A.array() <= B.array()).cast<double>();  // ties go to a
  return {push(A.cwiseMin(B), rg, [ai, bi, pick_a](Tape& t, Node& self) {
    t.accumulate(ai, self.grad.cwiseProduct(pick_a));
    t.accumulate(bi, self.grad.cwiseProduct(Mat(1.0 - pick_a.array())));
  })};
}

Var Tape::cwise_max(Var a, Var b) {
  int ai = a.idx, bi = b.idx;
  bool rg = nodes_[ai].requires_grad || nodes_[bi].requires_grad;
  const Mat& A = nodes_[ai].value;
  const Mat& B = nodes_[bi].value;
  Mat pick_a = (A.array() >= B.array()).cast<double>();
  return {push(A.cwiseMax(B), rg, [ai, bi, pick_a](Tape& t, Node& self) {
    t.accumulate(ai, self.grad.cwiseProduct(pick_a));
    t.accumulate(bi, self.grad.cwiseProduct(Mat(1.0 - pick_a.array())));
  })};
}

Var Tape::add_row_broadcast(Var x, Var row) {
  int xi = x.idx, ri = row.idx;
  bool rg = nodes_[xi].requires_grad || nodes_[ri].requires_grad;
  Mat out = nodes_[xi].value;
  out.rowwise() += nodes_[ri].value.row(0);
  return {push(std::move(out), rg, [xi, ri](Tape& t, Node& self) {
    t.accumulate(xi, self.grad);
    t.accumulate(ri, self.grad.colwise().sum());
  })};
}

Var Tape::scale(Var a, double s) {
  int ai = a.idx;
  bool rg = nodes_[ai].requires_grad;
  return {push(nodes_[ai].value * s, rg, [ai, s](Tape& t, Node& self) {
    t.accumulate(ai, self.grad * s);
  })};
}

Var Tape::add_scalar(Var a, double s) {
  int ai = a.idx;
  bool rg = nodes_[ai].requires_grad;
  return {push(Mat(nodes_[ai].value.array() + s), rg, [ai](Tape& t, Node& self) {
    t.accumulate(ai, self.grad);
  })};
}

Var Tape::tanh(Var a) {
  int ai = a.idx;
  bool rg = nodes_[ai].requires_grad;
  Mat y = nodes_[ai].value.array().tanh();
  return {push(y, rg, [ai, y](Tape& t, Node& self) {
    t.accumulate(ai, self.grad.cwiseProduct(Mat(1.0 - y.array().square())));
  })};
}

Var Tape::sigmoid(Var a) {
  int ai = a.idx;
  bool rg = nodes_[ai].requires_grad;
  Mat y = (1.0 / (1.0 + (-nodes_[ai].value.array()).exp()));
  return {push(y, rg, [ai, y](Tape& t, Node& self) {
    t.accumulate(ai, self.grad.cwiseProduct(Mat(y.array() * (1.0 - y.array()))));
  })};
}

Var Tape::relu(Var a) {
  int ai = a.idx;
  bool rg = nodes_[ai].requires_grad;
  const Mat& x = nodes_[ai].value;
  Mat mask = (x.array() > 0.0).cast<double>();
  return {push(x.cwiseMax(0.0), rg, [ai, mask](Tape& t, Node& self) {
    t.accumulate(ai, self.grad.cwiseProduct(mask));
  })};
}

Var Tape::exp(Var a) {
  int ai = a.idx;
  bool rg = nodes_[ai].requires_grad;
  Mat y = nodes_[ai].value.array().exp();
  return {push(y, rg, [ai, y](Tape& t, Node& self) {
    t.accumulate(ai, self.grad.cwiseProduct(y));
  })};
}

Var Tape::log(Var a) {
  int ai = a.idx;
  bool rg = nodes_[ai].requires_grad;
  const Mat& x = nodes_[ai].value;
  return {push(Mat(x.array().log()), rg, [ai](Tape& t, Node& self) {
    t.accumulate(ai, Mat(self.grad.array() / t.nodes_[ai].value.array()));
  })};
}

Var Tape::square(Var a) {
  int ai = a.idx;
  bool rg = nodes_[ai].requires_grad;
  const Mat& x = nodes_[ai].value;
  return {push(Mat(x.array().square()), rg, [ai](Tape& t, Node& self) {
    t.accumulate(ai, Mat(2.0 * self.grad.array() * t.nodes_[ai].value.array()));
  })};
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::runtime_error("concat_cols: empty");
  long rows = nodes_[parts[0].idx].value.rows();
  long cols = 0;
  bool rg = false;
  for (Var p : parts) {
    cols += nodes_[p.idx].value.cols();
    rg = rg || nodes_[p.idx].requires_grad;
  }
  Mat out(rows, cols);
  long c = 0;
  std::vector<int> idxs;
  std::vector<long> widths;
  for (Var p : parts) {
    const Mat& m = nodes_[p.idx].value;
    out.middleCols(c, m.cols()) = m;
    idxs.push_back(p.idx);
    widths.push_back(m.cols());
    c += m.cols();
  }
  return {push(std::move(out), rg, [idxs, widths](Tape& t, Node& self) {
    long c = 0;
    for (std::size_t i = 0; i < idxs.size(); ++i) {
      t.accumulate(idxs[i], self.grad.middleCols(c, widths[i]));
      c += widths[i];
    }
  })};
}

Var Tape::concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::runtime_error("concat_rows: empty");
  long cols = nodes_[parts[0].idx].value.cols();
  long rows = 0;
  bool rg = false;
  for (Var p : parts) {
    rows += nodes_[p.idx].value.rows();
    rg = rg || nodes_[p.idx].requires_grad;
  }
  Mat out(rows, cols);
  long r = 0;
  std::vector<int> idxs;
  std::vector<long> heights;
  for (Var p : parts) {
    const Mat& m = nodes_[p.idx].value;
    out.middleRows(r, m.rows()) = m;
    idxs.push_back(p.idx);
    heights.push_back(m.rows());
    r += m.rows();
  }
  return {push(std::move(out), rg, [idxs, heights](Tape& t, Node& self) {
    long r = 0;
    for (std::size_t i = 0; i < idxs.size(); ++i) {
      t.accumulate(idxs[i], self.grad.middleRows(r, heights[i]));
      r += heights[i];
    }
  })};
}

Var Tape::slice_cols(Var a, int col0, int ncols) {
  int ai = a.idx;
  bool rg = nodes_[ai].requires_grad;
  const Mat& x = nodes_[ai].value;
  long rows = x.rows(), cols = x.cols();
  return {push(x.middleCols(col0, ncols), rg,
               [ai, col0, ncols, rows, cols](Tape& t, Node& self) {
                 Mat g = Mat::Zero(rows, cols);
                 g.middleCols(col0, ncols) = self.grad;
                 t.accumulate(ai, g);
               })};
}

Var Tape::row_sum(Var a) {
  int ai = a.idx;
  bool rg = nodes_[ai].requires_grad;
  const Mat& x = nodes_[ai].value;
  long cols = x.cols();
  return {push(x.rowwise().sum(), rg, [ai, cols](Tape& t, Node& self) {
    t.accumulate(ai, self.grad * Mat::Ones(1, cols));
  })};
}

Var Tape::sum_all(Var a) {
  int ai = a.idx;
  bool rg = nodes_[ai].requires_grad;
  const Mat& x = nodes_[ai].value;
  Mat out(1, 1);
  out(0, 0) = x.sum();
  long rows = x.rows(), cols = x.cols();
  return {push(std::move(out), rg, [ai, rows, cols](Tape& t, Node& self) {
    t.accumulate(ai, Mat::Constant(rows, cols, self.grad(0, 0)));
  })};
}

Var Tape::mean_all(Var a) {
  const Mat& x = nodes_[a.idx].value;
  return scale(sum_all(a), 1.0 / static_cast<double>(x.size()));
}

namespace {

Mat gather_rows(const Mat& x, const std::vector<int>& rows) {
  Mat out(static_cast<long>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = x.row(rows[i]);
  return out;
}

void scatter_add_rows(Mat& dst, const std::vector<int>& rows, const Mat& src) {
  for (std::size_t i = 0; i < rows.size(); ++i) dst.row(rows[i]) += src.row(i);
}

Mat softmax_rows(const Mat& s) {
  Mat out(s.rows(), s.cols());
  for (long i = 0; i < s.rows(); ++i) {
    Eigen::ArrayXd row = s.row(i).array();
    row -= row.maxCoeff();
    Eigen::ArrayXd e = row.exp();
    out.row(i) = (e / e.sum()).matrix().transpose();
  }
  return out;
}

// dS for y = softmax_rows(s), given dY.
Mat softmax_rows_backward(const Mat& y, const Mat& dy) {
  Mat prod = dy.cwiseProduct(y);
  Eigen::VectorXd rowsums = prod.rowwise().sum();
  Mat ds = prod;
  for (long i = 0; i < y.rows(); ++i) ds.row(i) -= rowsums(i) * y.row(i);
  return ds;
}

}  // namespace

Var Tape::block_attention(Var q, Var k, Var v, const Groups& qg, const Groups& kg,
                          double sc) {
  if (qg.size() != kg.size())
    throw std::runtime_error("block_attention: group count mismatch");
  int qi = q.idx, ki = k.idx, vi = v.idx;
  const Mat& Q = nodes_[qi].value;
  const Mat& K = nodes_[ki].value;
  const Mat& V = nodes_[vi].value;
  bool rg = nodes_[qi].requires_grad || nodes_[ki].requires_grad || nodes_[vi].requires_grad;

  Mat out = Mat::Zero(Q.rows(), V.cols());
  auto probs = std::make_shared<std::vector<Mat>>();
  probs->reserve(qg.size());
  for (std::size_t g = 0; g < qg.size(); ++g) {
    if (qg[g].empty() || kg[g].empty()) {
      probs->emplace_back();
      continue;
    }
    Mat Qg = gather_rows(Q, qg[g]);
    Mat Kg = gather_rows(K, kg[g]);
    Mat A = softmax_rows(sc * (Qg * Kg.transpose()));
    Mat Og = A * gather_rows(V, kg[g]);
    for (std::size_t i = 0; i < qg[g].size(); ++i) out.row(qg[g][i]) = Og.row(i);
    probs->push_back(std::move(A));
  }

  Groups qgc = qg, kgc = kg;
  return {push(std::move(out), rg,
               [qi, ki, vi, qgc, kgc, sc, probs](Tape& t, Node& self) {
                 const Mat& Q = t.nodes_[qi].value;
                 const Mat& K = t.nodes_[ki].value;
                 const Mat& V = t.nodes_[vi].value;
                 Mat dQ = Mat::Zero(Q.rows(), Q.cols());
                 Mat dK = Mat::Zero(K.rows(), K.cols());
                 Mat dV = Mat::Zero(V.rows(), V.cols());
                 for (std::size_t g = 0; g < qgc.size(); ++g) {
                   const Mat& A = (*probs)[g];
                   if (A.size() == 0) continue;
                   Mat dOg = gather_rows(self.grad, qgc[g]);
                   Mat Vg = gather_rows(V, kgc[g]);
                   Mat dA = dOg * Vg.transpose();
                   scatter_add_rows(dV, kgc[g], A.transpose() * dOg);
                   Mat dS = softmax_rows_backward(A, dA);
                   Mat Qg = gather_rows(Q, qgc[g]);
                   Mat Kg = gather_rows(K, kgc[g]);
                   scatter_add_rows(dQ, qgc[g], sc * dS * Kg);
                   scatter_add_rows(dK, kgc[g], sc * dS.transpose() * Qg);
                 }
                 t.accumulate(qi, dQ);
                 t.accumulate(ki, dK);
                 t.accumulate(vi, dV);
               })};
}

Var Tape::block_adjacency_mix(Var x, Var q, Var k, const Groups& groups, double sc) {
  int xi = x.idx, qi = q.idx, ki = k.idx;
  const Mat& X = nodes_[xi].value;
  const Mat& Q = nodes_[qi].value;
  const Mat& K = nodes_[ki].value;
  bool rg = nodes_[xi].requires_grad || nodes_[qi].requires_grad || nodes_[ki].requires_grad;

  struct Saved {
    Mat A;   // softmax probs
    Mat R;   // row-normalized symmetrized adjacency
    Eigen::VectorXd s;  // row sums of the symmetrized matrix
  };
  Mat out = Mat::Zero(X.rows(), X.cols());
  auto saved = std::make_shared<std::vector<Saved>>();
  saved->reserve(groups.size());
  for (const auto& g : groups) {
    if (g.empty()) {
      saved->emplace_back();
      continue;
    }
    Mat Qg = gather_rows(Q, g);
    Mat Kg = gather_rows(K, g);
    Mat A = softmax_rows(sc * (Qg * Kg.transpose()));
    Mat M = 0.5 * (A + A.transpose());
    Eigen::VectorXd s = M.rowwise().sum();
    Mat R = M;
    for (long i = 0; i < R.rows(); ++i) R.row(i) /= s(i);
    Mat Og = R * gather_rows(X, g);
    for (std::size_t i = 0; i < g.size(); ++i) out.row(g[i]) = Og.row(i);
    saved->push_back(Saved{std::move(A), std::move(R), std::move(s)});
  }

  Groups gc = groups;
  return {push(std::move(out), rg, [xi, qi, ki, gc, sc, saved](Tape& t, Node& self) {
    const Mat& X = t.nodes_[xi].value;
    const Mat& Q = t.nodes_[qi].value;
    const Mat& K = t.nodes_[ki].value;
    Mat dX = Mat::Zero(X.rows(), X.cols());
    Mat dQ = Mat::Zero(Q.rows(), Q.cols());
    Mat dK = Mat::Zero(K.rows(), K.cols());
    for (std::size_t g = 0; g < gc.size(); ++g) {
      const auto& sv = (*saved)[g];
      if (sv.A.size() == 0) continue;
      const auto& rows = gc[g];
      Mat Xg = gather_rows(X, rows);
      Mat dOg = gather_rows(self.grad, rows);
      scatter_add_rows(dX, rows, sv.R.transpose() * dOg);
      Mat dR = dOg * Xg.transpose();
      // back through row normalization: dM_ij = (dR_ij - c_i) / s_i
      Eigen::VectorXd c = dR.cwiseProduct(sv.R).rowwise().sum();
      Mat dM = dR;
      for (long i = 0; i < dM.rows(); ++i) dM.row(i) = (dM.row(i).array() - c(i)) / sv.s(i);
      Mat dA = 0.5 * (dM + dM.transpose());
      Mat dS = softmax_rows_backward(sv.A, dA);
      Mat Qg = gather_rows(Q, rows);
      Mat Kg = gather_rows(K, rows);
      scatter_add_rows(dQ, rows, sc * dS * Kg);
      scatter_add_rows(dK, rows, sc * dS.transpose() * Qg);
    }
    t.accumulate(xi, dX);
    t.accumulate(qi, dQ);
    t.accumulate(ki, dK);
  })};
}

Var Tape::segment_mean(Var x, const Groups& groups, int out_rows) {
  int xi = x.idx;
  const Mat& X = nodes_[xi].value;
  bool rg = nodes_[xi].requires_grad;
  Mat out = Mat::Zero(out_rows, X.cols());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) continue;
    for (int r : groups[g]) out.row(static_cast<long>(g)) += X.row(r);
    out.row(static_cast<long>(g)) /= static_cast<double>(groups[g].size());
  }
  Groups gc = groups;
  long xrows = X.rows(), xcols = X.cols();
  return {push(std::move(out), rg, [xi, gc, xrows, xcols](Tape& t, Node& self) {
    Mat dX = Mat::Zero(xrows, xcols);
    for (std::size_t g = 0; g < gc.size(); ++g) {
      if (gc[g].empty()) continue;
      double inv = 1.0 / static_cast<double>(gc[g].size());
      for (int r : gc[g]) dX.row(r) += inv * self.grad.row(static_cast<long>(g));
    }
    t.accumulate(xi, dX);
  })};
}

Var Tape::gather(Var x, const std::vector<int>& rows) {
  int xi = x.idx;
  bool rg = nodes_[xi].requires_grad;
  const Mat& X = nodes_[xi].value;
  Mat out(static_cast<long>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<long>(i)) = X.row(rows[i]);
  long xrows = X.rows(), xcols = X.cols();
  std::vector<int> rc = rows;
  return {push(std::move(out), rg, [xi, rc, xrows, xcols](Tape& t, Node& self) {
    Mat dX = Mat::Zero(xrows, xcols);
    for (std::size_t i = 0; i < rc.size(); ++i)
      dX.row(rc[i]) += self.grad.row(static_cast<long>(i));
    t.accumulate(xi, dX);
  })};
}

void Tape::backward(Var root) {
  Node& r = nodes_[root.idx];
  if (r.value.rows() != 1 || r.value.cols() != 1)
    throw std::runtime_error("backward: root must be scalar");
  if (!r.requires_grad) return;
  r.grad = Mat::Ones(1, 1);
  for (int i = root.idx; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.grad.size() == 0 || !n.back) continue;
    n.back(*this, n);
  }
}

}  // namespace samarl::nn
