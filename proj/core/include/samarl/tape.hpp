#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace samarl::nn {

using Mat = Eigen::MatrixXd;

/// Row-index groups for block-structured attention and pooling. Rows of one
/// group attend (or pool) only among themselves.
using Groups = std::vector<std::vector<int>>;

struct Param {
  std::string name;
  Mat value;
  Mat grad;
  Mat adam_m;
  Mat adam_v;
};

/// Named parameter arrays with gradient accumulators.
class ParamStore {
 public:
  Param& add(const std::string& name, Mat init);
  Param& get(const std::string& name);
  const Param& get(const std::string& name) const;
  bool has(const std::string& name) const { return index_.count(name) > 0; }
  void zero_grad();
  std::vector<Param>& all() { return params_; }
  const std::vector<Param>& all() const { return params_; }
  std::size_t size() const { return params_.size(); }

  double grad_norm() const;
  void clip_grad_norm(double max_norm);

 private:
  std::vector<Param> params_;
  std::map<std::string, std::size_t> index_;
};

/// Adam over a ParamStore.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(double lr, double beta1 = 0.9, double beta2 = 0.999,
                         double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}
  void step(ParamStore& params);
  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

struct Var {
  int idx = -1;
  bool valid() const { return idx >= 0; }
};

/// Reverse-mode tape over dense matrices. Values live on the tape; parameter
/// leaves accumulate into their ParamStore entry on backward().
class Tape {
 public:
  void reset();

  Var constant(Mat value);
  Var leaf(Param& p);

  Var matmul(Var a, Var b);
  Var transpose(Var a);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var cwise_mul(Var a, Var b);
  Var cwise_min(Var a, Var b);
  Var cwise_max(Var a, Var b);
  Var add_row_broadcast(Var x, Var row);  // row: 1 x cols(x)
  Var scale(Var a, double s);
  Var add_scalar(Var a, double s);
  Var tanh(Var a);
  Var sigmoid(Var a);
  Var relu(Var a);
  Var exp(Var a);
  Var log(Var a);  // inputs must be positive
  Var square(Var a);
  Var neg(Var a) { return scale(a, -1.0); }
  Var concat_cols(const std::vector<Var>& parts);
  Var concat_rows(const std::vector<Var>& parts);
  Var slice_cols(Var a, int col0, int ncols);
  Var row_sum(Var a);   // n x 1
  Var sum_all(Var a);   // 1 x 1
  Var mean_all(Var a);  // 1 x 1

  /// Scaled dot-product attention restricted to row groups: for each pair
  /// (qg[i], kg[i]) the query rows attend only to that key group. Query rows
  /// outside every group, and queries with an empty key group, output zero.
  Var block_attention(Var q, Var k, Var v, const Groups& qg, const Groups& kg,
                      double scale);

  /// GCN mixing with attention-derived adjacency: per group, adjacency is the
  /// row-normalized symmetrization of softmax(q k^T * scale); returns adj * x.
  Var block_adjacency_mix(Var x, Var q, Var k, const Groups& groups, double scale);

  /// Row g of the output is the mean of x over groups[g] (zero when empty).
  Var segment_mean(Var x, const Groups& groups, int out_rows);

  /// out.row(i) = x.row(rows[i]).
  Var gather(Var x, const std::vector<int>& rows);

  const Mat& value(Var v) const { return nodes_[v.idx].value; }
  double scalar(Var v) const { return nodes_[v.idx].value(0, 0); }

  /// Seeds d(root)=1 (root must be 1x1) and accumulates parameter gradients.
  void backward(Var root);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Mat value;
    Mat grad;
    bool requires_grad = false;
    std::function<void(Tape&, Node&)> back;  // may be empty
  };

  int push(Mat value, bool requires_grad, std::function<void(Tape&, Node&)> back);
  Node& node(Var v) { return nodes_[v.idx]; }
  void accumulate(int idx, const Mat& g);

  std::vector<Node> nodes_;
};

}  // namespace samarl::nn
