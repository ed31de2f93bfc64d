#pragma once

#include <vector>

#include "rasim/util.hpp"

namespace rasim {

// Two-hidden-layer tanh MLP, linear output, double precision. Parameters
// live in one flat vector (W1,b1,W2,b2,W3,b3) so optimizers and gradient
// checks can treat the network as a plain parameter vector.
class Mlp {
 public:
  Mlp(int in, int hidden, int out);

  void init(Rng& rng);  // scaled-uniform fan-in init, zero biases

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  int param_count() const { return static_cast<int>(params_.size()); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // activations of one forward pass, kept for the matching backward pass
  struct Trace {
    std::vector<double> x, a1, a2, out;  // a1/a2 are post-tanh
  };

  void forward(const std::vector<double>& x, Trace& tr) const;
  std::vector<double> forward(const std::vector<double>& x) const;

  // accumulates d(loss)/d(params) into grad given d(loss)/d(out); grad must
  // be param_count() long; x/a1/a2 come from the trace
  void backward(const Trace& tr, const std::vector<double>& dout, std::vector<double>& grad) const;

 private:
  int in_, hidden_, out_;
  std::vector<double> params_;
  // offsets into params_
  int w1_, b1_, w2_, b2_, w3_, b3_;
};

// Adam over a flat parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(int n, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(std::vector<double>& params, const std::vector<double>& grad);
  void reset();
  double lr() const { return lr_; }

 private:
  double lr_ = 0.0, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long long t_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace rasim
