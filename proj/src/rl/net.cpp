#include "rasim/rl/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rasim {

Mlp::Mlp(int in, int hidden, int out) : in_(in), hidden_(hidden), out_(out) {
  if (in < 1 || hidden < 1 || out < 1) throw std::invalid_argument("mlp: bad dimensions");
  w1_ = 0;
  b1_ = w1_ + hidden_ * in_;
  w2_ = b1_ + hidden_;
  b2_ = w2_ + hidden_ * hidden_;
  w3_ = b2_ + hidden_;
  b3_ = w3_ + out_ * hidden_;
  params_.assign(b3_ + out_, 0.0);
}

void Mlp::init(Rng& rng) {
  auto fill = [&](int off, int rows, int cols) {
    const double bound = std::sqrt(3.0 / cols);  // keeps layer output variance ~ input's
    for (int i = 0; i < rows * cols; ++i) params_[off + i] = rng.uniform(-bound, bound);
  };
  fill(w1_, hidden_, in_);
  fill(w2_, hidden_, hidden_);
  fill(w3_, out_, hidden_);
  for (int i = 0; i < hidden_; ++i) params_[b1_ + i] = params_[b2_ + i] = 0.0;
  for (int i = 0; i < out_; ++i) params_[b3_ + i] = 0.0;
}

void Mlp::forward(const std::vector<double>& x, Trace& tr) const {
  if (static_cast<int>(x.size()) != in_) throw std::invalid_argument("mlp: input size mismatch");
  tr.x = x;
  tr.a1.assign(hidden_, 0.0);
  tr.a2.assign(hidden_, 0.0);
  tr.out.assign(out_, 0.0);
  for (int i = 0; i < hidden_; ++i) {
    double s = params_[b1_ + i];
    const double* w = &params_[w1_ + i * in_];
    for (int j = 0; j < in_; ++j) s += w[j] * x[j];
    tr.a1[i] = std::tanh(s);
  }
  for (int i = 0; i < hidden_; ++i) {
    double s = params_[b2_ + i];
    const double* w = &params_[w2_ + i * hidden_];
    for (int j = 0; j < hidden_; ++j) s += w[j] * tr.a1[j];
    tr.a2[i] = std::tanh(s);
  }
  for (int i = 0; i < out_; ++i) {
    double s = params_[b3_ + i];
    const double* w = &params_[w3_ + i * hidden_];
    for (int j = 0; j < hidden_; ++j) s += w[j] * tr.a2[j];
    tr.out[i] = s;
  }
}

std::vector<double> Mlp::forward(const std::vector<double>& x) const {
  Trace tr;
  forward(x, tr);
  return tr.out;
}

void Mlp::backward(const Trace& tr, const std::vector<double>& dout,
                   std::vector<double>& grad) const {
  if (static_cast<int>(dout.size()) != out_ ||
      static_cast<int>(grad.size()) != param_count())
    throw std::invalid_argument("mlp: backward size mismatch");
  std::vector<double> d2(hidden_, 0.0), d1(hidden_, 0.0);
  for (int i = 0; i < out_; ++i) {
    const double g = dout[i];
    grad[b3_ + i] += g;
    double* gw = &grad[w3_ + i * hidden_];
    const double* w = &params_[w3_ + i * hidden_];
    for (int j = 0; j < hidden_; ++j) {
      gw[j] += g * tr.a2[j];
      d2[j] += g * w[j];
    }
  }
  for (int i = 0; i < hidden_; ++i) d2[i] *= 1.0 - tr.a2[i] * tr.a2[i];  // d tanh
  for (int i = 0; i < hidden_; ++i) {
    const double g = d2[i];
    if (g == 0.0) continue;
    grad[b2_ + i] += g;
    double* gw = &grad[w2_ + i * hidden_];
    const double* w = &params_[w2_ + i * hidden_];
    for (int j = 0; j < hidden_; ++j) {
      gw[j] += g * tr.a1[j];
      d1[j] += g * w[j];
    }
  }
  for (int i = 0; i < hidden_; ++i) d1[i] *= 1.0 - tr.a1[i] * tr.a1[i];
  for (int i = 0; i < hidden_; ++i) {
    const double g = d1[i];
    if (g == 0.0) continue;
    grad[b1_ + i] += g;
    double* gw = &grad[w1_ + i * in_];
    for (int j = 0; j < in_; ++j) gw[j] += g * tr.x[j];
  }
}

Adam::Adam(int n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw std::invalid_argument("adam: size mismatch");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

void Adam::reset() {
  t_ = 0;
  std::fill(m_.begin(), m_.end(), 0.0);
  std::fill(v_.begin(), v_.end(), 0.0);
}

}  // namespace rasim
