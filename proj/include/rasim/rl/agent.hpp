#pragma once

#include <map>
#include <string>
#include <vector>

#include "rasim/rl/net.hpp"
#include "rasim/util.hpp"

namespace rasim {

struct AgentParams {
  int state_dim = 0;
  int action_dim = 0;
  int hidden = 64;
  double log_std_init = -0.5;
  double clip = 0.2;
  double lr = 3e-4;
  double gamma = 0.99;
  double lambda = 0.95;
  int epochs = 10;
  int minibatch = 64;
};

struct Transition {
  std::vector<double> state;
  std::vector<double> action;
  double logp = 0.0;
  double value = 0.0;
  double reward = 0.0;
  bool done = false;
};

struct UpdateDiagnostics {
  double policy_loss = 0.0;  // mean negative clipped surrogate
  double value_loss = 0.0;   // mean squared error (halved)
  double kl = 0.0;           // mean(logp_old - logp_new)
  int minibatches = 0;
  bool aborted = false;  // non-finite loss tripped the guard; params restored
};

// Actor-critic with a diagonal-Gaussian head: tanh MLP mean, learnable
// state-independent log-std, separate critic, separate Adam optimizers.
class PpoAgent {
 public:
  PpoAgent(const AgentParams& p, uint64_t seed);

  const AgentParams& config() const { return p_; }

  // mean action (deterministic) or a Gaussian sample; records the sample's
  // log-density and the critic value when requested
  std::vector<double> act(const std::vector<double>& state, Rng& rng, bool deterministic,
                          double* logp = nullptr, double* value = nullptr) const;

  double value(const std::vector<double>& state) const;
  double log_prob(const std::vector<double>& state, const std::vector<double>& action) const;

  // mean clipped-surrogate loss over a batch at the current parameters, with
  // optional analytic gradients; shares the per-sample code path update()
  // steps along, and uses the advantages as given (no normalization)
  double surrogate(const std::vector<Transition>& batch, const std::vector<double>& adv,
                   std::vector<double>* actor_grad = nullptr,
                   std::vector<double>* std_grad = nullptr) const;

  // GAE + clipped surrogate over the whole batch; transitions must be in
  // collection order with done marking episode ends
  UpdateDiagnostics update(const std::vector<Transition>& batch, Rng& rng);

  const std::vector<double>& log_std() const { return log_std_; }
  std::vector<double>& log_std() { return log_std_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  Mlp& actor() { return actor_; }
  Mlp& critic() { return critic_; }

  void save(const std::string& path, const std::map<std::string, std::string>& meta) const;
  static PpoAgent load(const std::string& path, std::map<std::string, std::string>* meta);

 private:
  // one sample's negative clipped-surrogate term; accumulates mean-scaled
  // gradients into the buffers and reports the fresh log-density
  double surrogate_term(const Transition& tr, double a_hat, double inv, Mlp::Trace& atr,
                        std::vector<double>& dmean, std::vector<double>& actor_grad,
                        std::vector<double>& std_grad, double* logp_out) const;

  AgentParams p_;
  Mlp actor_, critic_;
  std::vector<double> log_std_;
  Adam actor_opt_, std_opt_, critic_opt_;
};

// advantage estimates exposed for tests
std::vector<double> gae_advantages(const std::vector<Transition>& batch, double gamma,
                                   double lambda);

}  // namespace rasim
