#include "rasim/rl/agent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rasim {

namespace {
constexpr double kLogRoot2Pi = 0.91893853320467274178032973640562;  // log sqrt(2*pi)
}

PpoAgent::PpoAgent(const AgentParams& p, uint64_t seed)
    : p_(p),
      actor_(p.state_dim, p.hidden, p.action_dim),
      critic_(p.state_dim, p.hidden, 1),
      log_std_(p.action_dim, p.log_std_init),
      actor_opt_(0, p.lr),
      std_opt_(0, p.lr),
      critic_opt_(0, p.lr) {
  if (p.clip <= 0.0 || p.clip >= 1.0) throw std::invalid_argument("agent: clip must be in (0,1)");
  Rng rng(derive_seed(seed, 0x696e6974ULL));
  actor_.init(rng);
  critic_.init(rng);
  actor_opt_ = Adam(actor_.param_count(), p.lr);
  std_opt_ = Adam(p.action_dim, p.lr);
  critic_opt_ = Adam(critic_.param_count(), p.lr);
}

std::vector<double> PpoAgent::act(const std::vector<double>& state, Rng& rng, bool deterministic,
                                  double* logp, double* value) const {
  std::vector<double> mean = actor_.forward(state);
  std::vector<double> action = mean;
  if (!deterministic)
    for (int i = 0; i < p_.action_dim; ++i) action[i] += std::exp(log_std_[i]) * rng.normal();
  if (logp) {
    double lp = 0.0;
    for (int i = 0; i < p_.action_dim; ++i) {
      const double sigma = std::exp(log_std_[i]);
      const double zscore = (action[i] - mean[i]) / sigma;
      lp += -0.5 * zscore * zscore - log_std_[i] - kLogRoot2Pi;
    }
    *logp = lp;
  }
  if (value) *value = critic_.forward(state)[0];
  return action;
}

double PpoAgent::value(const std::vector<double>& state) const {
  return critic_.forward(state)[0];
}

double PpoAgent::log_prob(const std::vector<double>& state,
                          const std::vector<double>& action) const {
  const std::vector<double> mean = actor_.forward(state);
  double lp = 0.0;
  for (int i = 0; i < p_.action_dim; ++i) {
    const double sigma = std::exp(log_std_[i]);
    const double zscore = (action[i] - mean[i]) / sigma;
    lp += -0.5 * zscore * zscore - log_std_[i] - kLogRoot2Pi;
  }
  return lp;
}

double PpoAgent::surrogate_term(const Transition& tr, double a_hat, double inv, Mlp::Trace& atr,
                                std::vector<double>& dmean, std::vector<double>& actor_grad,
                                std::vector<double>& std_grad, double* logp_out) const {
  actor_.forward(tr.state, atr);
  double logp_new = 0.0;
  for (int i = 0; i < p_.action_dim; ++i) {
    const double sigma = std::exp(log_std_[i]);
    const double zscore = (tr.action[i] - atr.out[i]) / sigma;
    logp_new += -0.5 * zscore * zscore - log_std_[i] - kLogRoot2Pi;
  }
  const double ratio = std::exp(logp_new - tr.logp);
  const double clipped = std::clamp(ratio, 1.0 - p_.clip, 1.0 + p_.clip);
  const double surr = std::min(ratio * a_hat, clipped * a_hat);

  // gradient flows only where the unclipped branch is active
  if (ratio * a_hat <= clipped * a_hat) {
    const double dsurr_dlogp = -a_hat * ratio * inv;  // d(-surr)/dlogp_new, mean-scaled
    for (int i = 0; i < p_.action_dim; ++i) {
      const double sigma = std::exp(log_std_[i]);
      const double diff = tr.action[i] - atr.out[i];
      dmean[i] = dsurr_dlogp * (diff / (sigma * sigma));
      std_grad[i] += dsurr_dlogp * (diff * diff / (sigma * sigma) - 1.0);
    }
    actor_.backward(atr, dmean, actor_grad);
  }
  if (logp_out) *logp_out = logp_new;
  return -surr;
}

double PpoAgent::surrogate(const std::vector<Transition>& batch, const std::vector<double>& adv,
                           std::vector<double>* actor_grad, std::vector<double>* std_grad) const {
  const int n = static_cast<int>(batch.size());
  if (n == 0) return 0.0;
  if (static_cast<int>(adv.size()) != n)
    throw std::invalid_argument("surrogate: batch/advantage size mismatch");
  std::vector<double> agrad_local, sgrad_local;
  std::vector<double>& agrad = actor_grad ? *actor_grad : agrad_local;
  std::vector<double>& sgrad = std_grad ? *std_grad : sgrad_local;
  agrad.assign(actor_.param_count(), 0.0);
  sgrad.assign(p_.action_dim, 0.0);
  Mlp::Trace atr;
  std::vector<double> dmean(p_.action_dim);
  const double inv = 1.0 / n;
  double loss = 0.0;
  for (int s = 0; s < n; ++s)
    loss += surrogate_term(batch[s], adv[s], inv, atr, dmean, agrad, sgrad, nullptr);
  return loss * inv;
}

std::vector<double> gae_advantages(const std::vector<Transition>& batch, double gamma,
                                   double lambda) {
  const int n = static_cast<int>(batch.size());
  std::vector<double> adv(n, 0.0);
  double run = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    const double next_value = (batch[i].done || i + 1 == n) ? 0.0 : batch[i + 1].value;
    const double not_done = batch[i].done ? 0.0 : 1.0;
    const double delta = batch[i].reward + gamma * next_value * not_done - batch[i].value;
    run = delta + gamma * lambda * not_done * run;
    adv[i] = run;
  }
  return adv;
}

UpdateDiagnostics PpoAgent::update(const std::vector<Transition>& batch, Rng& rng) {
  UpdateDiagnostics diag;
  const int n = static_cast<int>(batch.size());
  if (n == 0) return diag;

  std::vector<double> adv = gae_advantages(batch, p_.gamma, p_.lambda);
  std::vector<double> returns(n);
  for (int i = 0; i < n; ++i) returns[i] = adv[i] + batch[i].value;

  // whole-batch advantage normalization
  double mean = 0.0;
  for (double a : adv) mean += a;
  mean /= n;
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  const double stddev = std::sqrt(var / n) + 1e-8;
  for (double& a : adv) a = (a - mean) / stddev;

  // snapshot for the non-finite guard
  const std::vector<double> actor_snap = actor_.params();
  const std::vector<double> std_snap = log_std_;
  const std::vector<double> critic_snap = critic_.params();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> actor_grad(actor_.param_count());
  std::vector<double> std_grad(p_.action_dim);
  std::vector<double> critic_grad(critic_.param_count());
  Mlp::Trace atr, ctr;
  std::vector<double> dmean(p_.action_dim);
  std::vector<double> dvalue(1);

  double policy_loss_sum = 0.0, value_loss_sum = 0.0, kl_sum = 0.0;
  long long sample_count = 0;

  for (int epoch = 0; epoch < p_.epochs; ++epoch) {
    // Fisher-Yates with the deterministic generator
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(i + 1)]);
    for (int start = 0; start < n; start += p_.minibatch) {
      const int end = std::min(n, start + p_.minibatch);
      const double inv = 1.0 / (end - start);
      std::fill(actor_grad.begin(), actor_grad.end(), 0.0);
      std::fill(std_grad.begin(), std_grad.end(), 0.0);
      std::fill(critic_grad.begin(), critic_grad.end(), 0.0);
      double batch_policy_loss = 0.0, batch_value_loss = 0.0;

      for (int s = start; s < end; ++s) {
        const Transition& tr = batch[order[s]];
        const double a_hat = adv[order[s]];

        double logp_new = 0.0;
        batch_policy_loss +=
            surrogate_term(tr, a_hat, inv, atr, dmean, actor_grad, std_grad, &logp_new);
        kl_sum += tr.logp - logp_new;
        ++sample_count;

        critic_.forward(tr.state, ctr);
        const double err = ctr.out[0] - returns[order[s]];
        batch_value_loss += 0.5 * err * err;
        dvalue[0] = err * inv;
        critic_.backward(ctr, dvalue, critic_grad);
      }

      policy_loss_sum += batch_policy_loss * inv;
      value_loss_sum += batch_value_loss * inv;
      ++diag.minibatches;

      if (!std::isfinite(batch_policy_loss) || !std::isfinite(batch_value_loss)) {
        actor_.params() = actor_snap;
        log_std_ = std_snap;
        critic_.params() = critic_snap;
        diag.aborted = true;
        return diag;
      }

      actor_opt_.step(actor_.params(), actor_grad);
      std_opt_.step(log_std_, std_grad);
      critic_opt_.step(critic_.params(), critic_grad);
    }
  }

  for (double v : actor_.params())
    if (!std::isfinite(v)) diag.aborted = true;
  for (double v : log_std_)
    if (!std::isfinite(v)) diag.aborted = true;
  if (diag.aborted) {
    actor_.params() = actor_snap;
    log_std_ = std_snap;
    critic_.params() = critic_snap;
    return diag;
  }

  diag.policy_loss = policy_loss_sum / diag.minibatches;
  diag.value_loss = value_loss_sum / diag.minibatches;
  diag.kl = sample_count ? kl_sum / sample_count : 0.0;
  return diag;
}

namespace {

void write_vector(std::ostream& out, const char* name, const std::vector<double>& v) {
  out << name << " " << v.size();
  char buf[40];
  for (double x : v) {
    std::snprintf(buf, sizeof(buf), " %.17g", x);
    out << buf;
  }
  out << "\n";
}

std::vector<double> read_vector(std::istream& in, const std::string& expect) {
  std::string name;
  size_t n;
  if (!(in >> name >> n) || name != expect)
    throw std::runtime_error("checkpoint: expected vector '" + expect + "'");
  std::vector<double> v(n);
  for (double& x : v)
    if (!(in >> x)) throw std::runtime_error("checkpoint: truncated vector " + expect);
  return v;
}

}  // namespace

void PpoAgent::save(const std::string& path,
                    const std::map<std::string, std::string>& meta) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  out << "rasim-agent v1\n";
  out << "state_dim " << p_.state_dim << "\n";
  out << "action_dim " << p_.action_dim << "\n";
  out << "hidden " << p_.hidden << "\n";
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "hyper %.17g %.17g %.17g %.17g %.17g %d %d\n", p_.log_std_init, p_.clip, p_.lr,
                p_.gamma, p_.lambda, p_.epochs, p_.minibatch);
  out << buf;
  out << "meta " << meta.size() << "\n";
  for (const auto& [k, v] : meta) out << k << " " << v << "\n";
  write_vector(out, "actor", actor_.params());
  write_vector(out, "log_std", log_std_);
  write_vector(out, "critic", critic_.params());
  if (!out) throw std::runtime_error("checkpoint: write failed " + path);
}

PpoAgent PpoAgent::load(const std::string& path, std::map<std::string, std::string>* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line != "rasim-agent v1") throw std::runtime_error("checkpoint: bad header in " + path);
  AgentParams p;
  std::string key;
  if (!(in >> key >> p.state_dim) || key != "state_dim")
    throw std::runtime_error("checkpoint: missing state_dim");
  if (!(in >> key >> p.action_dim) || key != "action_dim")
    throw std::runtime_error("checkpoint: missing action_dim");
  if (!(in >> key >> p.hidden) || key != "hidden")
    throw std::runtime_error("checkpoint: missing hidden");
  if (!(in >> key >> p.log_std_init >> p.clip >> p.lr >> p.gamma >> p.lambda >> p.epochs >>
        p.minibatch) ||
      key != "hyper")
    throw std::runtime_error("checkpoint: missing hyper line");
  size_t meta_n;
  if (!(in >> key >> meta_n) || key != "meta")
    throw std::runtime_error("checkpoint: missing meta count");
  std::map<std::string, std::string> local;
  for (size_t i = 0; i < meta_n; ++i) {
    std::string k, v;
    if (!(in >> k >> v)) throw std::runtime_error("checkpoint: truncated meta");
    local[k] = v;
  }
  PpoAgent agent(p, 0);
  agent.actor_.params() = read_vector(in, "actor");
  agent.log_std_ = read_vector(in, "log_std");
  agent.critic_.params() = read_vector(in, "critic");
  if (static_cast<int>(agent.actor_.params().size()) != agent.actor_.param_count() ||
      static_cast<int>(agent.log_std_.size()) != p.action_dim ||
      static_cast<int>(agent.critic_.params().size()) != agent.critic_.param_count())
    throw std::runtime_error("checkpoint: parameter shape mismatch");
  if (meta) *meta = std::move(local);
  return agent;
}

}  // namespace rasim
