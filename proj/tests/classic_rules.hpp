#pragma once

// Coefficient-free reference rules, written independently of the library:
// the classic tempotron, PSD and multi-spike tempotron (TDP) updates on
// binary spike patterns. The TDP gradient solves the implicit-differentiation
// system of the threshold-crossing conditions by dense Gaussian elimination.

#include <cmath>
#include <span>
#include <vector>

#include "augspike/spike_core.hpp"
#include "augspike/sts.hpp"

namespace augspike::classic {

struct Kernel {
  double tau_m;
  double tau_s;
  double v0;

  explicit Kernel(const NeuronConfig& cfg) : tau_m(cfg.tau_m()), tau_s(cfg.tau_s()) {
    const double tp = tau_m * tau_s / (tau_m - tau_s) * std::log(tau_m / tau_s);
    v0 = 1.0 / (std::exp(-tp / tau_m) - std::exp(-tp / tau_s));
  }
  double K(double dt) const {
    return dt <= 0.0 ? 0.0 : v0 * (std::exp(-dt / tau_m) - std::exp(-dt / tau_s));
  }
  double Kdot(double dt) const {
    return dt <= 0.0 ? 0.0
                     : v0 * (-std::exp(-dt / tau_m) / tau_m +
                             std::exp(-dt / tau_s) / tau_s);
  }
};

// sum over input spikes strictly before t of K(t - t_i^j), per afferent.
inline std::vector<double> Credit(const SpikePattern& p, double t,
                                  const Kernel& k) {
  std::vector<double> g(p.n_afferents(), 0.0);
  for (const auto& s : p.spikes()) g[s.afferent] += k.K(t - s.time);
  return g;
}

inline std::vector<double> Tempotron(const SpikePattern& p, double t_max,
                                     bool is_target, bool fired, double eta,
                                     const NeuronConfig& cfg) {
  std::vector<double> dw(p.n_afferents(), 0.0);
  if (is_target == fired) return dw;
  const auto g = Credit(p, t_max, Kernel(cfg));
  for (std::size_t i = 0; i < dw.size(); ++i) dw[i] = (is_target ? eta : -eta) * g[i];
  return dw;
}

inline std::vector<double> Psd(const SpikePattern& p,
                               std::span<const double> desired,
                               std::span<const double> actual, double eta,
                               const NeuronConfig& cfg) {
  const Kernel k(cfg);
  std::vector<double> dw(p.n_afferents(), 0.0);
  for (double td : desired) {
    const auto g = Credit(p, td, k);
    for (std::size_t i = 0; i < dw.size(); ++i) dw[i] += eta * g[i];
  }
  for (double to : actual) {
    const auto g = Credit(p, to, k);
    for (std::size_t i = 0; i < dw.size(); ++i) dw[i] -= eta * g[i];
  }
  return dw;
}

// Solves A x = b in place by partial-pivot elimination.
inline std::vector<double> Solve(std::vector<std::vector<double>> a,
                                 std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

// d theta*/d w for the binary multi-spike neuron. Unknowns per afferent i:
// (dt_1 .. dt_m, dtheta). Rows: V(t_j) = theta for every preceding spike and
// V(t*) = theta at the tangency (dV/dt = 0 there).
inline std::vector<double> TdpGradient(const SpikePattern& p,
                                       std::span<const double> w,
                                       const CriticalThreshold& crit,
                                       const NeuronConfig& cfg) {
  const Kernel k(cfg);
  const auto& ts = crit.preceding_spikes;
  const std::size_t m = ts.size();
  const double theta = crit.theta_star;

  auto reset_sum = [&](double t, std::size_t upto) {
    double s = 0.0;
    for (std::size_t l = 0; l < upto; ++l) s += std::exp(-(t - ts[l]) / k.tau_m);
    return s;
  };
  auto slope = [&](double t, std::size_t upto) {
    double v = 0.0;
    for (const auto& s : p.spikes()) v += w[s.afferent] * k.Kdot(t - s.time);
    for (std::size_t l = 0; l < upto; ++l) {
      v += theta / k.tau_m * std::exp(-(t - ts[l]) / k.tau_m);
    }
    return v;
  };

  std::vector<std::vector<double>> a(m + 1, std::vector<double>(m + 1, 0.0));
  std::vector<std::vector<double>> credit(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double t = j < m ? ts[j] : crit.t_star;
    credit[j] = Credit(p, t, k);
    for (std::size_t l = 0; l < j; ++l) {
      a[j][l] = -theta / k.tau_m * std::exp(-(t - ts[l]) / k.tau_m);
    }
    if (j < m) a[j][j] = slope(t, j);
    a[j][m] = -(1.0 + reset_sum(t, j));
  }

  std::vector<double> grad(p.n_afferents(), 0.0);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    std::vector<double> b(m + 1);
    for (std::size_t j = 0; j <= m; ++j) b[j] = -credit[j][i];
    grad[i] = Solve(a, b)[m];
  }
  return grad;
}

}  // namespace augspike::classic
