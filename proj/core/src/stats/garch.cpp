#include "abm/stats/garch.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nelder_mead.hpp"

namespace abm::stats {

namespace {

struct Params {
  double omega, alpha, beta, nu;
};

// omega > 0, alpha, beta >= 0 with alpha + beta < 1, nu > 2.
Params unpack(const std::vector<double>& t, bool student) {
  const double ea = std::exp(t[1]), eb = std::exp(t[2]);
  const double d = 1.0 + ea + eb;
  return {std::exp(t[0]), ea / d, eb / d, student ? 2.0 + std::exp(t[3]) : 0.0};
}

std::vector<double> pack(double omega, double alpha, double beta, double nu, bool student) {
  const double rest = 1.0 - alpha - beta;
  std::vector<double> t{std::log(omega), std::log(alpha / rest), std::log(beta / rest)};
  if (student) t.push_back(std::log(nu - 2.0));
  return t;
}

// Negative log-likelihood on the unit-variance series e.
double nll(const std::vector<double>& e, const Params& p, bool student, std::vector<double>* sigma2 = nullptr) {
  const std::size_t n = e.size();
  double s2 = 1.0;
  double ll = 0.0;
  double tconst = 0.0;
  if (student) {
    tconst = std::lgamma(0.5 * (p.nu + 1.0)) - std::lgamma(0.5 * p.nu) - 0.5 * std::log(std::numbers::pi * (p.nu - 2.0));
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) s2 = p.omega + p.alpha * e[t - 1] * e[t - 1] + p.beta * s2;
    if (sigma2) (*sigma2)[t] = s2;
    const double q = e[t] * e[t] / s2;
    if (student) {
      ll += tconst - 0.5 * std::log(s2) - 0.5 * (p.nu + 1.0) * std::log1p(q / (p.nu - 2.0));
    } else {
      ll += -0.5 * (std::log(2.0 * std::numbers::pi) + std::log(s2) + q);
    }
  }
  return -ll;
}

}  // namespace

GarchFit garch_filter(std::span<const double> x, Innovation innovation) {
  if (x.size() < 10) throw std::invalid_argument("garch_filter: need at least 10 observations");
  const auto n = static_cast<double>(x.size());
  GarchFit fit;
  fit.innovation = innovation;
  for (double v : x) fit.mean += v;
  fit.mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - fit.mean) * (v - fit.mean);
  var /= n;
  if (!(var > 0.0)) throw std::invalid_argument("garch_filter: constant series");
  const double sd = std::sqrt(var);

  // Fit on the standardised series so the optimiser sees O(1) parameters.
  std::vector<double> e(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) e[i] = (x[i] - fit.mean) / sd;

  const bool student = innovation == Innovation::student_t;
  auto objective = [&](const std::vector<double>& t) { return nll(e, unpack(t, student), student); };

  // Start from the most likely of a few typical parameter sets.
  const double starts[][2] = {{0.05, 0.90}, {0.10, 0.80}, {0.20, 0.50}, {0.02, 0.10}};
  std::vector<double> start;
  double start_value = INFINITY;
  for (const auto& s : starts) {
    auto t = pack(1.0 - s[0] - s[1], s[0], s[1], 8.0, student);
    const double v = objective(t);
    if (v < start_value) {
      start_value = v;
      start = std::move(t);
    }
  }
  auto first = detail::nelder_mead(objective, start);
  // One restart from the optimum guards against a collapsed simplex.
  auto best = detail::nelder_mead(objective, first.x, 0.1);
  best.evaluations += first.evaluations;

  const Params p = unpack(best.x, student);
  fit.omega = p.omega * var;
  fit.alpha = p.alpha;
  fit.beta = p.beta;
  if (student) fit.nu = p.nu;
  fit.evaluations = best.evaluations;
  fit.converged = best.converged && std::isfinite(best.value);
  fit.igarch = p.alpha + p.beta > 1.0 - 1e-4;

  std::vector<double> s2(e.size());
  const double value = nll(e, p, student, &s2);
  // Undo the standardisation: the Jacobian adds -n log(sd).
  fit.loglik = -value - n * std::log(sd);
  fit.sigma.resize(e.size());
  fit.z.resize(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double s = std::sqrt(s2[i]);
    fit.sigma[i] = s * sd;
    fit.z[i] = e[i] / s;
  }
  if (!fit.converged) fit.diagnostics = "optimiser stopped at the evaluation limit";
  if (fit.igarch) fit.diagnostics += fit.diagnostics.empty() ? "alpha + beta at the unit boundary" : "; alpha + beta at the unit boundary";
  return fit;
}

}  // namespace abm::stats
