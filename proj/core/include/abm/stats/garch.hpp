#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace abm::stats {

enum class Innovation { gaussian, student_t };

/// GARCH(1,1) maximum-likelihood fit:
///   sigma2_t = omega + alpha * e_{t-1}^2 + beta * sigma2_{t-1}
/// on the demeaned input. sigma2_0 is the sample variance.
struct GarchFit {
  Innovation innovation{Innovation::gaussian};
  double mean{0.0};
  double omega{0.0};
  double alpha{0.0};
  double beta{0.0};
  std::optional<double> nu;  // Student-t degrees of freedom
  double loglik{0.0};
  std::vector<double> sigma;  // conditional standard deviation
  std::vector<double> z;      // standardised residuals e_t / sigma_t
  bool converged{false};
  bool igarch{false};  // alpha + beta pressed against 1
  int evaluations{0};
  std::string diagnostics;
};

/// Throws on fewer than 10 observations or a constant series. Optimiser
/// trouble is reported through `converged` and `diagnostics`, not thrown.
[[nodiscard]] GarchFit garch_filter(std::span<const double> x, Innovation innovation = Innovation::gaussian);

}  // namespace abm::stats
