#include <algorithm>
#include <cmath>
#include <limits>

#include "aim/analysis.hpp"

namespace aim {

GrowthFit ratio_growth_fit(const AIMSequences& seqs) {
  std::vector<double> ns;
  std::vector<double> ratios;
  for (int n = 1; n <= seqs.depth(); ++n) {
    const double prev = seqs.lambda[static_cast<std::size_t>(n - 1)].value();
    const double cur = seqs.lambda[static_cast<std::size_t>(n)].value();
    if (prev == 0.0 || !std::isfinite(prev) || !std::isfinite(cur)) {
      continue;
    }
    const double r = std::abs(cur / prev);
    if (std::isfinite(r)) {
      ns.push_back(n);
      ratios.push_back(r);
    }
  }
  if (ratios.size() < kMinGrowthSamples) {
    throw Error(ErrorCode::InsufficientData, std::to_string(ratios.size()) + " valid ratio samples, at least " +
                                                 std::to_string(kMinGrowthSamples) + " needed");
  }
  const std::size_t start = ratios.size() / 2;
  const auto count = static_cast<double>(ratios.size() - start);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = start; i < ratios.size(); ++i) {
    sx += ns[i];
    sy += ratios[i];
    sxx += ns[i] * ns[i];
    sxy += ns[i] * ratios[i];
  }
  GrowthFit fit;
  fit.samples = static_cast<int>(count);
  const double den = count * sxx - sx * sx;
  fit.a1 = den > 0.0 ? (count * sxy - sx * sy) / den : 0.0;
  fit.a0 = (sy - fit.a1 * sx) / count;
  // Slopes indistinguishable from rounding noise count as zero growth.
  const bool flat = fit.a1 <= 1e-10 * std::max(1.0, std::abs(fit.a0));
  fit.rho = flat ? std::numeric_limits<double>::infinity() : 1.0 / fit.a1;
  return fit;
}

}  // namespace aim
