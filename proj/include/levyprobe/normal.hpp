#pragma once

namespace levyprobe {

double normal_cdf(double z);

// Standard normal quantile, computed by safeguarded Newton iteration on
// erfc-based normal_cdf; absolute error well below 1e-12 over (0,1).
double normal_quantile(double p);

}  // namespace levyprobe
