#pragma once

namespace heckit {

double normal_pdf(double z);
double log_normal_pdf(double z);
double normal_cdf(double z);

// Accurate for very negative z, where normal_cdf underflows.
double log_normal_cdf(double z);

// phi(z) / Phi(z).
double inverse_mills(double z);

// lambda(z) * (lambda(z) + z), always strictly inside (0, 1).
double inverse_mills_delta(double z);

}  // namespace heckit
