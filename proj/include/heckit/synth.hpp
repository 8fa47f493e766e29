#pragma once

#include "heckit/heckman.hpp"
#include "heckit/linalg.hpp"
#include "heckit/model_frame.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace heckit::synth {

enum class CovariateLaw { standard_normal, bernoulli_half };

struct DgpConfig {
    // Shared covariates, then excluded instruments, then the intercept.
    Vector selection_coef;
    // Shared covariates, then the intercept.
    Vector outcome_coef;
    double rho = 0.5;
    double sigma_u = 1.0;
    Index n = 2000;
    CovariateLaw covariate_law = CovariateLaw::standard_normal;
    std::uint64_t seed = 7;
    std::uint64_t stream = 0;

    Index shared() const { return outcome_coef.size() - 1; }
    Index excluded() const { return selection_coef.size() - outcome_coef.size(); }
};

// Two shared covariates, one excluded instrument, selection intercept 0.
DgpConfig default_config();

void validate(const DgpConfig& config);

struct SyntheticSample {
    ModelFrame frame;
    DgpConfig truth;
    Vector latent;            // outcome v* for every row
    Vector selection_index;   // w'gamma for every row
    Vector selection_error;   // e
    Vector outcome_error;     // u
};

SyntheticSample generate(const DgpConfig& config);

struct ParameterRecovery {
    std::string name;
    double truth = 0.0;
    double mean_estimate = 0.0;
    double bias = 0.0;
    double rmse = 0.0;
    double mc_se = 0.0;
    double coverage = 0.0;         // heckman_corrected 95% intervals
    double coverage_robust = 0.0;  // plain_robust 95% intervals
    double naive_mean = 0.0;       // OLS on selected rows without lambda
    double naive_bias = 0.0;
    double two_step_closer = 0.0;  // share of reps where the two-step error is smaller than the naive one
};

struct RecoveryReport {
    DgpConfig config;
    int reps = 0;
    int failures = 0;
    std::vector<std::string> failure_messages;
    double mean_selection_rate = 0.0;
    std::vector<ParameterRecovery> parameters;

    const ParameterRecovery& parameter(const std::string& name) const;
};

struct MonteCarloOptions {
    unsigned threads = 1;
};

// Replication r draws from stream r of the configured seed.
RecoveryReport monte_carlo(const DgpConfig& config, int reps, const MonteCarloOptions& options = {});

std::string render_report_csv(const RecoveryReport& report);
std::string render_report_markdown(const RecoveryReport& report);

}  // namespace heckit::synth
