#include "heckit/synth.hpp"

#include "heckit/errors.hpp"
#include "heckit/philox.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <thread>

namespace heckit::synth {
namespace {

constexpr double kZ95 = 1.959963984540054;

struct RepResult {
    std::optional<std::string> error;
    Vector estimate;
    Vector se_corrected;
    Vector se_robust;
    Vector naive;
    double selection_rate = 0.0;
};

RepResult run_rep(const DgpConfig& base, std::uint64_t rep) {
    RepResult r;
    DgpConfig config = base;
    config.stream = rep;
    try {
        const SyntheticSample s = generate(config);
        r.selection_rate = static_cast<double>(s.frame.n_selected()) / static_cast<double>(s.frame.n_total());
        HeckmanOptions opts;
        opts.vcov = VcovVariant::heckman_corrected;
        const HeckmanFit fit = fit_two_step(s.frame, opts);
        if (!fit.corrected) throw DataError("every row selected");
        r.estimate = fit.outcome_coef;
        r.se_corrected = fit.outcome_vcov.diagonal().cwiseSqrt();
        r.se_robust = plain_robust_vcov(fit).diagonal().cwiseSqrt();
        r.naive = ols(s.frame.outcome_y, s.frame.outcome_x).coef;
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

DgpConfig default_config() {
    DgpConfig c;
    c.selection_coef = Vector(4);
    c.selection_coef << 1.0, -1.0, 1.0, 0.0;
    c.outcome_coef = Vector(3);
    c.outcome_coef << 1.0, -0.5, 1.0;
    return c;
}

void validate(const DgpConfig& c) {
    if (!(std::abs(c.rho) < 1.0)) throw std::invalid_argument("rho must lie strictly between -1 and 1");
    if (!(c.sigma_u > 0.0)) throw std::invalid_argument("sigma_u must be positive");
    if (c.n < 50) throw std::invalid_argument("n must be at least 50");
    if (c.outcome_coef.size() < 1) throw std::invalid_argument("outcome coefficients need an intercept");
    if (c.selection_coef.size() < c.outcome_coef.size()) {
        throw std::invalid_argument("selection coefficients must cover the shared covariates and the intercept");
    }
    if (!c.selection_coef.allFinite() || !c.outcome_coef.allFinite()) {
        throw std::invalid_argument("coefficients must be finite");
    }
}

SyntheticSample generate(const DgpConfig& config) {
    validate(config);
    const Index n = config.n;
    const Index shared = config.shared();
    const Index excluded = config.excluded();
    const Index ks = shared + excluded + 1;
    const Index ko = shared + 1;

    PhiloxStream rng(config.seed, config.stream);
    auto draw_covariate = [&] {
        if (config.covariate_law == CovariateLaw::bernoulli_half) return rng.uniform() < 0.5 ? 0.0 : 1.0;
        return rng.normal();
    };

    Matrix w(n, ks);
    SyntheticSample s;
    s.truth = config;
    s.latent.resize(n);
    s.selection_index.resize(n);
    s.selection_error.resize(n);
    s.outcome_error.resize(n);
    Vector v(n);
    const double tail = std::sqrt(1.0 - config.rho * config.rho);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < ks - 1; ++j) w(i, j) = draw_covariate();
        w(i, ks - 1) = 1.0;
        const double e = rng.normal();
        const double u = config.sigma_u * (config.rho * e + tail * rng.normal());
        s.selection_index(i) = w.row(i).dot(config.selection_coef);
        s.selection_error(i) = e;
        s.outcome_error(i) = u;
        double xb = config.outcome_coef(ko - 1);
        for (Index j = 0; j < shared; ++j) xb += w(i, j) * config.outcome_coef(j);
        s.latent(i) = xb + u;
        v(i) = s.selection_index(i) + e > 0.0 ? 1.0 : 0.0;
    }

    ModelFrame& f = s.frame;
    f.selection_y = v;
    f.selection_x = w;
    for (Index j = 0; j < shared; ++j) f.selection_columns.push_back("x" + std::to_string(j + 1));
    for (Index j = 0; j < excluded; ++j) f.selection_columns.push_back("z" + std::to_string(j + 1));
    f.selection_columns.push_back("const");
    for (Index j = 0; j < shared; ++j) f.outcome_columns.push_back("x" + std::to_string(j + 1));
    f.outcome_columns.push_back("const");

    const Index m = static_cast<Index>((v.array() == 1.0).count());
    f.outcome_y.resize(m);
    f.outcome_x.resize(m, ko);
    Index k = 0;
    for (Index i = 0; i < n; ++i) {
        f.selection_rows.push_back("r" + std::to_string(i + 1));
        if (v(i) != 1.0) continue;
        f.outcome_y(k) = s.latent(i);
        f.outcome_x.row(k).head(shared) = w.row(i).head(shared);
        f.outcome_x(k, ko - 1) = 1.0;
        f.outcome_rows.push_back(f.selection_rows.back());
        f.selected.push_back(i);
        ++k;
    }
    return s;
}

const ParameterRecovery& RecoveryReport::parameter(const std::string& name) const {
    for (const auto& p : parameters) {
        if (p.name == name) return p;
    }
    throw std::out_of_range("no parameter named '" + name + "'");
}

RecoveryReport monte_carlo(const DgpConfig& config, int reps, const MonteCarloOptions& options) {
    validate(config);
    if (reps < 50) throw std::invalid_argument("monte_carlo needs at least 50 replications");

    std::vector<RepResult> results(static_cast<std::size_t>(reps));
    const unsigned threads = std::max(1u, std::min(options.threads, static_cast<unsigned>(reps)));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int r = next++; r < reps; r = next++) {
            results[static_cast<std::size_t>(r)] = run_rep(config, static_cast<std::uint64_t>(r));
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    RecoveryReport report;
    report.config = config;
    report.reps = reps;

    const Index shared = config.shared();
    std::vector<std::string> names;
    std::vector<double> truth;
    for (Index j = 0; j < shared; ++j) {
        names.push_back("x" + std::to_string(j + 1));
        truth.push_back(config.outcome_coef(j));
    }
    names.emplace_back("const");
    truth.push_back(config.outcome_coef(shared));
    names.emplace_back("imr_coef");
    truth.push_back(config.rho * config.sigma_u);

    const std::size_t p = names.size();
    std::vector<double> sum(p, 0.0), sum_sq_err(p, 0.0), sum_sq(p, 0.0), covered(p, 0.0), covered_robust(p, 0.0),
        naive_sum(p, 0.0), closer(p, 0.0);
    int used = 0;
    double rate_sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto& res = results[static_cast<std::size_t>(r)];
        if (res.error) {
            ++report.failures;
            report.failure_messages.push_back("rep " + std::to_string(r) + ": " + *res.error);
            continue;
        }
        ++used;
        rate_sum += res.selection_rate;
        for (std::size_t j = 0; j < p; ++j) {
            const Index idx = static_cast<Index>(j);
            const double est = res.estimate(idx);
            const double err = est - truth[j];
            sum[j] += est;
            sum_sq[j] += est * est;
            sum_sq_err[j] += err * err;
            if (std::abs(err) <= kZ95 * res.se_corrected(idx)) covered[j] += 1.0;
            if (std::abs(err) <= kZ95 * res.se_robust(idx)) covered_robust[j] += 1.0;
            if (idx < res.naive.size()) {
                naive_sum[j] += res.naive(idx);
                if (std::abs(err) < std::abs(res.naive(idx) - truth[j])) closer[j] += 1.0;
            }
        }
    }
    report.mean_selection_rate = used ? rate_sum / used : std::nan("");
    for (std::size_t j = 0; j < p; ++j) {
        ParameterRecovery pr;
        pr.name = names[j];
        pr.truth = truth[j];
        if (used > 0) {
            const double u = static_cast<double>(used);
            pr.mean_estimate = sum[j] / u;
            pr.bias = pr.mean_estimate - truth[j];
            pr.rmse = std::sqrt(sum_sq_err[j] / u);
            const double var = used > 1 ? std::max(0.0, (sum_sq[j] - u * pr.mean_estimate * pr.mean_estimate) / (u - 1.0)) : 0.0;
            pr.mc_se = std::sqrt(var / u);
            pr.coverage = covered[j] / u;
            pr.coverage_robust = covered_robust[j] / u;
            const bool has_naive = names[j] != "imr_coef";
            pr.naive_mean = has_naive ? naive_sum[j] / u : std::nan("");
            pr.naive_bias = has_naive ? pr.naive_mean - truth[j] : std::nan("");
            pr.two_step_closer = has_naive ? closer[j] / u : std::nan("");
        } else {
            pr.mean_estimate = pr.bias = pr.rmse = pr.mc_se = pr.coverage = pr.coverage_robust = std::nan("");
            pr.naive_mean = pr.naive_bias = pr.two_step_closer = std::nan("");
        }
        report.parameters.push_back(pr);
    }
    return report;
}

std::string render_report_csv(const RecoveryReport& report) {
    std::string out =
        "parameter,truth,mean_estimate,bias,rmse,mc_se,coverage_heckman,coverage_robust,naive_mean,naive_bias,"
        "two_step_closer\n";
    for (const auto& p : report.parameters) {
        out += p.name + "," + fmt(p.truth) + "," + fmt(p.mean_estimate) + "," + fmt(p.bias) + "," + fmt(p.rmse) +
               "," + fmt(p.mc_se) + "," + fmt(p.coverage) + "," + fmt(p.coverage_robust) + "," + fmt(p.naive_mean) +
               "," + fmt(p.naive_bias) + "," + fmt(p.two_step_closer) + "\n";
    }
    return out;
}

std::string render_report_markdown(const RecoveryReport& report) {
    const auto& c = report.config;
    std::string out = "# Monte Carlo recovery\n\n";
    out += "- replications: " + std::to_string(report.reps) + " (" + std::to_string(report.failures) + " failed)\n";
    out += "- n: " + std::to_string(c.n) + ", rho: " + fmt(c.rho) + ", sigma_u: " + fmt(c.sigma_u) +
           ", seed: " + std::to_string(c.seed) + "\n";
    out += "- covariates: " + std::string(c.covariate_law == CovariateLaw::standard_normal ? "standard normal"
                                                                                            : "Bernoulli(0.5)") +
           ", " + std::to_string(c.shared()) + " shared, " + std::to_string(c.excluded()) + " excluded\n";
    out += "- mean selection rate: " + fmt(report.mean_selection_rate) + "\n\n";
    out += "| parameter | truth | mean | bias | RMSE | MC s.e. | coverage (two-step) | coverage (HC1) | naive mean | "
           "naive bias |\n";
    out += "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& p : report.parameters) {
        out += "| " + p.name + " | " + fmt(p.truth) + " | " + fmt(p.mean_estimate) + " | " + fmt(p.bias) + " | " +
               fmt(p.rmse) + " | " + fmt(p.mc_se) + " | " + fmt(p.coverage) + " | " + fmt(p.coverage_robust) +
               " | " + fmt(p.naive_mean) + " | " + fmt(p.naive_bias) + " |\n";
    }
    if (!report.failure_messages.empty()) {
        out += "\nFailed replications:\n\n";
        for (const auto& m : report.failure_messages) out += "- " + m + "\n";
    }
    return out;
}

}  // namespace heckit::synth
