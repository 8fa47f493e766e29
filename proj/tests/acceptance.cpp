// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any fails.

#include "heckit/normal.hpp"
#include "heckit/probit.hpp"
#include "heckit/render.hpp"
#include "heckit/replication.hpp"
#include "heckit/synth.hpp"

#include "test_support.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

using namespace heckit;
using heckit::testing::run_cli;
using heckit::testing::read_tree;
using heckit::testing::scratch_dir;
using heckit::testing::snapshot_path;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    std::ostringstream detail;
    bool ok = true;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int decimals = 3) { return round_fixed(v, decimals); }

bool stars_at_least(Stars got, Stars want) { return static_cast<int>(got) >= static_cast<int>(want); }

Check criterion1() {
    Check c;
    const auto t0 = Clock::now();
    synth::DgpConfig dgp = synth::default_config();
    dgp.seed = 20210130;
    const synth::RecoveryReport r =
        synth::monte_carlo(dgp, 200, {std::max(1u, std::thread::hardware_concurrency())});
    const double secs = seconds_since(t0);
    c.require(r.failures == 0, "no failed replications");
    for (const char* name : {"x1", "x2", "imr_coef"}) {
        const auto& p = r.parameter(name);
        c.detail << " " << name << ": bias " << fmt(p.bias, 4) << " coverage " << fmt(p.coverage, 3) << ";";
        c.require(std::abs(p.bias) < 0.05, std::string(name) + " |bias| < 0.05");
        c.require(p.coverage >= 0.93 && p.coverage <= 0.97, std::string(name) + " coverage in [0.93, 0.97]");
    }
    c.detail << " runtime " << fmt(secs, 1) << " s";
    c.require(secs < 60.0, "runtime < 60 s");
    return c;
}

double direct_loglik(const Vector& coef, const Vector& y, const Matrix& x) {
    double ll = 0.0;
    for (Index i = 0; i < y.size(); ++i) {
        const double p = 0.5 * std::erfc(-x.row(i).dot(coef) / std::sqrt(2.0));
        ll += y(i) == 1.0 ? std::log(p) : std::log1p(-p);
    }
    return ll;
}

Check criterion2() {
    Check c;
    const boost::math::normal_distribution<double> nd;
    double worst_q = 0.0;
    for (Index n : {7, 20, 101, 1000}) {
        for (Index ones = 1; ones < n; ones += std::max<Index>(1, n / 9)) {
            Vector y = Vector::Zero(n);
            y.head(ones).setOnes();
            const auto f = probit::fit(y, Matrix::Ones(n, 1));
            const double want = boost::math::quantile(nd, static_cast<double>(ones) / static_cast<double>(n));
            worst_q = std::max(worst_q, std::abs(f.coef(0) - want));
        }
    }
    c.detail << " intercept-only max error " << worst_q << ";";
    c.require(worst_q <= 1e-8, "intercept-only within 1e-8");

    Vector y(6);
    y << 0, 0, 1, 0, 1, 1;
    Matrix x(6, 2);
    x << 0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 1, 1;
    double best = -std::numeric_limits<double>::infinity();
    Vector arg(2);
    for (double a = -5; a <= 5; a += 0.05) {
        for (double b = -5; b <= 5; b += 0.05) {
            Vector t(2);
            t << b, a;
            const double ll = direct_loglik(t, y, x);
            if (ll > best) {
                best = ll;
                arg = t;
            }
        }
    }
    for (double step = 0.01; step > 1e-7; step /= 10) {
        const Vector centre = arg;
        for (int i = -20; i <= 20; ++i) {
            for (int j = -20; j <= 20; ++j) {
                Vector t = centre;
                t(0) += i * step;
                t(1) += j * step;
                const double ll = direct_loglik(t, y, x);
                if (ll > best) {
                    best = ll;
                    arg = t;
                }
            }
        }
    }
    const auto six = probit::fit(y, x);
    const double grid_err = (six.coef - arg).cwiseAbs().maxCoeff();
    c.detail << " six-point vs grid " << grid_err << ";";
    c.require(six.converged && grid_err <= 1e-4, "six-point fixture within 1e-4 of grid search");

    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::normal_distribution<double> e;
    const double h = 1e-6;
    double worst_s = 0.0;
    for (int t = 0; t < 100; ++t) {
        Matrix xs(30, 3);
        Vector ys(30);
        Vector beta(3);
        beta << u(gen), u(gen), u(gen);
        for (Index i = 0; i < 30; ++i) {
            xs(i, 0) = e(gen);
            xs(i, 1) = e(gen);
            xs(i, 2) = 1.0;
            ys(i) = xs.row(i).dot(beta) + e(gen) > 0.0 ? 1.0 : 0.0;
        }
        Vector point(3);
        point << u(gen), u(gen), u(gen);
        const Vector g = probit::score(point, ys, xs);
        for (Index j = 0; j < 3; ++j) {
            Vector p = point, m = point;
            p(j) += h;
            m(j) -= h;
            const double fd = (probit::loglik(p, ys, xs) - probit::loglik(m, ys, xs)) / (2 * h);
            worst_s = std::max(worst_s, std::abs(fd - g(j)) / std::max(1.0, std::abs(g(j))));
        }
    }
    c.detail << " score vs central differences " << worst_s;
    c.require(worst_s <= 1e-6, "score within 1e-6 on 100 points");
    return c;
}

using Big = boost::multiprecision::cpp_bin_float_50;

double asymptotic_log_cdf(double z) {
    const Big x = -Big(z);
    Big sum = 1, term = 1, last = 1;
    for (int k = 1; k < 200; ++k) {
        term = -term * (2 * k - 1) / (x * x);
        if (abs(term) > abs(last)) break;
        sum += term;
        last = term;
    }
    const Big logphi = -x * x / 2 - log(sqrt(2 * boost::math::constants::pi<Big>()));
    return static_cast<double>(logphi - log(x) + log(sum));
}

Check criterion3() {
    Check c;
    const double h = 1e-5;
    double worst = 0.0;
    bool bounds = true;
    for (double z = -30.0; z <= 30.0; z += 0.01) {
        const double l = inverse_mills(z);
        bounds = bounds && l > std::max(0.0, -z);
        const double fd = (inverse_mills(z + h) - inverse_mills(z - h)) / (2 * h);
        const double analytic = -l * (l + z);
        worst = std::max(worst, std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-300));
    }
    c.detail << " derivative identity max relative error " << worst << ";";
    c.require(bounds, "lambda(z) > max(0, -z)");
    c.require(worst <= 1e-6, "derivative identity within 1e-6");
    const double v = log_normal_cdf(-30.0);
    const double want = asymptotic_log_cdf(-30.0);
    const double rel = std::abs(v - want) / std::abs(want);
    c.detail << " log_normal_cdf(-30) = " << v << " relative error " << rel;
    c.require(std::isfinite(v) && rel <= 1e-9, "log_normal_cdf(-30) within 1e-9");
    return c;
}

Check criterion4() {
    Check c;
    const auto t0 = Clock::now();
    const Panel panel = load_panel(snapshot_path(), default_schema());
    const TableResult t = descriptive_table(panel);
    const double secs = seconds_since(t0);
    const auto& obs = t.observations;
    c.detail << " counts " << obs[0].value_or(-1) << "/" << obs[1].value_or(-1) << "/" << obs[2].value_or(-1) << ";";
    c.require(obs[0] == 189 && obs[1] == 133 && obs[2] == 56, "counts 189/133/56");
    for (const auto& ref : reference_descriptives()) {
        if (ref.code != "cases" && ref.code != "gov_eff" && ref.code != "pop_65") continue;
        const TableRow* row = t.row(ref.code);
        const std::optional<double> want[3] = {ref.all_mean, ref.no_mean, ref.yes_mean};
        for (int g = 0; g < 3; ++g) {
            if (!want[g]) continue;
            const auto& cell = row ? row->cells[static_cast<std::size_t>(g)] : std::nullopt;
            const bool ok = cell && std::abs(cell->value - *want[g]) <= 0.05;
            c.detail << " " << ref.code << "[" << g << "] " << (cell ? fmt(cell->value, 2) : "missing") << " vs "
                     << fmt(*want[g], 2) << ";";
            c.require(ok, ref.code + " mean within 0.05");
        }
    }
    int members = 0, started = 0;
    for (const auto& r : panel.records) {
        if (r.value("soft_power_30") != 1.0) continue;
        ++members;
        if (r.value("started") == 1.0) ++started;
    }
    c.detail << " soft power started " << started << "/" << members << "; runtime " << secs << " s";
    c.require(members == 30 && started == 26, "soft power 26/30");
    c.require(secs < 1.0, "runtime < 1 s");
    return c;
}

void anchor(Check& c, const TableResult& t, int model, const char* stage, const char* code,
            const std::function<bool(const Cell&)>& pred, const std::string& want) {
    const auto cell = t.cell(model, stage, code);
    const bool ok = cell && pred(*cell);
    c.detail << " M" << model << " " << stage << " " << code << " "
             << (cell ? fmt(cell->value) + std::string(to_string(cell->stars)) : std::string("missing"))
             << (ok ? "" : " (want " + want + ")") << ";";
    c.require(ok, "Model " + std::to_string(model) + " " + stage + " " + code + " " + want);
}

bool positive_three(const Cell& x) { return x.value > 0 && x.stars == Stars::three; }

Check criterion5(const ReplicationTables& tables, const std::string& diff) {
    Check c;
    const TableResult& t = tables.table2;
    for (int m = 1; m <= 4; ++m) anchor(c, t, m, "selection", "cases", positive_three, "> 0 ***");
    for (int m = 2; m <= 3; ++m) anchor(c, t, m, "selection", "soft_power_30", positive_three, "> 0 ***");
    anchor(c, t, 4, "selection", "gdp", positive_three, "> 0 ***");
    anchor(c, t, 5, "selection", "gdp_pc_ppp", positive_three, "> 0 ***");
    for (int m = 1; m <= 5; ++m) anchor(c, t, m, "outcome", "days", positive_three, "> 0 ***");
    for (int m : {2, 4}) anchor(c, t, m, "outcome", "gov_eff", positive_three, "> 0 ***");
    anchor(c, t, 5, "outcome", "gov_eff", [](const Cell& x) { return x.stars == Stars::none; }, "not significant");
    c.require(diff.find("| 2 | outcome | gov_eff | 0.718*** (0.217) |") != std::string::npos,
              "diff report lists reference beside computed");
    return c;
}

Check criterion6(const ReplicationTables& tables, const Panel& panel) {
    Check c;
    const TableResult* suites[2] = {&tables.table3, &tables.table4};
    for (int t = 3; t <= 4; ++t) {
        const TableResult& table = *suites[t - 3];
        c.detail << " Table " << t << ":";
        for (const auto& ref : reference_cells()) {
            if (ref.table != t) continue;
            if (ref.code == "gov_eff" && ref.stage == "outcome") {
                anchor(c, table, ref.model, "outcome", "gov_eff",
                       [&](const Cell& x) { return x.value > 0 && stars_at_least(x.stars, ref.stars); },
                       "> 0 " + std::string(to_string(ref.stars)));
            } else if (ref.code == "soft_power_30") {
                anchor(c, table, ref.model, "selection", "soft_power_30", [](const Cell& x) { return x.value > 0; },
                       "> 0");
            }
        }
    }
    SuiteOptions identity;
    identity.extra_filter = {{"gov_eff", 0.0, 1.0}, {"gdp", 0.0, 1.0}, {"vac_php", 0.0, 1.0}};
    const bool same = render_csv(suite_table(fit_models(panel, builtin_specs(), identity), "table2", tables.table2.title)) ==
                      render_csv(suite_table(fit_models(panel, builtin_specs(), {}), "table2", tables.table2.title));
    c.detail << " identity filters reproduce Table 2: " << (same ? "yes" : "no");
    c.require(same, "identity filters reproduce Table 2");
    return c;
}

Check criterion7() {
    Check c;
    const auto work = scratch_dir("acceptance_determinism");
    const std::string data = " --data \"" + snapshot_path() + "\"";
    std::map<std::string, std::string> trees[2];
    for (int i = 0; i < 2; ++i) {
        const auto out = work / ("replicate" + std::to_string(i));
        const auto r = run_cli("replicate" + data + " --out \"" + out.string() + "\"", work);
        c.require(r.exit_code == 0, "replicate exits 0");
        trees[i] = read_tree(out);
    }
    c.detail << " replicate: " << trees[0].size() << " files, identical " << (trees[0] == trees[1] ? "yes" : "no")
             << ";";
    c.require(!trees[0].empty() && trees[0] == trees[1], "replicate trees byte-identical");
    std::map<std::string, std::string> sims[2];
    for (int i = 0; i < 2; ++i) {
        const auto out = work / ("simulate" + std::to_string(i));
        const auto r = run_cli("simulate --seed 7 --out \"" + out.string() + "\"", work);
        c.require(r.exit_code == 0, "simulate exits 0");
        sims[i] = read_tree(out);
    }
    c.detail << " simulate: " << sims[0].size() << " files, identical " << (sims[0] == sims[1] ? "yes" : "no");
    c.require(!sims[0].empty() && sims[0] == sims[1], "simulate trees byte-identical");
    return c;
}

Check criterion8(const Panel& panel) {
    Check c;
    const FigureData f = correlation_matrix(panel, {"gov_eff", "gdp_pc_ppp"});
    const double r = f.series[0].rows[0][1];
    c.detail << " corr(gov_eff, gdp_pc_ppp) = " << fmt(r);
    c.require(std::abs(r - 0.83) <= 0.03, "within 0.03 of 0.83");
    return c;
}

}  // namespace

int main() {
    bool all = true;
    auto report = [&](int id, const char* name, const std::function<Check()>& fn) {
        Check c;
        try {
            c = fn();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail << " exception: " << e.what();
        }
        all = all && c.ok;
        std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "):" << c.detail.str()
                  << std::endl;
    };

    const Panel& panel = heckit::testing::snapshot();
    const ReplicationTables tables = run_replication(panel, VcovVariant::plain_robust);
    const std::string diff = replication_diff_report(panel, tables);

    report(1, "Monte Carlo recovery", criterion1);
    report(2, "probit correctness", criterion2);
    report(3, "numerics", criterion3);
    report(4, "snapshot descriptives", criterion4);
    report(5, "Table 2 pattern", [&] { return criterion5(tables, diff); });
    report(6, "robustness suites", [&] { return criterion6(tables, panel); });
    report(7, "determinism", criterion7);
    report(8, "correlation anchor", [&] { return criterion8(panel); });
    return all ? 0 : 1;
}
