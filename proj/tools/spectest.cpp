// Command-line surface for the specification-testing toolkit.
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectest/bootstrap.hpp"
#include "spectest/dataio.hpp"
#include "spectest/errors.hpp"
#include "spectest/model.hpp"
#include "spectest/parallel.hpp"
#include "spectest/projection.hpp"
#include "spectest/rng.hpp"
#include "spectest/simulation.hpp"

namespace {

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& csv, const char* what) {
    std::vector<double> out;
    for (const auto& item : split_list(csv)) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw CLI::ValidationError(std::string(what) + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw CLI::ValidationError(std::string(what) + ": empty list");
    return out;
}

std::vector<int> parse_ints(const std::string& csv, const char* what) {
    std::vector<int> out;
    for (double v : parse_doubles(csv, what)) {
        const int k = static_cast<int>(v);
        if (static_cast<double>(k) != v)
            throw CLI::ValidationError(std::string(what) + ": expected integers");
        out.push_back(k);
    }
    return out;
}

void parse_cov(const std::string& text, spectest::CovKind* kind, double* rho) {
    if (text == "identity") {
        *kind = spectest::CovKind::identity;
        return;
    }
    if (text.rfind("ar1", 0) == 0) {
        *kind = spectest::CovKind::ar1;
        *rho = 0.5;
        if (text.size() > 3) {
            if (text[3] != ':') throw CLI::ValidationError("--cov: expected ar1:<rho>");
            *rho = std::stod(text.substr(4));
        }
        return;
    }
    throw CLI::ValidationError("--cov: expected identity or ar1:<rho>");
}

int parse_workers(const std::string& text) {
    if (text == "auto") return 0;
    return std::stoi(text);
}

int run_test(const std::string& data_path, const std::string& response,
             const std::string& predictors, const std::string& model_tag,
             const std::string& stat_name, int boot, double level, std::uint64_t seed,
             double bandwidth, double bw_const, int n_dirs, const std::string& law) {
    spectest::ColumnSchema schema;
    schema.response = response;
    if (predictors != "all") schema.predictors = split_list(predictors);

    spectest::LoadReport report;
    const spectest::DataSet data = spectest::load_csv(data_path, schema, &report);
    std::cout << "data        : " << data.n() << " rows x " << data.p() << " predictors ("
              << report.dropped_rows << " dropped)\n";

    const spectest::ParametricModel model =
        spectest::make_builtin(model_tag, static_cast<int>(data.p()));

    spectest::StatisticSpec stat;
    stat.kind = spectest::parse_statistic(stat_name);
    if (bandwidth > 0.0)
        stat.bandwidth = {spectest::BandwidthKind::fixed, bandwidth};
    else
        stat.bandwidth = {spectest::BandwidthKind::power_rule, bw_const};
    stat.n_dirs = n_dirs;
    stat.direction_seed = spectest::rng::derive(seed, {spectest::rng::kDirections});

    spectest::BootstrapOptions opts;
    opts.B = boot;
    opts.level = level;
    opts.seed = seed;
    opts.law = spectest::parse_law(law);

    const spectest::TestResult result = spectest::wild_bootstrap_test(model, data, stat, opts);
    std::cout << spectest::format_test_result(result);
    return result.reject ? 10 : 0;
}

int run_simulate(int scenario, const std::string& p_list, const std::string& a_list, int n,
                 int reps, int boot, double level, std::uint64_t seed,
                 const std::string& stats_list, const std::string& cov_text,
                 const std::string& workers_text, const std::string& out_path,
                 const std::string& curves_dir, const std::string& law) {
    spectest::CovKind cov = spectest::CovKind::identity;
    double rho = 0.5;
    parse_cov(cov_text, &cov, &rho);

    std::vector<spectest::ScenarioSpec> grid;
    for (int p : parse_ints(p_list, "--p")) {
        for (double a : parse_doubles(a_list, "--a")) {
            spectest::ScenarioSpec spec;
            spec.id = scenario;
            spec.n = n;
            spec.p = p;
            spec.a = a;
            spec.cov = cov;
            spec.rho = rho;
            grid.push_back(spec);
        }
    }

    std::vector<spectest::StatisticSpec> stats;
    for (const auto& name : split_list(stats_list)) {
        spectest::StatisticSpec spec;
        spec.kind = spectest::parse_statistic(name);
        stats.push_back(spec);
    }
    if (stats.empty()) throw CLI::ValidationError("--stats: empty list");

    spectest::PowerStudyOptions opts;
    opts.reps = reps;
    opts.B = boot;
    opts.level = level;
    opts.seed = seed;
    opts.workers = parse_workers(workers_text);
    opts.law = spectest::parse_law(law);

    const spectest::PowerTable table = spectest::run_power_study(grid, stats, opts);
    std::cout << spectest::format_power_table(table);
    if (!out_path.empty()) {
        spectest::write_power_csv(table, out_path);
        std::cout << "wrote " << out_path << "\n";
    }
    if (!curves_dir.empty()) {
        spectest::write_power_curves(table, curves_dir);
        std::cout << "wrote power curves under " << curves_dir << "\n";
    }
    for (const auto& row : table.rows) {
        if (row.failed)
            std::cerr << "warning: cell scenario=" << row.scenario << " p=" << row.p
                      << " a=" << row.a << " had " << row.failed_reps
                      << " failed replicates\n";
    }
    return 0;
}

int run_validate_kernel(int cases, long draws, std::uint64_t seed) {
    const spectest::KernelValidationReport report =
        spectest::validate_kernel(cases, draws, seed);
    std::printf("%4s %2s %8s %10s %14s %14s %12s %6s\n", "case", "p", "h", "dist2",
                "closed_form", "estimate", "std_error", "ok");
    for (std::size_t c = 0; c < report.cases.size(); ++c) {
        const auto& kc = report.cases[c];
        std::printf("%4zu %2d %8.4f %10.4f %14.8f %14.8f %12.3e %6s\n", c + 1, kc.p, kc.h,
                    kc.dist_sq, kc.closed_form, kc.estimate, kc.std_error,
                    kc.pass ? "yes" : "NO");
    }
    std::printf("%d of %zu cases outside 4 standard errors -> %s\n", report.failures,
                report.cases.size(), report.pass ? "PASS" : "FAIL");
    return report.pass ? 0 : 1;
}

int run_autompg(const std::string& file, int boot, std::uint64_t seed) {
    spectest::LoadReport report;
    const spectest::DataSet data = spectest::load_autompg(file, &report);
    std::cout << "auto-mpg    : " << data.n() << " rows kept, " << report.dropped_rows
              << " dropped (missing values)\n";

    // Linear null with an intercept; the constant column leaves all pairwise
    // predictor distances (and hence the statistic weights) unchanged.
    const spectest::DataSet design = spectest::with_intercept(data);
    const spectest::ParametricModel model =
        spectest::make_builtin(spectest::ModelFamily::linear, static_cast<int>(design.p()));

    spectest::StatisticSpec stat;  // tn
    spectest::BootstrapOptions opts;
    opts.B = boot;
    opts.seed = seed;

    const spectest::TestResult result =
        spectest::wild_bootstrap_test(model, design, stat, opts);
    std::cout << spectest::format_test_result(result);
    return 0;
}

int run_drift_oracle(int scenario, int p, double a, long pairs, std::uint64_t seed,
                     const std::string& cov_text) {
    spectest::CovKind cov = spectest::CovKind::identity;
    double rho = 0.5;
    parse_cov(cov_text, &cov, &rho);
    spectest::ScenarioSpec spec;
    spec.id = scenario;
    spec.p = p;
    spec.a = a;
    spec.cov = cov;
    spec.rho = rho;
    const spectest::MonteCarloEstimate mu1 = spectest::global_drift_oracle(spec, pairs, seed);
    std::printf("mu1 = %.8f +- %.8f (scenario %d, p=%d, a=%g, %ld pairs)\n", mu1.estimate,
                mu1.std_error, scenario, p, a, pairs);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Projection-weighted specification testing for parametric regression"};
    app.require_subcommand(1);

    // --- test ---------------------------------------------------------------
    auto* test = app.add_subcommand("test", "Run a specification test on a data file");
    std::string data_path, response, predictors = "all", model_tag = "linear";
    std::string stat_name = "tn", law = "mammen";
    int boot = 300, n_dirs = 500;
    double level = 0.05, bandwidth = 0.0, bw_const = 1.5;
    std::uint64_t seed = 1;
    test->add_option("--data", data_path, "CSV or whitespace table with header")->required();
    test->add_option("--response", response, "response column name")->required();
    test->add_option("--predictors", predictors, "comma-separated columns, or 'all'");
    test->add_option("--model", model_tag, "null family: linear | scenario4_null");
    test->add_option("--stat", stat_name, "tn | zheng | stute | lavergne");
    test->add_option("--boot", boot, "bootstrap replicates B");
    test->add_option("--level", level, "test level");
    test->add_option("--seed", seed, "random seed")->required();
    test->add_option("--bandwidth", bandwidth, "fixed kernel bandwidth h");
    test->add_option("--bw-const", bw_const, "constant c in h = c n^{-1/(4+p)}");
    test->add_option("--n-dirs", n_dirs, "Monte Carlo directions (lavergne)");
    test->add_option("--law", law, "wild weights: mammen | rademacher");

    // --- simulate -----------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo size/power study");
    int scenario = 1, n = 200, reps = 500;
    std::string p_list, a_list, stats_list = "tn", cov_text = "identity";
    std::string workers_text = "auto", out_path, curves_dir;
    simulate->add_option("--scenario", scenario, "scenario id 1..4")->required();
    simulate->add_option("--p", p_list, "comma-separated predictor dimensions")->required();
    simulate->add_option("--a", a_list, "comma-separated departure amplitudes")->required();
    simulate->add_option("--n", n, "sample size per replicate");
    simulate->add_option("--reps", reps, "Monte Carlo replications per cell");
    simulate->add_option("--boot", boot, "bootstrap replicates B");
    simulate->add_option("--level", level, "test level");
    simulate->add_option("--seed", seed, "random seed")->required();
    simulate->add_option("--stats", stats_list, "statistics, e.g. tn,zheng,stute");
    simulate->add_option("--cov", cov_text, "predictor covariance: identity | ar1:<rho>");
    simulate->add_option("--workers", workers_text, "'auto' or a thread count");
    simulate->add_option("--out", out_path, "output CSV path");
    simulate->add_option("--curves", curves_dir, "directory for (a, rate) power curves");
    simulate->add_option("--law", law, "wild weights: mammen | rademacher");

    // --- validate-kernel ------------------------------------------------------
    auto* vk = app.add_subcommand("validate-kernel",
                                  "Check the closed-form weight against the Monte Carlo oracle");
    int cases = 50;
    long draws = 1000000;
    vk->add_option("--cases", cases, "number of random cases");
    vk->add_option("--draws", draws, "Monte Carlo draws per case");
    vk->add_option("--seed", seed, "random seed")->required();

    // --- autompg --------------------------------------------------------------
    auto* mpg = app.add_subcommand("autompg", "Test a linear model for mpg on the Auto MPG data");
    std::string mpg_file;
    mpg->add_option("--file", mpg_file, "path to the Auto MPG data file")->required();
    mpg->add_option("--boot", boot, "bootstrap replicates B");
    mpg->add_option("--seed", seed, "random seed");

    // --- drift-oracle -----------------------------------------------------------
    auto* drift = app.add_subcommand("drift-oracle",
                                     "Monte Carlo estimate of the fixed-alternative drift mu1");
    double amp = 1.0;
    long pairs = 1000000;
    int dp = 2;
    drift->add_option("--scenario", scenario, "scenario id 1..4")->required();
    drift->add_option("--p", dp, "predictor dimension")->required();
    drift->add_option("--a", amp, "departure amplitude (> 0)")->required();
    drift->add_option("--pairs", pairs, "Monte Carlo pairs");
    drift->add_option("--seed", seed, "random seed")->required();
    drift->add_option("--cov", cov_text, "predictor covariance: identity | ar1:<rho>");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(test))
            return run_test(data_path, response, predictors, model_tag, stat_name, boot, level,
                            seed, bandwidth, bw_const, n_dirs, law);
        if (app.got_subcommand(simulate))
            return run_simulate(scenario, p_list, a_list, n, reps, boot, level, seed, stats_list,
                                cov_text, workers_text, out_path, curves_dir, law);
        if (app.got_subcommand(vk)) return run_validate_kernel(cases, draws, seed);
        if (app.got_subcommand(mpg)) return run_autompg(mpg_file, boot, seed);
        if (app.got_subcommand(drift))
            return run_drift_oracle(scenario, dp, amp, pairs, seed, cov_text);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
