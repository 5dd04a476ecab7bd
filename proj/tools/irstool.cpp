// irstool: simulate fBm/mBm paths, compute IRS statistics, estimate Hurst
// indices and run the Monte Carlo tables from the command line.

#include <cmath>
#include <filesystem>
#include <map>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "irs/estimation.hpp"
#include "irs/filters.hpp"
#include "irs/harness.hpp"
#include "irs/irs_core.hpp"
#include "irs/path_io.hpp"
#include "irs/sigma2_table.hpp"
#include "irs/synthesis.hpp"
#include "irs/theory.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kAssertFailed = 2;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

irs::SamplePath load_path(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return irs::read_path_csv(in);
}

irs::HurstFunction load_hurst_function(const std::string& spec) {
    if (spec.rfind("file:", 0) == 0) {
        std::ifstream in(spec.substr(5));
        if (!in) throw std::runtime_error("cannot open Hurst function file '" + spec.substr(5) + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return irs::hurst_function_from_json(buf.str());
    }
    return irs::builtin_hurst_function(irs::parse_builtin_hurst(spec));
}

// "gamma=0.3,t=0.5" or "gamma=0.3" -> key/value pairs.
std::map<std::string, double> parse_pairs(const std::string& text) {
    std::map<std::string, double> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("expected key=value in '" + text + "'");
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

std::vector<irs::Method> parse_methods(const std::string& text) {
    std::vector<irs::Method> methods;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) methods.push_back(irs::parse_method(item));
    return methods;
}

// Sidecar files next to `out`: <stem>_<tag>.csv.
std::string sidecar(const std::string& out, const std::string& tag) {
    const fs::path p(out);
    return (p.parent_path() / (p.stem().string() + "_" + tag + ".csv")).string();
}

void write_text(const std::string& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Increment Ratio Statistic toolkit for fractional and multifractional Brownian motion"};
    app.require_subcommand(1);
    int exit_code = 0;

    // simulate-fbm
    double sim_hurst = 0.7;
    std::size_t sim_n = 10000;
    std::uint64_t sim_seed = 42;
    std::string sim_out;
    auto* sim_fbm = app.add_subcommand("simulate-fbm", "Simulate fBm by circulant embedding");
    sim_fbm->add_option("--hurst", sim_hurst, "Hurst index in (0, 1)")->required();
    sim_fbm->add_option("--n", sim_n, "grid resolution (t_k = k/n)")->required();
    sim_fbm->add_option("--seed", sim_seed, "RNG seed");
    sim_fbm->add_option("--out", sim_out, "output CSV")->required();
    sim_fbm->callback([&] {
        auto out = open_out(sim_out);
        irs::write_path_csv(out, irs::simulate_fbm(sim_hurst, sim_n, sim_seed));
    });

    // simulate-mbm
    std::string mbm_fn = "linear";
    std::size_t mbm_grid = 20;
    auto* sim_mbm = app.add_subcommand("simulate-mbm", "Simulate mBm on a Hurst grid with shared noise");
    sim_mbm->add_option("--hurst-fn", mbm_fn, "linear | periodic | logistic | file:<spec.json>")->required();
    sim_mbm->add_option("--n", sim_n, "grid resolution")->required();
    sim_mbm->add_option("--seed", sim_seed, "RNG seed");
    sim_mbm->add_option("--h-grid", mbm_grid, "number of H grid points");
    sim_mbm->add_option("--out", sim_out, "output CSV")->required();
    sim_mbm->callback([&] {
        auto out = open_out(sim_out);
        irs::write_path_csv(out, irs::simulate_mbm(load_hurst_function(mbm_fn), sim_n, sim_seed, mbm_grid));
    });

    // irs
    std::string in_path, filter_spec = "binomial:2", window_spec;
    auto* irs_cmd = app.add_subcommand("irs", "Print the (localized) IRS of a path");
    irs_cmd->add_option("--in", in_path, "path CSV (t,value)")->required();
    irs_cmd->add_option("--filter", filter_spec, "binomial:p or coeffs:a0,a1,...:p=P");
    irs_cmd->add_option("--window", window_spec, "gamma=G,t=T for the localized IRS");
    irs_cmd->callback([&] {
        const auto path = load_path(in_path);
        const auto f = irs::parse_filter(filter_spec);
        const auto inc = irs::increments(path, f);
        std::cout.precision(17);
        if (window_spec.empty()) {
            std::cout << irs::irs(inc) << '\n';
            return;
        }
        const auto kv = parse_pairs(window_spec);
        if (!kv.count("gamma") || !kv.count("t")) throw std::invalid_argument("--window needs gamma= and t=");
        const auto w = irs::make_window(path.n, f.length(), kv.at("gamma"), kv.at("t"));
        const auto local = irs::localized_irs(inc, w);
        std::cout << local.value << ' ' << local.pairs << '\n';
    });

    // lambda-table
    std::string table_out;
    std::size_t table_points = 999;
    auto* lambda_cmd = app.add_subcommand("lambda-table", "Tabulate rho_a(H) and Lambda_a(H)");
    lambda_cmd->add_option("--filter", filter_spec, "filter spec");
    lambda_cmd->add_option("--points", table_points, "number of H values in [0.001, 0.999]");
    lambda_cmd->add_option("--out", table_out, "output CSV")->required();
    lambda_cmd->callback([&] {
        const auto f = irs::parse_filter(filter_spec);
        auto out = open_out(table_out);
        out.precision(17);
        out << "H,rho_a,Lambda_a\n";
        for (std::size_t i = 0; i < table_points; ++i) {
            const double h = table_points == 1 ? 0.5 : 0.001 + 0.998 * static_cast<double>(i) /
                                                                     static_cast<double>(table_points - 1);
            out << h << ',' << irs::rho_a_general(f, h) << ',' << irs::lambda_a(f, h) << '\n';
        }
    });

    // sigma2
    double s2_hurst = 0.5;
    std::size_t s2_n = 16384, s2_reps = 500, workers = 0;
    std::uint64_t s2_seed = 1;
    auto* sigma2_cmd = app.add_subcommand("sigma2", "Monte Carlo estimate of Sigma^2_a(H)");
    sigma2_cmd->add_option("--hurst", s2_hurst, "Hurst index")->required();
    sigma2_cmd->add_option("--filter", filter_spec, "filter spec");
    sigma2_cmd->add_option("--n", s2_n, "path resolution");
    sigma2_cmd->add_option("--replicates", s2_reps, "number of replicates (>= 100)");
    sigma2_cmd->add_option("--seed", s2_seed, "master seed");
    sigma2_cmd->add_option("--workers", workers, "threads (0 = all cores)");
    sigma2_cmd->callback([&] {
        const auto est = irs::sigma2_mc(irs::parse_filter(filter_spec), s2_hurst, s2_n, s2_reps, s2_seed, workers);
        nlohmann::json j = {{"hurst", est.hurst},           {"n", est.n},
                            {"replicates", est.replicates}, {"sigma2", est.sigma2},
                            {"std_error", est.std_error},   {"mean_irs", est.mean_irs},
                            {"clt_condition_violated", est.clt_condition_violated}};
        std::cout << j.dump(2) << '\n';
    });

    // sigma2-table
    auto* sigma2_table_cmd =
        app.add_subcommand("sigma2-table", "Regenerate a Sigma^2_a table (H = 0.05..0.95) as CSV");
    sigma2_table_cmd->add_option("--filter", filter_spec, "filter spec");
    sigma2_table_cmd->add_option("--n", s2_n, "path resolution");
    sigma2_table_cmd->add_option("--replicates", s2_reps, "replicates per H value");
    sigma2_table_cmd->add_option("--seed", s2_seed, "master seed");
    sigma2_table_cmd->add_option("--workers", workers, "threads (0 = all cores)");
    sigma2_table_cmd->add_option("--out", table_out, "output CSV")->required();
    sigma2_table_cmd->callback([&] {
        const auto grid = irs::default_sigma2_grid();
        const auto table =
            irs::Sigma2Table::compute(irs::parse_filter(filter_spec), grid, s2_n, s2_reps, s2_seed, workers);
        auto out = open_out(table_out);
        table.write_csv(out);
    });

    // estimate
    std::string local_spec, method_name = "irs", report_out;
    std::size_t points = 50;
    double alpha = 0.05;
    auto* estimate_cmd = app.add_subcommand("estimate", "Estimate H (global) or H(t) (local) from a path");
    estimate_cmd->add_option("--in", in_path, "path CSV")->required();
    estimate_cmd->add_option("--filter", filter_spec, "filter spec");
    estimate_cmd->add_option("--local", local_spec, "gamma=G for localized estimation");
    estimate_cmd->add_option("--points", points, "number of interior evaluation points");
    estimate_cmd->add_option("--method", method_name, "irs | gqv");
    estimate_cmd->add_option("--alpha", alpha, "confidence level parameter");
    estimate_cmd->add_option("--out", report_out, "report JSON (stdout if omitted)");
    estimate_cmd->callback([&] {
        const auto path = load_path(in_path);
        const auto f = irs::parse_filter(filter_spec);
        const auto method = irs::parse_method(method_name);
        irs::EstimationReport report;
        if (local_spec.empty()) {
            report = method == irs::Method::irs ? irs::estimate_global(path, f, alpha) : irs::estimate_gqv(path, f);
        } else {
            const auto kv = parse_pairs(local_spec);
            if (!kv.count("gamma")) throw std::invalid_argument("--local needs gamma=");
            const auto t = irs::default_t_points(points);
            report = method == irs::Method::irs ? irs::estimate_local(path, f, kv.at("gamma"), t, alpha)
                                                : irs::estimate_gqv(path, f, kv.at("gamma"), t);
        }
        report.alpha = alpha;
        const auto text = irs::to_json(report);
        if (report_out.empty()) std::cout << text << '\n';
        else write_text(report_out, text + "\n");
    });

    // mc-fbm
    std::string hurst_list = "0.3,0.5,0.7", methods_spec = "irs";
    std::size_t mc_n = 10000, mc_reps = 200;
    std::uint64_t mc_seed = 1;
    bool assert_flag = false, full_scale = false;
    auto* mc_fbm = app.add_subcommand("mc-fbm", "Monte Carlo table for fBm (mean H_hat, MSE, coverage)");
    mc_fbm->add_option("--hurst", hurst_list, "comma-separated Hurst values");
    mc_fbm->add_option("--n", mc_n, "path resolution");
    mc_fbm->add_option("--replicates", mc_reps, "replicates per H (default 200)");
    mc_fbm->add_flag("--full-scale", full_scale, "use 1000 replicates");
    mc_fbm->add_option("--filter", filter_spec, "filter spec");
    mc_fbm->add_option("--methods", methods_spec, "irs,gqv");
    mc_fbm->add_option("--seed", mc_seed, "master seed");
    mc_fbm->add_option("--workers", workers, "threads (0 = all cores)");
    mc_fbm->add_option("--out", report_out, "report JSON")->required();
    mc_fbm->add_flag("--assert", assert_flag, "exit 2 unless |mean H_hat - H| < 0.02 and MSE in [1.5e-5, 4e-4]");
    mc_fbm->callback([&] {
        nlohmann::json doc = {{"reports", nlohmann::json::array()}};
        bool ok = true;
        std::stringstream in(hurst_list);
        for (std::string item; std::getline(in, item, ',');) {
            irs::ExperimentConfig cfg;
            cfg.scenario = irs::FbmScenario{std::stod(item)};
            cfg.n = mc_n;
            cfg.replicates = full_scale ? 1000 : mc_reps;
            cfg.filter = irs::parse_filter(filter_spec);
            cfg.methods = parse_methods(methods_spec);
            cfg.master_seed = mc_seed;
            cfg.workers = workers;
            const auto report = irs::run_fbm_table(cfg);
            doc["reports"].push_back(nlohmann::json::parse(irs::to_json(report)));
            for (const auto& s : report.methods) {
                write_text(sidecar(report_out, "H" + item + "_" + irs::to_string(s.method) + "_hist"),
                           irs::histogram_csv(s.histogram));
                std::cout << report.scenario << ' ' << irs::to_string(s.method) << ": mean " << s.mean_h
                          << "  MSE " << s.mse << '\n';
                if (s.method == irs::Method::irs)
                    ok = ok && std::abs(s.mean_h - *report.hurst) < 0.02 && s.mse >= 1.5e-5 && s.mse <= 4e-4;
            }
        }
        write_text(report_out, doc.dump(2) + "\n");
        if (assert_flag && !ok) exit_code = kAssertFailed;
    });

    // mc-mbm
    std::vector<std::string> mbm_fns = {"linear", "periodic", "logistic"};
    double gamma = 0.3;
    auto* mc_mbm = app.add_subcommand("mc-mbm", "Monte Carlo MISE table for mBm");
    mc_mbm->add_option("--hurst-fn", mbm_fns, "linear periodic logistic or file:<spec.json> (repeatable)")
        ->delimiter(',');
    mc_mbm->add_option("--gamma", gamma, "window exponent in (0, 1)");
    mc_mbm->add_option("--methods", methods_spec, "irs,gqv")->default_str("irs,gqv");
    mc_mbm->add_option("--n", mc_n, "path resolution");
    mc_mbm->add_option("--replicates", mc_reps, "replicates (default 100)");
    mc_mbm->add_flag("--full-scale", full_scale, "use 1000 replicates");
    mc_mbm->add_option("--points", points, "evaluation points");
    mc_mbm->add_option("--h-grid", mbm_grid, "H grid size for synthesis");
    mc_mbm->add_option("--filter", filter_spec, "filter spec");
    mc_mbm->add_option("--seed", mc_seed, "master seed");
    mc_mbm->add_option("--workers", workers, "threads (0 = all cores)");
    mc_mbm->add_option("--out", report_out, "report JSON")->required();
    mc_mbm->add_flag("--assert", assert_flag,
                     "exit 2 unless every MISE < 5e-3, and GQV beats IRS for the logistic function");
    mc_mbm->callback([&] {
        if (!mc_mbm->count("--methods")) methods_spec = "irs,gqv";
        if (!mc_mbm->count("--replicates")) mc_reps = 100;
        nlohmann::json doc = {{"reports", nlohmann::json::array()}};
        bool ok = true;
        for (const auto& name : mbm_fns) {
            irs::ExperimentConfig cfg;
            cfg.scenario = irs::MbmScenario{load_hurst_function(name)};
            cfg.n = mc_n;
            cfg.replicates = full_scale ? 1000 : mc_reps;
            cfg.filter = irs::parse_filter(filter_spec);
            cfg.gamma = gamma;
            cfg.t_points = points;
            cfg.h_grid_size = mbm_grid;
            cfg.methods = parse_methods(methods_spec);
            cfg.master_seed = mc_seed;
            cfg.workers = workers;
            const auto report = irs::run_mbm_table(cfg);
            doc["reports"].push_back(nlohmann::json::parse(irs::to_json(report)));
            const std::string tag = name.rfind("file:", 0) == 0 ? fs::path(name.substr(5)).stem().string() : name;
            write_text(sidecar(report_out, tag + "_curves"), irs::curves_csv(report));
            double irs_mise = NAN, gqv_mise = NAN;
            for (const auto& s : report.methods) {
                write_text(sidecar(report_out, tag + "_" + irs::to_string(s.method) + "_hist"),
                           irs::histogram_csv(s.histogram));
                std::cout << report.scenario << ' ' << irs::to_string(s.method) << ": MISE " << s.mise << '\n';
                (s.method == irs::Method::irs ? irs_mise : gqv_mise) = s.mise;
            }
            if (name == "logistic") ok = ok && gqv_mise < irs_mise;
            else ok = ok && !(irs_mise >= 5e-3) && !(gqv_mise >= 5e-3);
        }
        write_text(report_out, doc.dump(2) + "\n");
        if (assert_flag && !ok) exit_code = kAssertFailed;
    });

    // clt-check
    auto* clt_cmd = app.add_subcommand("clt-check", "Normality of sqrt(n)(IRS - Lambda_a(H)) over replicates");
    clt_cmd->add_option("--hurst", s2_hurst, "Hurst index")->required();
    clt_cmd->add_option("--filter", filter_spec, "filter spec");
    clt_cmd->add_option("--n", s2_n, "path resolution");
    clt_cmd->add_option("--replicates", s2_reps, "replicates");
    clt_cmd->add_option("--seed", s2_seed, "master seed");
    clt_cmd->add_option("--workers", workers, "threads (0 = all cores)");
    clt_cmd->add_option("--out", report_out, "report JSON (stdout if omitted)");
    clt_cmd->add_flag("--assert", assert_flag, "exit 2 unless p > 0.01 and variance ratio in [0.8, 1.2]");
    clt_cmd->callback([&] {
        const auto report =
            irs::run_clt_check(irs::parse_filter(filter_spec), s2_hurst, s2_n, s2_reps, s2_seed, workers);
        const auto text = irs::to_json(report);
        if (report_out.empty()) std::cout << text << '\n';
        else write_text(report_out, text + "\n");
        const auto& c = *report.clt;
        const bool ok = c.condition_violated || (c.p_value > 0.01 && c.variance_ratio >= 0.8 && c.variance_ratio <= 1.2);
        if (assert_flag && !ok) exit_code = kAssertFailed;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}
