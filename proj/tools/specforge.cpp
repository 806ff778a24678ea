#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specforge/extension_lab.hpp"
#include "specforge/io.hpp"
#include "specforge/mivt.hpp"
#include "specforge/rooms_passages.hpp"
#include "specforge/util.hpp"
#include "specforge/verify.hpp"

namespace {

using nlohmann::json;
using namespace specforge;

constexpr double kPi = 3.14159265358979323846;

std::vector<double> parse_number_list(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stod(item));
    }
    return values;
}

int cmd_design(const std::string& target_path, int cells, const std::string& out_path) {
    TargetSet set = load_target_set(target_path);
    auto [schedule, report] = design(set, cells);
    save_json(out_path, schedule_to_json(schedule));
    std::cout << "designed " << schedule.cells.size() << " cells on (0, " << format_double(schedule.b)
              << "); max tuning residual ";
    double worst = 0.0;
    for (const DesignCellRecord& rec : report.cells) worst = std::max(worst, rec.tuning_residual);
    std::cout << format_double(worst) << "\n";
    return 0;
}

int cmd_spectrum(const std::string& schedule_path, std::size_t truncate, double lambda_max,
                 const std::string& out_path, bool oracle) {
    Schedule schedule = load_schedule(schedule_path);
    if (truncate == 0 || truncate > schedule.cells.size())
        throw Error(ErrorCode::Usage, "--truncate must be between 1 and the cell count");

    if (!(lambda_max > 0.0)) {
        atomic_write_file(out_path, "index,lambda,bracket_lo,bracket_hi,method\n");
        return 0;
    }

    TruncatedOperator op{schedule, truncate};
    Spectrum spectrum = eigenvalues_below(op, lambda_max);
    std::string csv = spectrum_to_csv(spectrum);
    if (oracle) {
        Spectrum fd = fd_oracle_spectrum(op, lambda_max);
        std::ostringstream extra;
        std::size_t index = 1;
        for (const EigenvalueRecord& rec : fd.eigenvalues) {
            extra << index++ << ',' << format_double(rec.lambda) << ','
                  << format_double(rec.bracket_lo) << ',' << format_double(rec.bracket_hi)
                  << ",FD_ORACLE\n";
        }
        double max_dev = 0.0;
        std::size_t n = std::min(spectrum.eigenvalues.size(), fd.eigenvalues.size());
        for (std::size_t i = 0; i < n; ++i)
            max_dev = std::max(max_dev,
                               std::abs(spectrum.eigenvalues[i].lambda - fd.eigenvalues[i].lambda));
        extra << "# max_deviation," << format_double(max_dev) << "\n";
        csv += extra.str();
    }
    atomic_write_file(out_path, csv);
    return 0;
}

json verify_report_to_json(const VerifyReport& report) {
    json j;
    j["pass"] = report.pass;
    j["threshold"] = report.threshold;
    j["skip_head"] = report.skip_head;
    j["truncate"] = report.truncate;
    j["lambda_max"] = report.lambda_max;
    j["decoupled"] = report.decoupled;
    j["max_distance"] = report.max_distance;
    j["coverage"] = {{"set_to_values", report.coverage.set_to_values},
                     {"values_to_set", report.coverage.values_to_set}};
    json entries = json::array();
    for (const VerifyEntry& e : report.entries)
        entries.push_back({{"k", e.k},
                           {"s", e.tuned_value},
                           {"nearest_lambda", e.nearest_lambda},
                           {"distance", e.distance}});
    j["entries"] = entries;
    return j;
}

int cmd_verify(const std::string& schedule_path, const std::string& target_path,
               std::size_t truncate, double lambda_max, double threshold, int skip_head,
               bool decouple, const std::string& out_path) {
    Schedule schedule = load_schedule(schedule_path);
    TargetSet set = load_target_set(target_path);
    VerifyReport report =
        build_verify_report(schedule, set, truncate, lambda_max, threshold, skip_head, decouple);
    json j = verify_report_to_json(report);
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        save_json(out_path, j);
    return report.pass ? 0 : static_cast<int>(ErrorCode::VerifyFailed);
}

int cmd_tune_chain(const std::string& targets_csv, double coupling, double tol,
                   const std::string& out_path) {
    std::vector<double> targets = parse_number_list(targets_csv);
    if (targets.empty()) throw Error(ErrorCode::Usage, "--targets must list at least one value");

    ChainTuneSpec spec;
    spec.targets = targets;
    double top = targets.back();
    double d = kPi / std::sqrt(2.0 * top); // keeps every target under half the cell ceiling
    spec.lengths.assign(targets.size(), d);
    spec.window_lo = 0.5 * targets.front();
    spec.window_hi = 2.0 * top;
    spec.coupling = coupling;

    auto [schedule, report] = tune_chain(spec, tol);
    save_json(out_path, schedule_to_json(schedule));
    std::cout << "tuned " << targets.size() << " cells in " << report.sweeps
              << " sweeps; residual " << format_double(report.residual) << "\n";
    for (std::size_t k = 0; k < report.achieved.size(); ++k)
        std::cout << "  lambda_" << (targets.size() + k + 1) << " = "
                  << format_double(report.achieved[k]) << "\n";
    return 0;
}

int cmd_extension(std::size_t n, std::size_t m, const std::string& clusters_csv, double mu,
                  std::uint64_t seed, const std::string& out_path) {
    std::vector<double> clusters = parse_number_list(clusters_csv);
    if (clusters.empty()) throw Error(ErrorCode::Usage, "--xi-clusters must list at least one value");
    if (m == 0 || m > n) throw Error(ErrorCode::Usage, "--m must be in [1, n]");

    std::vector<std::pair<std::size_t, std::size_t>> sizes;
    for (std::size_t quarter = 1; quarter <= 4; ++quarter) {
        std::size_t nn = std::max<std::size_t>(2, n * quarter / 4);
        std::size_t mm = std::max<std::size_t>(1, m * quarter / 4);
        sizes.emplace_back(nn, std::min(mm, nn));
    }
    std::vector<ClusterRow> table = clustering_experiment(clusters, sizes, mu, seed);

    // Defect battery on the full-size model.
    Matrix a0(n, n);
    for (std::size_t i = 0; i < n; ++i) a0(i, i) = 3.0 * static_cast<double>(i + 1);
    Matrix xi(m, m);
    std::size_t base = m / clusters.size();
    std::size_t extra = m % clusters.size();
    std::size_t idx = 0;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        std::size_t count = base + (c < extra ? 1 : 0);
        for (std::size_t j = 1; j <= count; ++j) xi(idx, idx) = clusters[c] + 1.0 / j, ++idx;
    }
    ExtensionModel model = make_extension_model(a0, xi, mu);
    ExtensionResult result = build_extension(model);

    json j;
    j["n"] = n;
    j["m"] = m;
    j["mu"] = mu;
    j["seed"] = seed;
    j["clusters"] = clusters;
    j["defects"] = {{"symmetry", result.symmetry_defect},
                    {"weyl_identity", weyl_identity_check(model, result)},
                    {"boundary_condition", boundary_condition_check(model, result, 100, seed)}};
    j["note"] = "finite matrices have no essential spectrum; the cluster table is a "
                "finite-size surrogate";
    json rows = json::array();
    for (const ClusterRow& row : table)
        rows.push_back({{"n", row.n},
                        {"m", row.m},
                        {"cluster_to_eigs", row.cluster_to_eigs},
                        {"eigs_to_cluster", row.eigs_to_cluster},
                        {"weyl_defect", row.weyl_defect}});
    j["cluster_table"] = rows;
    save_json(out_path, j);
    return 0;
}

int cmd_rp_norms(int k_max, const std::string& out_path) {
    RPSequences seq = default_sequences(k_max + 1); // rows run up to k = K-1
    std::ostringstream csv;
    csv << "k,l2_sq,grad_sq,ratio\n";
    for (const TestFunctionNorms& row : gamma_lower_bound_scan(seq))
        csv << row.k << ',' << format_double(row.l2_sq) << ',' << format_double(row.grad_sq) << ','
            << format_double(row.ratio) << '\n';
    atomic_write_file(out_path, csv.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral designer for interval operators with point interactions"};
    app.require_subcommand(1);

    std::string target_path, schedule_path, out_path, targets_csv, clusters_csv;
    int cells = 0;
    std::size_t truncate = 0, dim_n = 200, dim_m = 100;
    double lambda_max = 0.0, threshold = 0.05, tol = 1e-8, coupling = 1000.0, mu = 0.5;
    int skip_head = 1, k_max = 200;
    bool oracle = false, decouple = false;
    std::uint64_t seed = 0;

    CLI::App* design_cmd = app.add_subcommand("design", "build a schedule realizing a target set");
    design_cmd->add_option("--target", target_path, "target set JSON file")->required();
    design_cmd->add_option("--cells", cells, "number of cells (>= 1)")->required();
    design_cmd->add_option("--out", out_path, "output schedule JSON")->required();

    CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues of a truncation");
    spectrum_cmd->add_option("--schedule", schedule_path, "schedule JSON file")->required();
    spectrum_cmd->add_option("--truncate", truncate, "number of cells")->required();
    spectrum_cmd->add_option("--lambda-max", lambda_max, "cutoff")->required();
    spectrum_cmd->add_option("--out", out_path, "output CSV")->required();
    spectrum_cmd->add_flag("--oracle", oracle, "append grid-oracle rows and a deviation summary");

    CLI::App* verify_cmd = app.add_subcommand("verify", "score a schedule against a target set");
    verify_cmd->add_option("--schedule", schedule_path, "schedule JSON file")->required();
    verify_cmd->add_option("--target", target_path, "target set JSON file")->required();
    verify_cmd->add_option("--truncate", truncate, "number of cells")->required();
    verify_cmd->add_option("--lambda-max", lambda_max, "cutoff")->required();
    verify_cmd->add_option("--threshold", threshold, "pass threshold");
    verify_cmd->add_option("--skip-head", skip_head, "first cell index that is scored");
    verify_cmd->add_flag("--decouple", decouple, "force infinite junction strengths");
    verify_cmd->add_option("--out", out_path, "report JSON (stdout when omitted)");

    CLI::App* tune_cmd = app.add_subcommand("tune-chain", "pin chain eigenvalues to targets");
    tune_cmd->add_option("--targets", targets_csv, "comma-separated targets")->required();
    tune_cmd->add_option("--coupling", coupling, "junction strength p");
    tune_cmd->add_option("--tol", tol, "eigenvalue tolerance");
    tune_cmd->add_option("--out", out_path, "output schedule JSON")->required();

    CLI::App* ext_cmd = app.add_subcommand("extension", "matrix extension experiments");
    ext_cmd->add_option("--n", dim_n, "total dimension");
    ext_cmd->add_option("--m", dim_m, "boundary dimension");
    ext_cmd->add_option("--xi-clusters", clusters_csv, "cluster locations")->required();
    ext_cmd->add_option("--mu", mu, "anchor point");
    ext_cmd->add_option("--seed", seed, "seed for the random defect battery");
    ext_cmd->add_option("--out", out_path, "report JSON")->required();

    CLI::App* rp_cmd = app.add_subcommand("rp-norms", "rooms-and-passages norm table");
    rp_cmd->add_option("--k-max", k_max, "largest row index");
    rp_cmd->add_option("--out", out_path, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return static_cast<int>(specforge::ErrorCode::Usage);
    }

    try {
        if (design_cmd->parsed()) {
            if (cells < 1) throw Error(ErrorCode::Usage, "--cells must be >= 1");
            return cmd_design(target_path, cells, out_path);
        }
        if (spectrum_cmd->parsed())
            return cmd_spectrum(schedule_path, truncate, lambda_max, out_path, oracle);
        if (verify_cmd->parsed())
            return cmd_verify(schedule_path, target_path, truncate, lambda_max, threshold,
                              skip_head, decouple, out_path);
        if (tune_cmd->parsed()) return cmd_tune_chain(targets_csv, coupling, tol, out_path);
        if (ext_cmd->parsed())
            return cmd_extension(dim_n, dim_m, clusters_csv, mu, seed, out_path);
        if (rp_cmd->parsed()) return cmd_rp_norms(k_max, out_path);
    } catch (const Error& e) {
        json err;
        err["error"] = error_code_name(e.code());
        err["message"] = e.what();
        err["exit_code"] = e.exit_code();
        std::cerr << err.dump() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        json err;
        err["error"] = "Internal";
        err["message"] = e.what();
        err["exit_code"] = 1;
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return static_cast<int>(specforge::ErrorCode::Usage);
}
