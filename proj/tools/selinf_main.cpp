#include "selinf/chains.hpp"
#include "selinf/diversity.hpp"
#include "selinf/fixtures.hpp"
#include "selinf/json_io.hpp"
#include "selinf/lft.hpp"
#include "selinf/metrics.hpp"
#include "selinf/model.hpp"
#include "selinf/montecarlo.hpp"
#include "selinf/quadtests.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

namespace {

constexpr const char* kVersion = "selinf 0.1.0";

using selinf::json_io::Json;

// exit codes: 0 pass/feasible, 1 violation/infeasible, 2 input error, 3 undecided
constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInputError = 2;
constexpr int kExitUndecided = 3;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

int emit(Json& report, const Timer& timer, const std::string& human, int code) {
    report["timing_ms"] = timer.ms();
    std::cout << report.dump() << "\n";
    std::cerr << human << "\n";
    return code;
}

int emit_input_error(const std::string& command, const std::string& message) {
    Json report{{"command", command}, {"version", kVersion}, {"error", message}};
    std::cout << report.dump() << "\n";
    std::cerr << "error: " << message << "\n";
    return kExitInputError;
}

Json base_report(const std::string& command, const std::string& input) {
    Json report;
    report["command"] = command;
    report["version"] = kVersion;
    if (!input.empty()) report["input"] = input;
    return report;
}

Json parse_json_arg(const std::string& raw) {
    try {
        return Json::parse(raw);
    } catch (const std::exception&) {
        return Json(raw);  // bare shorthand like minkowski1
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"diagnostics for selective influences in factorial designs"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string path, metric_raw, partition_raw, mode = "float", design = "2x2", name, out_path;
    double tol = selinf::kEpsProb;
    double slack = 1e-10;
    double eps_lp = 1e-8;
    std::size_t max_len = 8;
    std::size_t max_subset = 0;
    int depth = 2;
    std::uint64_t trials = 10000, seed = 12345, max_iterations = 1'000'000;
    bool dump_witness = false, list_names = false;

    CLI::App* cmd_validate = app.add_subcommand("validate", "check a system document");
    cmd_validate->add_option("path", path)->required();

    CLI::App* cmd_marginal = app.add_subcommand("marginal", "complete marginal selectivity check");
    cmd_marginal->add_option("path", path)->required();
    cmd_marginal->add_option("--tol", tol, "agreement tolerance");
    cmd_marginal->add_option("--max-subset", max_subset, "cap on checked subset size (0 = all)");

    CLI::App* cmd_lft = app.add_subcommand("lft", "linear feasibility test");
    cmd_lft->add_option("path", path)->required();
    cmd_lft->add_option("--mode", mode)->check(CLI::IsMember({"float", "rational"}));
    cmd_lft->add_option("--eps", eps_lp, "float-mode feasibility tolerance");
    cmd_lft->add_option("--tol", tol, "marginal selectivity tolerance");
    cmd_lft->add_option("--max-iterations", max_iterations);
    cmd_lft->add_flag("--dump-witness", dump_witness, "include the Q-table in the report");

    CLI::App* cmd_chains = app.add_subcommand("chains", "chain (distance) test");
    cmd_chains->add_option("path", path)->required();
    cmd_chains->add_option("--metric", metric_raw, "metric spec as JSON (default minkowski p=1)");
    cmd_chains->add_option("--max-len", max_len);
    cmd_chains->add_option("--slack", slack);

    CLI::App* cmd_cospher = app.add_subcommand("cospher", "cosphericity test");
    cmd_cospher->add_option("path", path)->required();
    cmd_cospher->add_option("--slack", slack);
    cmd_cospher->add_option("--tol", tol);

    CLI::App* cmd_diversity = app.add_subcommand("diversity", "diversity (simplicial) test");
    cmd_diversity->add_option("path", path)->required();
    cmd_diversity->add_option("--partition", partition_raw, "partition as JSON (default identity, s=3)");
    cmd_diversity->add_option("--depth", depth);
    cmd_diversity->add_option("--slack", slack);

    CLI::App* cmd_mc = app.add_subcommand("mc", "random-system feasible fraction");
    cmd_mc->add_option("--design", design)->check(CLI::IsMember({"2x2", "3x2", "independent"}));
    cmd_mc->add_option("--trials", trials);
    cmd_mc->add_option("--seed", seed);
    cmd_mc->add_option("--mode", mode)->check(CLI::IsMember({"float", "rational"}));

    CLI::App* cmd_fixtures = app.add_subcommand("fixtures", "write a named example system");
    cmd_fixtures->add_option("--name", name);
    cmd_fixtures->add_option("--out", out_path, "output file (default stdout)");
    cmd_fixtures->add_flag("--list", list_names, "list fixture names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    Timer timer;

    try {
        if (app.got_subcommand(cmd_validate)) {
            Json report = base_report("validate", path);
            selinf::json_io::ParsedDocument doc;
            try {
                doc = selinf::json_io::load_system_file(path);
            } catch (const std::exception& e) {
                return emit_input_error("validate", e.what());
            }
            auto errors = selinf::validate_system(doc.system);
            report["rearranged"] = doc.had_diagram;
            report["valid"] = errors.empty();
            Json list = Json::array();
            for (const auto& e : errors) list.push_back({{"where", e.where}, {"message", e.message}});
            report["errors"] = std::move(list);
            std::string human = errors.empty()
                                    ? "valid"
                                    : "invalid: " + std::to_string(errors.size()) + " problem(s), first: " +
                                          errors.front().where + ": " + errors.front().message;
            return emit(report, timer, human, errors.empty() ? kExitPass : kExitViolation);
        }

        if (app.got_subcommand(cmd_marginal)) {
            Json report = base_report("marginal", path);
            auto doc = selinf::json_io::load_system_file(path);
            selinf::require_valid(doc.system);
            auto ms = selinf::check_marginal_selectivity(doc.system, tol, max_subset);
            report["tol"] = tol;
            report["result"] = selinf::json_io::ms_report_to_json(ms);
            std::string human = ms.satisfied
                                    ? "marginal selectivity satisfied (worst discrepancy " +
                                          std::to_string(ms.worst_discrepancy) + ")"
                                    : "marginal selectivity violated: " +
                                          std::to_string(ms.violations.size()) +
                                          " subset(s), worst discrepancy " +
                                          std::to_string(ms.worst_discrepancy);
            return emit(report, timer, human, ms.satisfied ? kExitPass : kExitViolation);
        }

        if (app.got_subcommand(cmd_lft)) {
            Json report = base_report("lft", path);
            auto doc = selinf::json_io::load_system_file(path);
            selinf::lft::Options opts;
            opts.mode = mode == "rational" ? selinf::lft::Mode::Rational : selinf::lft::Mode::Float;
            opts.eps_lp = eps_lp;
            opts.ms_tol = tol;
            opts.max_iterations = max_iterations;
            auto verdict = selinf::lft::lft(doc.system, opts);
            report["mode"] = mode;
            report["result"] = selinf::json_io::lft_verdict_to_json(verdict, dump_witness);
            int code = kExitUndecided;
            std::string human = "undecided: " + verdict.diagnostics;
            if (verdict.status == selinf::lft::Status::Feasible) {
                code = kExitPass;
                human = "feasible: " + verdict.diagnostics;
            } else if (verdict.status == selinf::lft::Status::Infeasible) {
                code = kExitViolation;
                human = "infeasible: " + verdict.diagnostics;
            }
            return emit(report, timer, human, code);
        }

        if (app.got_subcommand(cmd_chains)) {
            Json report = base_report("chains", path);
            auto doc = selinf::json_io::load_system_file(path);
            selinf::metrics::MetricSpec metric =
                metric_raw.empty() ? selinf::metrics::MetricSpec::minkowski(1.0)
                                   : selinf::json_io::parse_metric(parse_json_arg(metric_raw));
            auto enumerated = selinf::chains::enumerate_irreducible_chains(doc.system, max_len);
            auto violations = selinf::chains::distance_test(doc.system, metric, max_len, slack);
            report["metric"] = selinf::json_io::serialize_metric(metric);
            report["max_len"] = max_len;
            report["slack"] = slack;
            report["chains_enumerated"] = enumerated.chains.size();
            report["truncated"] = enumerated.truncated;
            Json list = Json::array();
            for (const auto& v : violations)
                list.push_back(selinf::json_io::chain_violation_to_json(v));
            report["violations"] = std::move(list);
            std::string human =
                violations.empty()
                    ? "chain test passed (" + std::to_string(enumerated.chains.size()) + " chains)"
                    : "chain test violated: " + std::to_string(violations.size()) +
                          " inequality instance(s), first on " +
                          selinf::chains::chain_label(violations.front().chain);
            return emit(report, timer, human, violations.empty() ? kExitPass : kExitViolation);
        }

        if (app.got_subcommand(cmd_cospher)) {
            Json report = base_report("cospher", path);
            auto doc = selinf::json_io::load_system_file(path);
            auto result = selinf::quadtests::cosphericity_test(doc.system, slack, tol);
            report["slack"] = slack;
            Json list = Json::array();
            for (const auto& v : result.violations)
                list.push_back(selinf::json_io::cosphericity_violation_to_json(v));
            report["violations"] = std::move(list);
            report["warnings"] = result.warnings;
            std::string human = result.violations.empty()
                                    ? "cosphericity test passed"
                                    : "cosphericity violated on " +
                                          std::to_string(result.violations.size()) + " quadruple(s)";
            return emit(report, timer, human,
                        result.violations.empty() ? kExitPass : kExitViolation);
        }

        if (app.got_subcommand(cmd_diversity)) {
            Json report = base_report("diversity", path);
            auto doc = selinf::json_io::load_system_file(path);
            selinf::diversity::Partition partition =
                partition_raw.empty()
                    ? selinf::diversity::identity_partition(doc.system, 3)
                    : selinf::json_io::parse_partition(parse_json_arg(partition_raw));
            auto result = selinf::diversity::diversity_test(doc.system, partition, depth, slack);
            report["partition"] = selinf::json_io::serialize_partition(partition);
            report["depth"] = depth;
            report["slack"] = slack;
            report["truncated"] = result.truncated;
            Json list = Json::array();
            for (const auto& v : result.violations)
                list.push_back(selinf::json_io::diversity_violation_to_json(v));
            report["violations"] = std::move(list);
            std::string human = result.violations.empty()
                                    ? "diversity test passed"
                                    : "diversity violated on " +
                                          std::to_string(result.violations.size()) + " set(s)";
            return emit(report, timer, human,
                        result.violations.empty() ? kExitPass : kExitViolation);
        }

        if (app.got_subcommand(cmd_mc)) {
            Json report = base_report("mc", "");
            selinf::lft::Options opts;
            opts.mode = mode == "rational" ? selinf::lft::Mode::Rational : selinf::lft::Mode::Float;
            auto mc = selinf::montecarlo::estimate_feasible_fraction(
                selinf::montecarlo::design_from_name(design), trials, seed, opts);
            report["design"] = design;
            report["trials"] = mc.trials;
            report["feasible_count"] = mc.feasible_count;
            report["fraction"] = mc.fraction;
            report["seed"] = mc.seed;
            report["config"] = mc.config;
            std::string human = "feasible fraction " + std::to_string(mc.fraction) + " over " +
                                std::to_string(mc.trials) + " trials";
            return emit(report, timer, human, kExitPass);
        }

        if (app.got_subcommand(cmd_fixtures)) {
            if (list_names) {
                Json report = base_report("fixtures", "");
                report["names"] = selinf::fixtures::fixture_names();
                return emit(report, timer, "fixture names listed", kExitPass);
            }
            if (name.empty()) return emit_input_error("fixtures", "--name or --list required");
            auto sys = selinf::fixtures::fixture_by_name(name);
            Json doc = selinf::json_io::serialize_system(sys);
            if (out_path.empty()) {
                std::cout << doc.dump(2) << "\n";
            } else {
                std::ofstream out(out_path);
                if (!out) return emit_input_error("fixtures", "cannot write " + out_path);
                out << doc.dump(2) << "\n";
            }
            std::cerr << "wrote fixture " << name << "\n";
            return kExitPass;
        }
    } catch (const std::exception& e) {
        return emit_input_error(app.get_subcommands().empty()
                                    ? "?"
                                    : app.get_subcommands().front()->get_name(),
                                e.what());
    }
    return kExitInputError;
}
