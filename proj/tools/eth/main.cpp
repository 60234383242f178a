#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"

using namespace eth;

namespace {

constexpr int kUsageError = 3;

void print_summary(const RunConfig &cfg, const RunReport &rep)
{
    // a PASS only holds to the truncation order of the run
    const std::string order = "to order (D=" + std::to_string(cfg.degree) + ", D_y=" + std::to_string(cfg.y_degree) +
                              ", W_in=" + std::to_string(cfg.trunc.lambda_inner) + ")";
    for (const CheckRecord &c : rep.checks) {
        const CheckResult &r = c.result;
        std::cout << verdict_str(r.verdict()) << "  " << r.id;
        if (!r.params.empty()) std::cout << " [" << r.params << "]";
        std::cout << "  certified=" << r.certified << " uncertified=" << r.uncertified << " nonzero=" << r.failed;
        if (r.verdict() == Verdict::Pass) std::cout << "  " << order;
        if (!r.nonzero.empty()) std::cout << "  witness " << r.nonzero.front().where << " = " << r.nonzero.front().value;
        for (const auto &n : r.notes)
            if (r.verdict() == Verdict::Inconclusive) std::cout << "  (" << n << ")";
        std::cout << "\n";
    }
    std::cout << "global: " << verdict_str(rep.global);
    if (rep.global == Verdict::Pass) std::cout << " " << order;
    std::cout << "\n";
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Exact symbolic checks for the extended Toda hierarchy"};
    app.require_subcommand(1);

    std::string config_path, pipeline, fixture, report_path;
    int jobs = 0;
    CLI::App *run = app.add_subcommand("run", "Run a pipeline and write a JSON report");
    run->add_option("--config", config_path, "INI configuration file");
    run->add_option("--pipeline", pipeline, "dress | evolve | tau | prop2 | fay | hqe | toda | kdv | all");
    run->add_option("--fixture", fixture, "named preset (see list-fixtures)");
    run->add_option("--report", report_path, "JSON report path");
    run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    std::string check_id;
    CLI::App *explain = app.add_subcommand("explain", "Describe a check id");
    explain->add_option("check_id", check_id, "check id")->required();

    CLI::App *list = app.add_subcommand("list-fixtures", "List named presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsageError;
    }

    if (*list) {
        for (const auto &f : fixtures()) std::cout << f.name << "\t" << f.description << "\n";
        return 0;
    }
    if (*explain) {
        try {
            std::cout << eth::explain(check_id) << "\n";
            return 0;
        } catch (const PreconditionError &e) {
            std::cerr << e.what() << "\nknown ids:";
            for (const auto &id : check_ids()) std::cerr << " " << id;
            std::cerr << "\n";
            return kUsageError;
        }
    }

    RunConfig cfg;
    try {
        cli::LoadedConfig loaded;
        if (!config_path.empty()) loaded = cli::load_config(config_path);
        cfg = loaded.run;
        if (!pipeline.empty()) cfg.pipeline = pipeline;
        if (!fixture.empty()) cfg.fixture = fixture;
        if (jobs > 0) cfg.jobs = jobs;
        if (report_path.empty()) report_path = loaded.report_path;
        if (!cfg.fixture.empty()) {
            const std::string p = cfg.pipeline;
            const int j = cfg.jobs;
            cfg = with_fixture(cfg, cfg.fixture);
            cfg.pipeline = p;
            cfg.jobs = j;
        }
        cfg.validate();
    } catch (const std::exception &e) {
        std::cerr << e.what() << "\n";
        return kUsageError;
    }

    RunReport rep;
    try {
        rep = eth::run(cfg);
    } catch (const PreconditionError &e) {
        std::cerr << e.what() << "\n";
        return kUsageError;
    }
    print_summary(cfg, rep);
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) {
            std::cerr << "cannot write report '" << report_path << "'\n";
            return kUsageError;
        }
        out << cli::report_json(cfg, rep).dump(2) << "\n";
    }
    return exit_code(rep.global);
}
