#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "muntz/job.hpp"

namespace {

int read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "cannot read %s\n", path.c_str());
        return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"completeness analysis of Muntz systems in weighted L2 on the half-line"};
    app.require_subcommand(1);

    std::string spec_path, out_dir, precision;

    CLI::App* analyze = app.add_subcommand("analyze", "run the tasks in a job spec");
    analyze->add_option("spec", spec_path, "job spec (JSON)")->required();
    analyze->add_option("--out", out_dir, "output directory (overrides output_dir in the job file)");
    analyze->add_option("--precision", precision, "double or compensated")
        ->check(CLI::IsMember({"double", "compensated"}));

    CLI::App* validate = app.add_subcommand("validate", "validate a job spec");
    validate->add_option("spec", spec_path, "job spec (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    std::string raw;
    if (int rc = read_file(spec_path, raw)) return rc;
    muntz::ValidationResult vr = muntz::validate_spec(raw);

    if (validate->parsed()) {
        if (!vr.ok()) {
            for (const auto& e : vr.errors) std::fprintf(stderr, "%s\n", e.c_str());
            return 2;
        }
        std::printf("%s\n", vr.spec->echo.dump(2).c_str());
        return 0;
    }

    if (!vr.ok()) {
        for (const auto& e : vr.errors) std::fprintf(stderr, "%s\n", e.c_str());
        return 2;
    }
    muntz::JobSpec spec = std::move(*vr.spec);
    if (!out_dir.empty()) {
        spec.output_dir = out_dir;
        spec.echo["output_dir"] = out_dir;
    }
    if (!precision.empty()) {
        spec.precision =
            precision == "double" ? muntz::PrecisionMode::Double : muntz::PrecisionMode::Compensated;
        spec.echo["precision"] = precision;
    }
    return muntz::run_job(spec);
}
