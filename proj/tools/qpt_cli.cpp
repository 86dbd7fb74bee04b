// Copyright 2026 The qpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qpt: simulate, reconstruct and analyse two-qubit process tomography.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qpt/pipeline.hpp"

namespace {

struct Flags {
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    bool tp = false;
    std::string solver = "interior-point";
    std::optional<int> replicates;
    bool allow_nonoptimal = false;
    bool linear_only = false;
    int threads = 0;
    std::optional<int> max_iterations;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--out", f.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", f.seed, "Override the seed in the input file");
    sub->add_flag("--tp-constraint", f.tp, "Constrain the estimate to trace-preserving maps");
    sub->add_option("--solver", f.solver, "SDP solver")
        ->check(CLI::IsMember({"interior-point", "projected-gradient"}))
        ->capture_default_str();
    sub->add_flag("--allow-nonoptimal", f.allow_nonoptimal, "Exit 0 even if the solver did not certify optimality");
    sub->add_option("--max-iterations", f.max_iterations, "Interior-point Newton step cap")->check(CLI::PositiveNumber);
    sub->add_option("--threads", f.threads, "Worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum process tomography with positivity-constrained estimation"};
    app.set_version_flag("--version", qpt::tool_version());
    app.require_subcommand(1);
    Flags f;
    std::string input;
    std::vector<std::string> inputs;

    auto* sim = app.add_subcommand("simulate", "Scenario file -> measurement record");
    sim->add_option("scenario", input, "Scenario JSON")->required()->check(CLI::ExistingFile);
    add_common(sim, f);

    auto* rec = app.add_subcommand("reconstruct", "Measurement record -> reconstructed R and diagnostics");
    rec->add_option("record", input, "Record JSON")->required()->check(CLI::ExistingFile);
    rec->add_flag("--linear-only", f.linear_only, "Skip the positivity-constrained fit");
    rec->add_option("--replicates", f.replicates, "Bootstrap replicates for delta_F_g (0 skips)")
        ->check(CLI::NonNegativeNumber);
    add_common(rec, f);

    auto* study = app.add_subcommand("study", "Bootstrap, faulty-gateset, decay or decoherence study");
    study->add_option("study", input, "Study JSON")->required()->check(CLI::ExistingFile);
    study->add_option("--replicates", f.replicates, "Bootstrap replicates")->check(CLI::PositiveNumber);
    add_common(study, f);

    auto* render = app.add_subcommand("render", "Result file -> R grid, Pauli bars and SVG heatmap");
    render->add_option("result", input, "Result JSON")->required()->check(CLI::ExistingFile);
    render->add_option("--out", f.out, "Output directory")->capture_default_str();

    auto* report = app.add_subcommand("report", "Result files -> summary table");
    report->add_option("results", inputs, "Result JSON files")->required()->check(CLI::ExistingFile);
    report->add_option("--out", f.out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qpt::kExitSchema;
    }

    qpt::CommandOptions o;
    o.out_dir = f.out;
    o.seed = f.seed;
    o.tp_constraint = f.tp;
    o.solver = qpt::solver_method_from_string(f.solver);
    o.replicates = f.replicates;
    o.allow_nonoptimal = f.allow_nonoptimal;
    o.linear_only = f.linear_only;
    o.threads = f.threads;
    o.max_iterations = f.max_iterations;

    try {
        if (app.got_subcommand(sim)) qpt::cmd_simulate(input, o, std::cout);
        else if (app.got_subcommand(rec)) qpt::cmd_reconstruct(input, o, std::cout);
        else if (app.got_subcommand(study)) qpt::cmd_study(input, o, std::cout);
        else if (app.got_subcommand(render)) qpt::cmd_render(input, o, std::cout);
        else {
            std::vector<std::filesystem::path> files(inputs.begin(), inputs.end());
            qpt::cmd_report(files, o, std::cout);
        }
    } catch (...) {
        return qpt::exit_code_for_current_exception(std::cerr);
    }
    return qpt::kExitOk;
}
