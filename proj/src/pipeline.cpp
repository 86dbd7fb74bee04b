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

#include "qpt/pipeline.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "qpt/gates.hpp"
#include "qpt/numeric_policy.hpp"

namespace qpt {

namespace fs = std::filesystem;

PauliTransferMatrix Scenario::ideal_process() const {
    if (process_ptm) return *process_ptm;
    return ptm_of_unitary(gate_unitary(process_name));
}

PauliTransferMatrix Scenario::true_process() const {
    PauliTransferMatrix r = ideal_process();
    if (!coherence.empty() && process_ns > 0.0) r = compose(decoherence_ptm(coherence, process_ns), r);
    return r;
}

GateSet Scenario::gateset() const {
    GateSet g = ideal_gateset(n_qubits());
    if (epsilon > 0.0) g = perturb_gateset_unitary(g, epsilon, gateset_seed, independent_roles);
    if (!coherence.empty() && pulse_ns > 0.0) g = perturb_gateset_decoherence(g, coherence, pulse_ns);
    return g;
}

Json scenario_to_json(const Scenario& s) {
    Json j;
    j["schema"] = kScenarioSchema;
    if (s.process_ptm) {
        j["process"] = Json{{"name", s.process_name}, {"ptm", ptm_to_json(*s.process_ptm)}};
    } else {
        j["process"] = s.process_name;
    }
    Json g;
    g["epsilon"] = s.epsilon;
    g["seed"] = s.gateset_seed;
    g["independent_roles"] = s.independent_roles;
    if (!s.coherence.empty()) {
        std::vector<double> t1, t2;
        for (const auto& c : s.coherence) {
            t1.push_back(c.t1_us);
            t2.push_back(c.t2_us);
        }
        g["decoherence"] = Json{{"t1_us", t1}, {"t2_us", t2}, {"pulse_ns", s.pulse_ns}, {"process_ns", s.process_ns}};
    }
    j["gateset"] = std::move(g);
    const RVector& m = s.detector.diagonal;
    j["measurement"] = Json{{"diagonal", std::vector<double>(m.data(), m.data() + m.size())},
                            {"sqrt_v", std::sqrt(s.detector.variance)},
                            {"shots", s.detector.shots},
                            {"noiseless", s.noiseless}};
    j["seed"] = s.seed;
    return j;
}

namespace {

std::vector<Coherence> coherence_from_json(const JsonDocument& doc, const Json& obj, const std::string& where) {
    const RVector t1 = doc.vector(obj, "t1_us", where);
    const RVector t2 = doc.vector(obj, "t2_us", where);
    if (t1.size() != t2.size() || t1.size() == 0) doc.fail(where + ".t2_us", "needs one entry per qubit, like t1_us");
    std::vector<Coherence> out;
    for (Eigen::Index q = 0; q < t1.size(); ++q) {
        if (!(t1(q) > 0.0) || !(t2(q) > 0.0)) doc.fail(where + ".t1_us", "coherence times must be positive");
        if (t2(q) > 2.0 * t1(q)) doc.fail(where + ".t2_us", "T2 must not exceed 2 T1");
        out.push_back({t1(q), t2(q)});
    }
    return out;
}

MeasurementOperator detector_from_json(const JsonDocument& doc, const Json& m, const std::string& where,
                                       bool* noiseless) {
    MeasurementOperator det = MeasurementOperator::calibrated_two_qubit();
    if (m.contains("diagonal")) det.diagonal = doc.vector(m, "diagonal", where);
    if (m.contains("sqrt_v")) {
        const double sv = doc.number(m, "sqrt_v", where);
        if (!(sv >= 0.0)) doc.fail(where + ".sqrt_v", "must be non-negative");
        det.variance = sv * sv;
    }
    if (m.contains("shots")) det.shots = doc.integer(m, "shots", where);
    if (noiseless) *noiseless = doc.boolean_or(m, "noiseless", false, where);
    try {
        det.validate();
    } catch (const DomainError& e) {
        doc.fail(where, e.what());
    }
    return det;
}

}  // namespace

Scenario scenario_from_json(const JsonDocument& doc, const fs::path& base_dir) {
    doc.expect_schema(kScenarioSchema);
    const Json& root = doc.root;
    Scenario s;
    if (root.contains("measurement")) {
        s.detector = detector_from_json(doc, root["measurement"], "measurement", &s.noiseless);
    }
    const int nq = s.detector.n_qubits();
    if (nq > 2) doc.fail("measurement.diagonal", "at most two qubits are supported");

    const Json& proc = doc.at(root, "process", "");
    if (proc.is_string()) {
        s.process_name = proc.get<std::string>();
    } else if (proc.is_object()) {
        s.process_name = proc.contains("name") ? doc.string(proc, "name", "process") : "custom";
        if (proc.contains("ptm")) {
            s.process_ptm = ptm_from_json(doc, proc["ptm"], nq, "process.ptm");
        } else if (proc.contains("ptm_file")) {
            const fs::path file = base_dir / doc.string(proc, "ptm_file", "process");
            const JsonDocument pd = load_json(file);
            s.process_ptm = ptm_from_json(pd, pd.at(pd.root, "ptm", ""), nq, "ptm");
            if (!proc.contains("name")) s.process_name = file.stem().string();
        } else {
            doc.fail("process", "needs \"ptm\" or \"ptm_file\"");
        }
    } else {
        doc.fail("process", "expected a gate name or an object");
    }
    try {
        const PauliTransferMatrix ideal = s.ideal_process();
        if (ideal.n_qubits() != nq) doc.fail("process", "acts on a different number of qubits than the detector");
    } catch (const DomainError& e) {
        doc.fail("process", e.what());
    }

    if (root.contains("gateset")) {
        const Json& g = root["gateset"];
        if (!g.is_object()) doc.fail("gateset", "expected an object");
        s.epsilon = doc.number_or(g, "epsilon", 0.0, "gateset");
        if (!(s.epsilon >= 0.0)) doc.fail("gateset.epsilon", "must be non-negative");
        s.gateset_seed = doc.unsigned_or(g, "seed", 0, "gateset");
        s.independent_roles = doc.boolean_or(g, "independent_roles", false, "gateset");
        if (g.contains("decoherence") && !g["decoherence"].is_null()) {
            const Json& d = g["decoherence"];
            s.coherence = coherence_from_json(doc, d, "gateset.decoherence");
            if (static_cast<int>(s.coherence.size()) != nq) {
                doc.fail("gateset.decoherence.t1_us", "needs one entry per qubit");
            }
            s.pulse_ns = doc.number_or(d, "pulse_ns", 0.0, "gateset.decoherence");
            s.process_ns = doc.number_or(d, "process_ns", 0.0, "gateset.decoherence");
            if (!(s.pulse_ns >= 0.0)) doc.fail("gateset.decoherence.pulse_ns", "must be non-negative");
            if (!(s.process_ns >= 0.0)) doc.fail("gateset.decoherence.process_ns", "must be non-negative");
        }
    }
    s.seed = doc.unsigned_or(root, "seed", 0, "");
    return s;
}

MeasurementRecord simulate_scenario(const Scenario& s) {
    const GateSet gates = s.gateset();
    const RVector variances = s.noiseless ? RVector::Zero(gates.size()) : RVector::Constant(gates.size(), s.detector.variance);
    MeasurementRecord rec = simulate_record(s.true_process(), gates, s.detector, s.seed, variances);
    rec.scenario = scenario_to_json(s).dump();
    return rec;
}

namespace {

std::string stem_of(const fs::path& p) {
    std::string stem = p.stem().string();
    for (const char* suffix : {".record", ".result", ".scenario", ".study"}) {
        const std::string sfx = suffix;
        if (stem.size() > sfx.size() && stem.compare(stem.size() - sfx.size(), sfx.size(), sfx) == 0) {
            stem.resize(stem.size() - sfx.size());
            break;
        }
    }
    return stem;
}

std::string provenance_lines(const std::string& digest) {
    return "# tool: " + tool_version() + "\n# input_digest: " + digest + "\n";
}

fs::path write_output(const CommandOptions& o, const std::string& name, const std::string& text, std::ostream& log) {
    const fs::path path = o.out_dir / name;
    write_text_file(path, text);
    log << "wrote " << path.string() << "\n";
    return path;
}

// Scenario embedded in a record, needed for the detector calibration.
Scenario embedded_scenario(const MeasurementRecord& rec, const std::string& source) {
    const JsonDocument sd = parse_json(rec.scenario, source + "#scenario");
    if (!sd.root.contains("schema")) throw SchemaError(source + ": record carries no scenario calibration");
    return scenario_from_json(sd);
}

GateSet record_gateset(const MeasurementRecord& rec, const std::string& source) {
    if (rec.labels_prep != rec.labels_meas) {
        throw SchemaError(source + ": preparation and analysis labels differ");
    }
    try {
        return gateset_from_labels(rec.n_qubits, rec.labels_prep);
    } catch (const DomainError& e) {
        throw SchemaError(source + ": " + e.what());
    }
}

ReconstructionOptions reconstruction_options(const CommandOptions& o) {
    ReconstructionOptions r;
    r.tp_constraint = o.tp_constraint;
    r.solver = o.solver;
    if (o.max_iterations) r.solver_options.max_iterations = *o.max_iterations;
    return r;
}

std::string fixed(double v, int digits) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

}  // namespace

std::string table_header() {
    return "gate,F_p,F_g,delta_F_g,R_II,F_pure,lambda_max,negative_weight,d_mle_ideal,d_mle_data,d_data_ideal";
}

std::string table_row(const std::string& gate, const GateDiagnostics& d) {
    std::ostringstream ss;
    ss << csv_field(gate) << ',' << format_double(d.f_p) << ',' << format_double(d.f_g) << ','
       << format_double(d.delta_f_g) << ',' << format_double(d.r_ii) << ',' << format_double(d.f_pure) << ','
       << format_double(d.lambda_max) << ',' << format_double(d.neg_weight) << ','
       << format_double(0.5 * d.mle_ideal.trace_norm) << ',' << format_double(0.5 * d.mle_data.trace_norm) << ','
       << format_double(0.5 * d.data_ideal.trace_norm);
    return ss.str();
}

std::vector<fs::path> cmd_simulate(const fs::path& scenario_file, const CommandOptions& o, std::ostream& log) {
    const JsonDocument doc = load_json(scenario_file);
    Scenario s = scenario_from_json(doc, scenario_file.parent_path());
    if (o.seed) s.seed = *o.seed;
    const MeasurementRecord rec = simulate_scenario(s);
    const Json j = record_to_json(rec);
    const std::string stem = stem_of(scenario_file);
    std::vector<fs::path> out;
    out.push_back(write_output(o, stem + ".record.json", dump_json(j), log));
    out.push_back(write_output(o, stem + ".record.csv", provenance_lines(j["digest"]) + record_csv(rec), log));
    return out;
}

std::vector<fs::path> cmd_reconstruct(const fs::path& record_file, const CommandOptions& o, std::ostream& log) {
    const std::string text = read_text_file(record_file);
    const std::string digest = sha256_hex(text);
    const JsonDocument doc = parse_json(text, record_file.string());
    const MeasurementRecord rec = record_from_json(doc);
    const Scenario s = embedded_scenario(rec, record_file.string());
    const QptDesign design(record_gateset(rec, record_file.string()), s.detector);
    design.require_full_rank();
    const PauliTransferMatrix ideal = s.ideal_process();
    const PauliTransferMatrix linear = design.linear_inversion(record_vector(rec));

    Json result;
    result["schema"] = kResultSchema;
    result["tool_version"] = tool_version();
    result["input_record_digest"] = digest;
    result["input_record"] = record_file.filename().string();
    result["gate"] = s.process_name;
    result["n_qubits"] = rec.n_qubits;
    result["options"] = Json{{"tp_constraint", o.tp_constraint},
                             {"solver", to_string(o.solver)},
                             {"linear_only", o.linear_only},
                             {"replicates", o.replicates.value_or(0)}};
    result["layout"] = "row-major";
    result["R_ideal"] = ptm_to_json(ideal);
    result["R_linear"] = ptm_to_json(linear);

    GateDiagnostics diag;
    bool optimal = true;
    if (o.linear_only) {
        diag = diagnose(ideal, linear, linear);
        result["R_mle"] = nullptr;
        result["solver_report"] = nullptr;
    } else {
        const MleResult mle = mle_reconstruct(rec, design, reconstruction_options(o));
        diag = diagnose(ideal, mle.ptm, linear);
        if (o.replicates && *o.replicates > 0) {
            BootstrapOptions b;
            b.replicates = *o.replicates;
            b.seed = o.seed.value_or(rec.seed);
            b.threads = o.threads;
            b.reconstruction = reconstruction_options(o);
            const BootstrapResult br = bootstrap(rec, design, ideal, b);
            diag.delta_f_g = br.delta_fg;
            result["bootstrap"] = Json{{"replicates", br.replicates}, {"seed", b.seed}, {"failed", br.failed},
                                       {"mean_offset", br.mean_offset}};
        }
        result["R_mle"] = ptm_to_json(mle.ptm);
        result["choi_mle"] = choi_to_json(choi_of_ptm(mle.ptm));
        result["tp_constraint"] = mle.tp_constraint;
        result["solver_report"] = report_to_json(mle.report);
        optimal = mle.report.status == SolverStatus::optimal;
    }
    result["diagnostics"] = diagnostics_to_json(diag);

    const std::string stem = stem_of(record_file);
    std::vector<fs::path> out;
    out.push_back(write_output(o, stem + ".result.json", dump_json(result), log));
    const std::string row = table_row(s.process_name, diag);
    out.push_back(write_output(o, stem + ".row.csv", provenance_lines(digest) + table_header() + "\n" + row + "\n", log));
    log << table_header() << "\n" << row << "\n";
    if (!optimal && !o.allow_nonoptimal) {
        throw SolverFailure("solver status " + result["solver_report"]["status"].get<std::string>() +
                            " (use --allow-nonoptimal to accept)");
    }
    return out;
}

namespace {

FaultyGatesetOptions faulty_options(const JsonDocument& doc, const CommandOptions& o) {
    const Json& root = doc.root;
    FaultyGatesetOptions f;
    f.trials = root.contains("trials") ? static_cast<int>(doc.integer(root, "trials", "")) : 10;
    if (f.trials < 1) doc.fail("trials", "must be at least 1");
    f.seed = doc.unsigned_or(root, "seed", 0, "");
    if (o.seed) f.seed = *o.seed;
    f.shot_noise = doc.boolean_or(root, "shot_noise", false, "");
    f.independent_roles = doc.boolean_or(root, "independent_roles", false, "");
    f.threads = o.threads;
    if (root.contains("measurement")) f.detector = detector_from_json(doc, root["measurement"], "measurement", nullptr);
    f.reconstruction = reconstruction_options(o);
    return f;
}

}  // namespace

std::vector<fs::path> cmd_study(const fs::path& study_file, const CommandOptions& o, std::ostream& log) {
    const std::string text = read_text_file(study_file);
    const std::string digest = sha256_hex(text);
    const JsonDocument doc = parse_json(text, study_file.string());
    doc.expect_schema(kStudySchema);
    const Json& root = doc.root;
    const std::string kind = doc.string(root, "kind", "");
    const std::string stem = stem_of(study_file);

    Json summary;
    summary["schema"] = "qpt.study-result/1";
    summary["tool_version"] = tool_version();
    summary["study_digest"] = digest;
    summary["study"] = root;
    summary["kind"] = kind;
    summary["options"] = Json{{"tp_constraint", o.tp_constraint}, {"solver", to_string(o.solver)}};
    std::ostringstream csv;
    csv << provenance_lines(digest);

    if (kind == "bootstrap") {
        const fs::path record_file = study_file.parent_path() / doc.string(root, "record", "");
        const std::string record_text = read_text_file(record_file);
        const JsonDocument rd = parse_json(record_text, record_file.string());
        const MeasurementRecord rec = record_from_json(rd);
        const Scenario s = embedded_scenario(rec, record_file.string());
        const QptDesign design(record_gateset(rec, record_file.string()), s.detector);
        design.require_full_rank();
        BootstrapOptions b;
        b.replicates = root.contains("replicates") ? static_cast<int>(doc.integer(root, "replicates", "")) : 100;
        if (o.replicates) b.replicates = *o.replicates;
        if (b.replicates < 2) doc.fail("replicates", "must be at least 2");
        b.seed = doc.unsigned_or(root, "seed", 0, "");
        if (o.seed) b.seed = *o.seed;
        b.threads = o.threads;
        b.reconstruction = reconstruction_options(o);
        const BootstrapResult r = bootstrap(rec, design, s.ideal_process(), b);
        summary["record_digest"] = sha256_hex(record_text);
        summary["seed"] = b.seed;
        summary["replicates"] = r.replicates;
        summary["failed"] = r.failed;
        summary["delta_F_g"] = r.delta_fg;
        summary["mean_offset"] = r.mean_offset;
        summary["reference_F_g"] = r.reference_fg;
        csv << "replicate,F_g\n";
        for (size_t k = 0; k < r.fidelities.size(); ++k) csv << k << ',' << format_double(r.fidelities[k]) << '\n';
        log << "delta_F_g " << r.delta_fg << " over " << r.fidelities.size() << " replicates (" << r.failed
            << " failed)\n";
        if (r.failed > 0 && !o.allow_nonoptimal) {
            write_output(o, stem + ".study-result.json", dump_json(summary), log);
            throw SolverFailure(std::to_string(r.failed) + " bootstrap replicates failed");
        }
    } else if (kind == "faulty-gateset") {
        const FaultyGatesetOptions f = faulty_options(doc, o);
        std::vector<double> eps;
        std::vector<double> targets;
        if (root.contains("target_pulse_fidelities")) {
            const RVector t = doc.vector(root, "target_pulse_fidelities", "");
            for (Eigen::Index i = 0; i < t.size(); ++i) {
                if (!(t(i) > 0.0 && t(i) <= 1.0)) doc.fail("target_pulse_fidelities", "entries must lie in (0, 1]");
                targets.push_back(t(i));
                eps.push_back(epsilon_for_pulse_fidelity(t(i), f));
            }
        } else {
            const RVector e = doc.vector(root, "epsilons", "");
            for (Eigen::Index i = 0; i < e.size(); ++i) {
                if (!(e(i) >= 0.0)) doc.fail("epsilons", "entries must be non-negative");
                eps.push_back(e(i));
            }
        }
        const auto rows = faulty_gateset_study(eps, f);
        summary["seed"] = f.seed;
        summary["trials"] = f.trials;
        Json jrows = Json::array();
        csv << "pulse_F_g,F_g,d_mle_ideal,epsilon,half_sqrt_trace_norm,half_frobenius,trials,failed\n";
        int failed = 0;
        for (const auto& r : rows) {
            csv << format_double(r.pulse_fg) << ',' << format_double(r.reconstructed_fg) << ','
                << format_double(r.distance) << ',' << format_double(r.epsilon) << ','
                << format_double(0.5 * r.distances.sqrt_trace_norm) << ',' << format_double(0.5 * r.distances.frobenius)
                << ',' << r.trials << ',' << r.failed << '\n';
            jrows.push_back(Json{{"epsilon", r.epsilon},
                                 {"pulse_F_g", r.pulse_fg},
                                 {"F_g", r.reconstructed_fg},
                                 {"distance", distances_to_json(r.distances)},
                                 {"trials", r.trials},
                                 {"failed", r.failed}});
            log << fixed(r.pulse_fg, 4) << "  " << fixed(r.reconstructed_fg, 4) << "  " << fixed(r.distance, 4) << "\n";
            failed += r.failed;
        }
        summary["rows"] = jrows;
        if (!targets.empty()) summary["target_pulse_fidelities"] = targets;
        if (failed > 0 && !o.allow_nonoptimal) {
            write_output(o, stem + ".study-result.json", dump_json(summary), log);
            throw SolverFailure(std::to_string(failed) + " trials failed");
        }
    } else if (kind == "decay") {
        const std::string gate_name = root.contains("gate") ? doc.string(root, "gate", "") : "CNOT";
        const std::string prep_name = root.contains("prep") ? doc.string(root, "prep", "") : "X-pi/2_I";
        const int n_max = root.contains("n_max") ? static_cast<int>(doc.integer(root, "n_max", "")) : 12;
        if (n_max < 1) doc.fail("n_max", "must be at least 1");
        PauliTransferMatrix ideal_gate = PauliTransferMatrix::identity(1);
        PauliTransferMatrix ideal_prep = PauliTransferMatrix::identity(1);
        try {
            ideal_gate = ptm_of_unitary(gate_unitary(gate_name));
            ideal_prep = ptm_of_unitary(gate_unitary(prep_name));
        } catch (const DomainError& e) {
            doc.fail("gate", e.what());
        }
        if (ideal_gate.n_qubits() != ideal_prep.n_qubits()) doc.fail("prep", "acts on a different number of qubits");
        PauliTransferMatrix gate = ideal_gate;
        if (root.contains("decoherence")) {
            const Json& d = root["decoherence"];
            const auto coh = coherence_from_json(doc, d, "decoherence");
            if (static_cast<int>(coh.size()) != gate.n_qubits()) doc.fail("decoherence.t1_us", "needs one entry per qubit");
            gate = compose(decoherence_ptm(coh, doc.number(d, "gate_ns", "decoherence")), gate);
        }
        const double p = doc.number_or(root, "depolarizing", 0.0, "");
        if (!(p >= 0.0 && p <= 1.0)) doc.fail("depolarizing", "must lie in [0, 1]");
        if (p > 0.0) gate = compose(depolarizing_ptm(gate.n_qubits(), p), gate);
        const auto pts = repeated_gate_experiment(gate, ideal_prep, n_max, ideal_gate, ideal_prep);
        std::vector<double> fs;
        csv << "N,F_s,concurrence\n";
        Json jpts = Json::array();
        for (const auto& pt : pts) {
            fs.push_back(pt.state_fidelity);
            csv << pt.n << ',' << format_double(pt.state_fidelity) << ',' << format_double(pt.concurrence) << '\n';
            jpts.push_back(Json{{"N", pt.n}, {"F_s", pt.state_fidelity}, {"concurrence", pt.concurrence}});
        }
        summary["points"] = jpts;
        if (fs.size() >= 4) {
            const DecayFit fit = fit_decay(fs);
            summary["fit"] = Json{{"A", fit.a},
                                  {"B", fit.b},
                                  {"F_g", fit.f_g},
                                  {"error_per_gate", 1.0 - fit.f_g},
                                  {"residual", fit.residual},
                                  {"converged", fit.converged},
                                  {"degenerate", fit.degenerate}};
            log << "fit F_g " << fit.f_g << (fit.degenerate ? " (degenerate)" : "") << "\n";
        }
    } else if (kind == "decoherence") {
        const auto coh = coherence_from_json(doc, root, "");
        const RVector durations = doc.vector(root, "durations_ns", "");
        std::vector<double> dv(durations.data(), durations.data() + durations.size());
        for (double t : dv)
            if (!(t >= 0.0)) doc.fail("durations_ns", "entries must be non-negative");
        const auto budget = decoherence_budget(coh, dv);
        csv << "duration_ns,infidelity\n";
        Json rows = Json::array();
        for (size_t i = 0; i < dv.size(); ++i) {
            csv << format_double(dv[i]) << ',' << format_double(budget[i]) << '\n';
            rows.push_back(Json{{"duration_ns", dv[i]}, {"infidelity", budget[i]}});
            log << dv[i] << " ns: " << fixed(100.0 * budget[i], 2) << "%\n";
        }
        summary["rows"] = rows;
    } else {
        doc.fail("kind", "unknown study kind \"" + kind + "\" (bootstrap, faulty-gateset, decay, decoherence)");
    }

    std::vector<fs::path> out;
    out.push_back(write_output(o, stem + ".study.csv", csv.str(), log));
    out.push_back(write_output(o, stem + ".study-result.json", dump_json(summary), log));
    return out;
}

std::vector<fs::path> cmd_render(const fs::path& result_file, const CommandOptions& o, std::ostream& log) {
    const std::string text = read_text_file(result_file);
    const std::string digest = sha256_hex(text);
    const JsonDocument doc = parse_json(text, result_file.string());
    doc.expect_schema(kResultSchema);
    const int nq = static_cast<int>(doc.integer(doc.root, "n_qubits", ""));
    const bool have_mle = doc.root.contains("R_mle") && !doc.root["R_mle"].is_null();
    const std::string key = have_mle ? "R_mle" : "R_linear";
    const PauliTransferMatrix r = ptm_from_json(doc, doc.at(doc.root, key, ""), nq, key);
    const std::string gate = doc.root.contains("gate") ? doc.string(doc.root, "gate", "") : "";
    const std::string stem = stem_of(result_file) + (have_mle ? "" : "_linear");

    std::vector<fs::path> out;
    out.push_back(write_output(o, stem + ".grid.csv", provenance_lines(digest) + ptm_grid_csv(r), log));
    out.push_back(write_output(o, stem + ".bars.csv", provenance_lines(digest) + pauli_bars_csv(r), log));
    std::string svg = ptm_heatmap_svg(r, gate + (have_mle ? " (MLE)" : " (linear inversion)"));
    svg.insert(svg.find('\n') + 1, "<!-- " + tool_version() + " input_digest " + digest + " -->\n");
    out.push_back(write_output(o, stem + ".svg", svg, log));
    return out;
}

std::vector<fs::path> cmd_report(const std::vector<fs::path>& result_files, const CommandOptions& o,
                                 std::ostream& log) {
    if (result_files.empty()) throw SchemaError("report: no result files given");
    std::ostringstream csv, md;
    csv << "# tool: " << tool_version() << "\n";
    md << "| Gate | F_p | F_g | dF_g | R_II | F_pure | lambda_max | sum neg | d(MLE,ideal) | d(MLE,data) | d(data,ideal) |\n";
    md << "|---|---|---|---|---|---|---|---|---|---|---|\n";
    std::vector<std::string> rows;
    for (const auto& f : result_files) {
        const std::string text = read_text_file(f);
        csv << "# input_digest: " << sha256_hex(text) << " " << f.filename().string() << "\n";
        const JsonDocument doc = parse_json(text, f.string());
        doc.expect_schema(kResultSchema);
        const Json& d = doc.at(doc.root, "diagnostics", "");
        GateDiagnostics g;
        g.f_p = doc.number(d, "F_p", "diagnostics");
        g.f_g = doc.number(d, "F_g", "diagnostics");
        g.delta_f_g = doc.number_or(d, "delta_F_g", 0.0, "diagnostics");
        g.r_ii = doc.number(d, "R_II", "diagnostics");
        g.f_pure = doc.number(d, "F_pure", "diagnostics");
        g.lambda_max = doc.number(d, "lambda_max", "diagnostics");
        g.neg_weight = doc.number(d, "negative_weight", "diagnostics");
        auto dist = [&](const char* key) {
            const Json& x = doc.at(d, key, "diagnostics");
            return Distances{2.0 * doc.number(x, "half_sqrt_trace_norm", key), 2.0 * doc.number(x, "half_frobenius", key),
                             2.0 * doc.number(x, "half_trace_norm", key)};
        };
        g.mle_ideal = dist("distance_mle_ideal");
        g.mle_data = dist("distance_mle_data");
        g.data_ideal = dist("distance_data_ideal");
        const std::string gate = doc.string(doc.root, "gate", "");
        rows.push_back(table_row(gate, g));
        md << "| " << gate << " | " << fixed(g.f_p, 4) << " | " << fixed(g.f_g, 4) << " | " << fixed(g.delta_f_g, 5)
           << " | " << fixed(g.r_ii, 3) << " | " << fixed(g.f_pure, 4) << " | " << fixed(g.lambda_max, 3) << " | "
           << fixed(g.neg_weight, 3) << " | " << fixed(0.5 * g.mle_ideal.trace_norm, 4) << " | "
           << fixed(0.5 * g.mle_data.trace_norm, 4) << " | " << fixed(0.5 * g.data_ideal.trace_norm, 4) << " |\n";
    }
    csv << table_header() << "\n";
    for (const auto& r : rows) csv << r << "\n";
    log << md.str();
    std::vector<fs::path> out;
    out.push_back(write_output(o, "report.csv", csv.str(), log));
    out.push_back(write_output(o, "report.md", "<!-- " + tool_version() + " -->\n" + md.str(), log));
    return out;
}

int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const RankError& e) {
        err << "rank error: " << e.what() << "\n";
        return kExitRank;
    } catch (const SolverFailure& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const ConvergenceError& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitOther;
    }
}

}  // namespace qpt
