// Command-line workbench: lattice generation, circuit construction,
// scheduling, noise simulation, decoding benchmarks, purification runs,
// resource accounting, and the algebra verification traces.

#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "defectq/codes.hpp"
#include "defectq/decoder.hpp"
#include "defectq/metrics.hpp"
#include "defectq/purify.hpp"
#include "json.hpp"

using namespace defectq;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void apply_thread_cap() {
    if (const char* env = std::getenv("DEFECTQ_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
}

int cmd_lattice_gen(int d, double yield, int count, uint64_t seed, const std::string& out_dir) {
    fs::create_directories(out_dir);
    auto base = generate_perfect(d);
    for (int i = 0; i < count; i++) {
        Lattice l = yield < 1.0 ? apply_yield(base, yield, Rng::derive(seed, uint64_t(i))) : base;
        auto layout = reconfigure(l);
        auto enc = encodability_check(l, layout);
        std::string name = "lattice_d" + std::to_string(d) + "_" + std::to_string(i) + ".json";
        spit((fs::path(out_dir) / name).string(), l.to_json());
        std::cout << name << " faulty=" << l.count(Role::Data, Status::Faulty) +
                                               l.count(Role::Ancilla, Status::Faulty)
                  << " encodable=" << (enc.encodable ? "yes" : "no")
                  << " reduced_d=" << std::min(enc.reduced_d_x, enc.reduced_d_z) << "\n";
    }
    return 0;
}

int cmd_circuit_build(const std::string& lattice_file, const std::string& out) {
    Lattice l = Lattice::from_json(slurp(lattice_file));
    auto layout = reconfigure(l);
    auto circs = compose_all(l, layout);
    spit(out, circuits_to_json(l, circs));
    int deepest = 0;
    for (const auto& c : circs) deepest = std::max(deepest, c.depth);
    std::cout << "stabilizers=" << circs.size() << " deepest=" << deepest << "\n";
    return 0;
}

int cmd_schedule(const std::string& circuits_file, int steps, const std::string& out) {
    auto [l, circs] = circuits_from_json(slurp(circuits_file));
    auto w = schedule(circs, steps, l);
    if (!out.empty()) spit(out, whole_circuit_to_json(w));
    std::cout << "horizon=" << w.horizon << " cycles=" << w.cycle_boundaries.size()
              << " steps_per_cycle=" << w.average_ec_cycle() << "\n";
    return 0;
}

int cmd_simulate(const std::string& lattice_file, double p, long trials, uint64_t seed,
                 const std::string& preset, int cycles) {
    if (preset == "purification") {
        std::cout << "the purification preset runs through `defectq purify`\n";
        return 2;
    }
    Lattice l = Lattice::from_json(slurp(lattice_file));
    auto ctx = build_context(l, p, cycles);
    auto r = logical_error_rate(ctx, trials, seed);
    std::cout << "trials=" << r.trials << " cycles_per_trial=" << r.cycles_per_trial
              << " logical_x_per_cycle=" << r.x_rate_per_cycle()
              << " logical_z_per_cycle=" << r.z_rate_per_cycle()
              << " x_errors=" << r.x_errors << " z_errors=" << r.z_errors << "\n";
    return 0;
}

int cmd_decode_bench(uint64_t seed) {
    auto ctx = build_context(generate_perfect(3), 1e-3, 6);
    Rng rng(seed);
    int checked = 0;
    for (int trial = 0; trial < 200; trial++) {
        const Nest& nest = trial % 2 ? ctx.nest_x : ctx.nest_z;
        int k = 2 + 2 * int(rng.next_below(4));
        std::set<int> pick;
        while (int(pick.size()) < k) pick.insert(int(rng.next_below(nest.n_vertices)));
        std::vector<int> ev(pick.begin(), pick.end());
        auto a = mwpm(ev, nest);
        auto b = mwpm_brute_force(ev, nest);
        if (std::abs(a.total_weight - b.total_weight) > 1e-4) {
            std::cout << "MISMATCH at instance " << trial << "\n";
            return 1;
        }
        checked++;
    }
    std::cout << "matching equals exhaustive search on " << checked << " instances\n";
    return 0;
}

int cmd_resources(int d, bool as_json) {
    auto r = resource_formulas(d);
    if (as_json) {
        nlohmann::json j = {
            {"d", r.d},
            {"planar_qubits_per_logical", r.planar_qubits_per_logical},
            {"deformation_qubits_per_logical", r.deformation_qubits_per_logical},
            {"rotated_qubits_per_logical", r.rotated_qubits_per_logical},
            {"superstabilizer_steps", r.superstabilizer_steps},
            {"superstabilizer_steps_improved", r.superstabilizer_steps_improved},
            {"braiding_cnot_steps", r.braiding_cnot_steps},
            {"deformation_cnot_steps", r.deformation_cnot_steps},
            {"planar_cnot_steps", r.planar_cnot_steps},
            {"d_opt", r.d_opt},
            {"d_short", r.d_short},
            {"d_eff", r.d_eff},
            {"redundant_logical_ops",
             r.redundant_integral ? nlohmann::json(r.redundant_logical_ops) : nlohmann::json()},
            {"cat_cycles_linear", r.cat_cycles_linear},
            {"cat_cycles_circular", r.cat_cycles_circular},
        };
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "d = " << r.d << "\n"
              << "planar qubits/logical        " << r.planar_qubits_per_logical << "\n"
              << "deformation qubits/logical   " << r.deformation_qubits_per_logical << "\n"
              << "rotated qubits/logical       " << r.rotated_qubits_per_logical << "\n"
              << "superstabilizer steps        " << r.superstabilizer_steps << " (improved "
              << r.superstabilizer_steps_improved << ")\n"
              << "braiding CNOT steps          " << r.braiding_cnot_steps << "\n"
              << "deformation CNOT steps       " << r.deformation_cnot_steps << "\n"
              << "planar CNOT steps            " << r.planar_cnot_steps << "\n"
              << "d_o/d_s/d_e                  " << r.d_opt << "/" << r.d_short << "/" << r.d_eff
              << "\n"
              << "redundant logical operators  "
              << (r.redundant_integral ? std::to_string(r.redundant_logical_ops) : "n/a") << "\n"
              << "cat cycles linear/circular   " << r.cat_cycles_linear << "/"
              << r.cat_cycles_circular << "\n";
    return 0;
}

int cmd_verify_algebra() {
    int fails = 0;
    auto report = [&](const std::string& name, const TraceReport& r) {
        std::cout << (r.ok ? "[PASS] " : "[FAIL] ") << name << " (" << r.steps.size()
                  << " checks)\n";
        for (const auto& f : r.failures) std::cout << "       " << f << "\n";
        fails += !r.ok;
    };
    report("state-injection trace", verify_state_injection_trace());
    report("lattice-surgery CNOT trace", verify_lattice_surgery_cnot_trace());
    report("ZZ-teleportation trace", verify_zz_teleportation_trace());
    auto cat = cat_state_check(5, 5);
    std::cout << (cat.ok ? "[PASS] " : "[FAIL] ") << "cat-state check (depth " << cat.depth
              << ", cycles " << cat.cycles_linear << "/" << cat.cycles_circular << ")\n";
    fails += !cat.ok;
    auto pc = deformation_patch_counts();
    bool patch_ok = pc.data_qubits == 48 && pc.z_stabilizers == 19 &&
                    pc.x_stabilizers_independent == 28 && pc.degrees_of_freedom == 1;
    std::cout << (patch_ok ? "[PASS] " : "[FAIL] ") << "deformation patch counts ("
              << pc.data_qubits << " data, " << pc.z_stabilizers << " Z, "
              << pc.x_stabilizers_independent << " X)\n";
    fails += !patch_ok;
    return fails;
}

int cmd_purify(const std::string& scheme_s, const std::string& code_a, const std::string& code_b,
               double p, int rounds, long trials, const std::string& source_s, uint64_t seed,
               const std::string& csv_path) {
    PurifyConfig cfg;
    if (scheme_s == "physical")
        cfg.scheme = Scheme::physical;
    else if (scheme_s == "before")
        cfg.scheme = Scheme::before;
    else if (scheme_s == "after")
        cfg.scheme = Scheme::after;
    else if (scheme_s == "after-strict")
        cfg.scheme = Scheme::after_strict;
    else
        throw CLI::ValidationError("scheme", "unknown scheme " + scheme_s);
    cfg.code_a = code_by_name(code_a);
    cfg.code_b = code_by_name(code_b);
    cfg.p = p;
    cfg.rounds = rounds;
    cfg.trials = trials;
    cfg.source = source_s == "local" ? Source::local_gates : Source::optical;
    cfg.seed = seed;
    auto rows = purification_table(cfg);
    std::string csv = purification_csv(rows);
    if (!csv_path.empty()) spit(csv_path, csv);
    std::cout << csv;
    return 0;
}

int cmd_metrics(const std::string& lattice_file) {
    Lattice l = Lattice::from_json(slurp(lattice_file));
    auto layout = reconfigure(l);
    auto circs = compose_all(l, layout);
    auto w = schedule(circs, 7 * 36, l);
    auto m = compute_metrics(l, layout, circs, w);
    nlohmann::json j;
    for (const auto& [k, v] : m.columns()) j[k] = v;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_correlate(const std::string& csv_file, bool log_target) {
    // CSV: header with metric names plus final column `rate`
    std::ifstream in(csv_file);
    if (!in) throw std::runtime_error("cannot open " + csv_file);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> names;
    size_t pos = 0;
    while (pos != std::string::npos) {
        size_t c = line.find(',', pos);
        names.push_back(line.substr(pos, c == std::string::npos ? c : c - pos));
        pos = c == std::string::npos ? c : c + 1;
    }
    std::vector<std::vector<double>> cols(names.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        size_t p2 = 0;
        for (size_t i = 0; i < names.size(); i++) {
            size_t c = line.find(',', p2);
            cols[i].push_back(std::stod(line.substr(p2, c == std::string::npos ? c : c - p2)));
            p2 = c == std::string::npos ? c : c + 1;
        }
    }
    if (names.empty() || names.back() != "rate")
        throw std::runtime_error("last column must be `rate`");
    const auto& rate = cols.back();
    std::vector<double> target;
    for (double r : rate) target.push_back(log_target ? std::log(r) : r);
    for (size_t i = 0; i + 1 < names.size(); i++) {
        double corr = pearson(cols[i], target);
        std::cout << names[i] << "," << (std::isnan(corr) ? "undefined" : std::to_string(corr))
                  << "\n";
    }
    return 0;
}

int cmd_run(const std::string& config_file);

} // namespace

int main(int argc, char** argv) {
    apply_thread_cap();
    CLI::App app{"surface-code-on-defective-lattice and Bell-pair purification workbench"};
    app.require_subcommand(1);

    // lattice gen
    auto* lat = app.add_subcommand("lattice", "lattice generation");
    auto* gen = lat->add_subcommand("gen", "generate perfect or yield-degraded lattices");
    int d = 5, count = 1;
    double yield = 1.0;
    uint64_t seed = 1;
    std::string out_dir = ".";
    gen->add_option("--d", d, "code distance (odd, >= 3)")->required();
    gen->add_option("--yield", yield, "device yield in (0,1]");
    gen->add_option("--count", count, "number of lattices");
    gen->add_option("--seed", seed, "master seed");
    gen->add_option("--out", out_dir, "output directory");

    auto* circ = app.add_subcommand("circuit", "stabilizer circuits");
    auto* build = circ->add_subcommand("build", "compose circuits for a lattice");
    std::string lattice_file, out_file = "circuits.json";
    build->add_option("--lattice", lattice_file, "lattice JSON")->required();
    build->add_option("--out", out_file, "output bundle");

    auto* sched = app.add_subcommand("schedule", "weave circuits into a whole circuit");
    std::string circuits_file, sched_out;
    int steps = 200;
    sched->add_option("--circuits", circuits_file, "circuit bundle JSON")->required();
    sched->add_option("--steps", steps, "target number of steps");
    sched->add_option("--out", sched_out, "whole-circuit JSON output");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo noise plus decoding");
    std::string sim_lattice, preset = "lattice";
    double sim_p = 1e-3;
    long sim_trials = 1000;
    uint64_t sim_seed = 1;
    int sim_cycles = 12;
    sim->add_option("--lattice,--circuit", sim_lattice, "lattice JSON")->required();
    sim->add_option("--p", sim_p, "physical error rate");
    sim->add_option("--trials", sim_trials, "number of trials");
    sim->add_option("--seed", sim_seed, "master seed");
    sim->add_option("--cycles", sim_cycles, "error-correction cycles per trial");
    sim->add_option("--preset", preset, "lattice|purification");

    auto* bench = app.add_subcommand("decode-bench", "matching oracle equivalence");
    uint64_t bench_seed = 7;
    bench->add_option("--seed", bench_seed, "seed");

    auto* pur = app.add_subcommand("purify", "Bell-pair purification simulation");
    std::string scheme = "physical", code_a = "physical", code_b = "physical", source = "optical",
                csv_path;
    double pur_p = 1e-3;
    int rounds = 4;
    long pur_trials = 100000;
    uint64_t pur_seed = 1;
    pur->add_option("--scheme", scheme, "physical|before|after|after-strict");
    pur->add_option("--codeA", code_a, "steane|surface3|physical");
    pur->add_option("--codeB", code_b, "steane|surface3|physical");
    pur->add_option("--p", pur_p, "local gate error rate");
    pur->add_option("--rounds", rounds, "purification rounds");
    pur->add_option("--trials", pur_trials, "delivered pairs per row");
    pur->add_option("--source", source, "optical|local");
    pur->add_option("--seed", pur_seed, "master seed");
    pur->add_option("--csv", csv_path, "CSV output path");

    auto* res = app.add_subcommand("resources", "closed-form resource accounting");
    int res_d = 5;
    bool res_json = false;
    res->add_option("--d", res_d, "code distance")->required();
    res->add_flag("--json", res_json, "JSON output");

    auto* verify = app.add_subcommand("verify-algebra", "tableau verification traces");

    auto* met = app.add_subcommand("metrics", "chip metrics for one lattice");
    std::string met_lattice;
    met->add_option("--lattice", met_lattice, "lattice JSON")->required();

    auto* corr = app.add_subcommand("correlate", "Pearson correlation of metrics vs rate");
    std::string corr_csv;
    bool corr_log = false;
    corr->add_option("--metrics", corr_csv, "CSV with metric columns and a final rate column")
        ->required();
    corr->add_flag("--log", corr_log, "correlate against ln(rate)");

    auto* run = app.add_subcommand("run", "experiment orchestration from a config file");
    std::string config_file;
    run->add_option("--config", config_file, "experiment config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_lattice_gen(d, yield, count, seed, out_dir);
        if (build->parsed()) return cmd_circuit_build(lattice_file, out_file);
        if (sched->parsed()) return cmd_schedule(circuits_file, steps, sched_out);
        if (sim->parsed())
            return cmd_simulate(sim_lattice, sim_p, sim_trials, sim_seed, preset, sim_cycles);
        if (bench->parsed()) return cmd_decode_bench(bench_seed);
        if (pur->parsed())
            return cmd_purify(scheme, code_a, code_b, pur_p, rounds, pur_trials, source, pur_seed,
                              csv_path);
        if (res->parsed()) return cmd_resources(res_d, res_json);
        if (verify->parsed()) return cmd_verify_algebra();
        if (met->parsed()) return cmd_metrics(met_lattice);
        if (corr->parsed()) return cmd_correlate(corr_csv, corr_log);
        if (run->parsed()) return cmd_run(config_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

namespace {

// Experiment orchestration: fans (lattice, p) work items out to the OpenMP
// pool and writes one CSV per experiment plus a manifest with seeds.
int cmd_run(const std::string& config_file) {
    auto cfg = nlohmann::json::parse(slurp(config_file));
    std::string kind = cfg.at("kind").get<std::string>();
    std::string out_dir = cfg.value("out", ".");
    fs::create_directories(out_dir);
    uint64_t seed = cfg.value("seed", 1);
    nlohmann::json manifest = {{"kind", kind}, {"seed", seed}, {"config", cfg}};

    if (kind == "threshold") {
        auto distances = cfg.value("distances", std::vector<int>{3, 5});
        auto grid = cfg.value("p_grid", std::vector<double>{0.003, 0.004, 0.006, 0.008});
        long cycles_per_point = cfg.value("cycles_per_point", 20000L);
        int trial_cycles = cfg.value("trial_cycles", 12);
        std::string csv = "d,p,logical_x_per_window,stderr,cycles\n";
        for (int dd : distances) {
            auto base = generate_perfect(dd);
            for (double p : grid) {
                auto ctx = build_context(base, p, trial_cycles);
                long trials = std::max<long>(1, cycles_per_point /
                                                    long(ctx.whole.cycle_boundaries.size()));
                auto r = logical_error_rate(ctx, trials, Rng::derive(seed, dd, uint64_t(p * 1e6)));
                double rate = r.x_rate_per_window(dd);
                double se = rate / std::sqrt(std::max(1.0, double(r.x_errors)));
                char buf[160];
                snprintf(buf, sizeof buf, "%d,%.6g,%.4g,%.4g,%ld\n", dd, p, rate, se,
                         trials * long(r.cycles_per_trial));
                csv += buf;
                std::cout << buf;
            }
        }
        spit((fs::path(out_dir) / "threshold.csv").string(), csv);
    } else if (kind == "single_fault_cycles") {
        std::string csv = "d,location,steps_per_cycle\n";
        for (int dd : cfg.value("distances", std::vector<int>{5, 7})) {
            int mid = (2 * dd - 1) / 2;
            if (mid % 2) mid--;
            std::vector<std::pair<std::string, std::pair<int, int>>> spots = {
                {"center", {mid, mid}}, {"west", {mid, 2}}, {"northwest", {2, 2}}};
            for (auto& [name, rc] : spots) {
                auto l = generate_perfect(dd);
                l.status[l.idx(rc.first, rc.second)] = Status::Faulty;
                auto layout = reconfigure(l);
                auto circs = compose_all(l, layout);
                auto w = schedule(circs, 36 * (dd + 3), l);
                char buf[96];
                snprintf(buf, sizeof buf, "%d,%s,%.3f\n", dd, name.c_str(), w.average_ec_cycle());
                csv += buf;
                std::cout << buf;
            }
        }
        spit((fs::path(out_dir) / "single_fault_cycles.csv").string(), csv);
    } else if (kind == "ensemble") {
        int dd = cfg.value("d", 5);
        double y = cfg.value("yield", 0.95);
        int count = cfg.value("count", 30);
        double p = cfg.value("p", 0.002);
        long trials = cfg.value("trials", 400L);
        int trial_cycles = cfg.value("trial_cycles", 10);
        std::string csv =
            "lattice,encodable,faulty,reduced_distance,ave_cdq_z,logical_x_per_cycle\n";
        std::string mcsv;
        for (int i = 0; i < count; i++) {
            auto l = apply_yield(generate_perfect(dd), y, Rng::derive(seed, 0xea5e, uint64_t(i)));
            auto layout = reconfigure(l);
            auto enc = encodability_check(l, layout);
            double rate = -1, cdq = -1;
            int reduced = std::min(enc.reduced_d_x, enc.reduced_d_z);
            bool coverable = true;
            DecoderContext ctx;
            if (enc.encodable) {
                try {
                    ctx = build_context(l, p, trial_cycles);
                } catch (const UncoverableStabilizer&) {
                    coverable = false;
                }
            }
            if (enc.encodable && coverable) {
                auto m = compute_metrics(l, layout, ctx.circuits, ctx.whole);
                cdq = m.ave_cdq_z;
                auto r = logical_error_rate(ctx, trials, Rng::derive(seed, 0xeb, uint64_t(i)));
                rate = std::max(r.x_rate_per_cycle(),
                                0.5 / (trials * std::max(1.0, r.cycles_per_trial)));
                if (mcsv.empty()) {
                    for (const auto& [name, v] : m.columns()) mcsv += name + ",";
                    mcsv += "rate\n";
                }
                for (const auto& [name, v] : m.columns()) mcsv += std::to_string(v) + ",";
                mcsv += std::to_string(rate) + "\n";
            }
            char buf[160];
            snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.4g,%.4g\n", i, enc.encodable ? 1 : 0,
                     l.count(Role::Data, Status::Faulty) + l.count(Role::Ancilla, Status::Faulty),
                     reduced, cdq, rate);
            csv += buf;
            std::cout << buf;
        }
        spit((fs::path(out_dir) / "ensemble.csv").string(), csv);
        if (!mcsv.empty()) spit((fs::path(out_dir) / "ensemble_metrics.csv").string(), mcsv);
    } else if (kind == "purification") {
        PurifyConfig pc;
        std::string scheme = cfg.value("scheme", "physical");
        pc.scheme = scheme == "before"         ? Scheme::before
                    : scheme == "after"        ? Scheme::after
                    : scheme == "after-strict" ? Scheme::after_strict
                                               : Scheme::physical;
        pc.code_a = code_by_name(cfg.value("codeA", "physical"));
        pc.code_b = code_by_name(cfg.value("codeB", "physical"));
        pc.p = cfg.value("p", 1e-3);
        pc.rounds = cfg.value("rounds", 4);
        pc.trials = cfg.value("trials", 100000L);
        pc.source = cfg.value("source", "optical") == "local" ? Source::local_gates
                                                              : Source::optical;
        pc.seed = seed;
        auto rows = purification_table(pc);
        spit((fs::path(out_dir) / "purification.csv").string(), purification_csv(rows));
        std::cout << purification_csv(rows);
    } else {
        throw std::runtime_error("unknown experiment kind: " + kind);
    }

    spit((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2));
    return 0;
}

} // namespace
