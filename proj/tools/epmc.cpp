// Command-line front end: two-stage and monolithic checking, script
// evaluation, repository verification, benchmark-model generation and the
// timing/size comparison harness.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "epmc/engine.hpp"
#include "epmc/generators.hpp"
#include "epmc/oracle.hpp"
#include "epmc/pipeline.hpp"

using namespace epmc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

// ---- check / mono ----------------------------------------------------------

struct CheckArgs {
    std::string model, repo, props, out;
    bool mono = false;
};

int run_check(const CheckArgs& args) {
    auto src = parse_model(slurp(args.model));
    auto queries = parse_property_file(slurp(args.props));
    pipeline::CheckOptions opts;
    opts.model_path = args.model;

    auto start = std::chrono::steady_clock::now();
    pipeline::FormulaSet fsr;
    if (args.mono) {
        fsr = pipeline::mono_check(src, queries, opts);
    } else {
        auto repo = patterns::load_repository(args.repo);
        fsr = pipeline::epmc_check(src, repo, queries, opts);
    }
    double elapsed = ms_since(start);

    if (!args.out.empty()) pipeline::emit_script_file(fsr, args.out);
    std::cout << (args.mono ? "monolithic" : "two-stage") << " check: " << fsr.stage1.size()
              << " stage-1 assignments, " << fsr.stage2.size() << " properties, "
              << elapsed << " ms\n";
    for (const auto& [name, expr] : fsr.stage1)
        std::cout << "  " << name << ": " << expr.op_count() << " ops\n";
    for (const auto& pf : fsr.stage2) {
        std::cout << "  " << pf.name << " (" << pf.text << "): " << pf.value.op_count() << " ops";
        if (pf.prob_less_than_one) std::cout << " [target reached with probability < 1; value 0]";
        std::cout << "\n";
    }
    std::cout << "total size: " << pipeline::formula_set_size(fsr) << " ops\n";
    if (!args.out.empty()) std::cout << "wrote " << args.out << "\n";
    return 0;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
    std::string formulas;
    std::vector<std::string> bindings;
    std::string sweep;
    std::string out;
};

int run_eval(const EvalArgs& args) {
    auto script = pipeline::parse_script(slurp(args.formulas));
    Valuation base;
    for (const auto& b : args.bindings) {
        auto eq = b.find('=');
        if (eq == std::string::npos) throw Error("binding must be name=value: " + b);
        base.set(b.substr(0, eq), Rat::from_decimal(b.substr(eq + 1)));
    }
    std::vector<std::string> property_names;
    for (const auto& a : script.assignments)
        if (!a.property_text.empty()) property_names.push_back(a.name);
    if (property_names.empty())
        for (const auto& a : script.assignments) property_names.push_back(a.name);

    auto report_missing = [&](const UnboundVariable& e) {
        std::cerr << "error: missing binding for '" << e.name << "'\n";
        return 1;
    };

    if (args.sweep.empty()) {
        try {
            auto values = script.evaluate(base);
            for (const auto& a : script.assignments) {
                if (!a.property_text.empty()) std::cout << "# " << a.property_text << "\n";
                std::cout << a.name << " = " << values.at(a.name) << "\n";
            }
        } catch (const UnboundVariable& e) {
            return report_missing(e);
        }
        return 0;
    }

    // --sweep var=a:b:step
    auto eq = args.sweep.find('=');
    if (eq == std::string::npos) throw Error("sweep must be var=a:b:step");
    std::string var = args.sweep.substr(0, eq);
    double a, b, step;
    if (std::sscanf(args.sweep.c_str() + eq + 1, "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0)
        throw Error("sweep must be var=a:b:step with step > 0");
    std::ostringstream csv;
    csv << var;
    for (const auto& name : property_names) csv << "," << name;
    csv << "\n";
    for (double v = a; v <= b + 1e-12; v += step) {
        Valuation point = base;
        point.set(var, v);
        try {
            auto values = script.evaluate(point);
            csv << v;
            for (const auto& name : property_names) csv << "," << values.at(name);
            csv << "\n";
        } catch (const UnboundVariable& e) {
            return report_missing(e);
        }
    }
    if (args.out.empty())
        std::cout << csv.str();
    else
        spit(args.out, csv.str());
    return 0;
}

// ---- verify-repo -----------------------------------------------------------

int run_verify(const std::string& repo_spec, int samples, double tol, bool quiet) {
    auto repo = patterns::load_repository(repo_spec);
    patterns::VerifyOptions opts;
    opts.samples = samples;
    opts.tol = tol;
    auto result = patterns::verify_repository(repo, opts);
    if (!quiet)
        for (const auto& line : result.lines) std::cout << line << "\n";
    std::cout << (result.pass ? "PASS" : "FAIL") << ": " << repo_spec << " ("
              << repo.definitions.size() << " patterns)\n";
    return result.pass ? 0 : 2;
}

// ---- gen -------------------------------------------------------------------

int write_benchmark(const gen::GeneratedBenchmark& g, const std::string& dir) {
    fs::create_directories(dir);
    std::string base = (fs::path(dir) / g.name).string();
    spit(base + "-annotated.pm", g.annotated_model);
    spit(base + "-monolithic.pm", g.monolithic_model);
    spit(base + ".pctl", g.properties);
    std::cout << "wrote " << base << "-annotated.pm, " << base << "-monolithic.pm, " << base
              << ".pctl\n";
    std::cout << "repository: " << g.repo_spec << "\n";
    return 0;
}

// ---- bench -----------------------------------------------------------------

struct BenchCell {
    std::string family, instance;
    double epmc_ms = 0;
    long epmc_ops = 0;
    std::string mono_status; // "ok", "T" (timeout), "M" (expression too large)
    double mono_ms = 0;
    long mono_ops = 0;
};

BenchCell bench_one(const gen::GeneratedBenchmark& g, const std::string& family, double timeout_s) {
    BenchCell cell;
    cell.family = family;
    cell.instance = g.name;
    auto queries = parse_property_file(g.properties);

    auto start = std::chrono::steady_clock::now();
    auto repo = patterns::load_repository(g.repo_spec);
    auto fse = pipeline::epmc_check(parse_model(g.annotated_model), repo, queries);
    cell.epmc_ms = ms_since(start);
    cell.epmc_ops = pipeline::formula_set_size(fse);

    pipeline::CheckOptions mono_opts;
    mono_opts.deadline = std::chrono::steady_clock::now() +
                         std::chrono::milliseconds(static_cast<long>(timeout_s * 1000));
    start = std::chrono::steady_clock::now();
    try {
        auto fsm = pipeline::mono_check(parse_model(g.monolithic_model), queries, mono_opts);
        cell.mono_ms = ms_since(start);
        cell.mono_ops = pipeline::formula_set_size(fsm);
        cell.mono_status = "ok";
    } catch (const TimeoutError&) {
        cell.mono_status = "T";
    } catch (const ResourceLimitError&) {
        cell.mono_status = "M";
    }
    return cell;
}

void print_cell(const BenchCell& cell) {
    std::cout << cell.instance << ": epmc " << cell.epmc_ms << " ms / " << cell.epmc_ops
              << " ops; mono " << cell.mono_status;
    if (cell.mono_status == "ok")
        std::cout << " " << cell.mono_ms << " ms / " << cell.mono_ops << " ops";
    std::cout << std::endl;
}

int run_bench(const std::string& family, std::vector<std::string> patterns_arg, int services_lo,
              int services_hi, std::vector<std::string> deployments, double timeout_s,
              const std::string& out) {
    std::vector<BenchCell> cells;
    if (family == "fx") {
        if (patterns_arg.empty())
            patterns_arg = {"SEQ", "PAR", "PROB", "SEQ_R", "SEQ_R1", "PAR_R", "PROB_R", "PROB_R1"};
        for (const auto& pname : patterns_arg) {
            auto kind = patterns::sbs_kind_from(pname);
            if (!kind) throw Error("unknown pattern: " + pname);
            for (int n = services_lo; n <= services_hi; ++n) {
                cells.push_back(bench_one(gen::fx(*kind, n), family, timeout_s));
                print_cell(cells.back());
            }
        }
    } else if (family == "multitier") {
        if (deployments.empty())
            deployments = {"D1", "D2", "D3", "D4", "D5", "D6", "D7", "D8"};
        for (const auto& d : deployments) {
            if (d.size() < 2 || d[0] != 'D') throw Error("deployment id must be D1..D8");
            cells.push_back(
                bench_one(gen::multitier_deployment(std::stoi(d.substr(1))), family, timeout_s));
            print_cell(cells.back());
        }
    } else {
        throw Error("unknown benchmark family: " + family);
    }

    std::ostringstream csv;
    csv << "family,instance,epmc_ms,epmc_ops,mono_status,mono_ms,mono_ops\n";
    for (const auto& c : cells) {
        csv << c.family << "," << c.instance << "," << c.epmc_ms << "," << c.epmc_ops << ","
            << c.mono_status << ",";
        if (c.mono_status == "ok")
            csv << c.mono_ms << "," << c.mono_ops;
        else
            csv << ",";
        csv << "\n";
    }
    if (out.empty())
        std::cout << csv.str();
    else
        spit(out, csv.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pattern-aware parametric model checker"};
    app.require_subcommand(1);

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "two-stage check of a pattern-annotated model");
    check->add_option("--model", check_args.model, "model file (.pm)")->required();
    check->add_option("--repo", check_args.repo,
                      "repository: file path, builtin:sbs?n=K or builtin:multitier?m=K&nmax=J");
    check->add_option("--props", check_args.props, "property file (.pctl)")->required();
    check->add_option("--out", check_args.out, "output assignment script (.m)");
    check->add_flag("--mono", check_args.mono, "monolithic check (ignore annotations)");

    CheckArgs mono_args;
    mono_args.mono = true;
    auto* mono = app.add_subcommand("mono", "monolithic check (annotations ignored)");
    mono->add_option("--model", mono_args.model, "model file (.pm)")->required();
    mono->add_option("--props", mono_args.props, "property file (.pctl)")->required();
    mono->add_option("--out", mono_args.out, "output assignment script (.m)");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "evaluate an emitted assignment script");
    eval->add_option("--formulas", eval_args.formulas, "assignment script (.m)")->required();
    eval->add_option("--bind", eval_args.bindings, "parameter binding name=value (repeatable)");
    eval->add_option("--sweep", eval_args.sweep, "sweep one variable: var=a:b:step (emits CSV)");
    eval->add_option("--out", eval_args.out, "CSV output path (default stdout)");

    std::string verify_repo_spec;
    int verify_samples = 50;
    double verify_tol = 1e-9;
    bool verify_quiet = false;
    auto* verify = app.add_subcommand("verify-repo",
                                      "check repository closed forms against pattern semantics");
    verify->add_option("--repo", verify_repo_spec, "repository spec")->required();
    verify->add_option("--samples", verify_samples, "samples per property");
    verify->add_option("--tol", verify_tol, "numeric tolerance");
    verify->add_flag("--quiet", verify_quiet, "summary line only");

    std::string gen_family, gen_out = ".", gen_pattern = "SEQ", gen_deployment = "D1";
    int gen_services = 2;
    auto* generate = app.add_subcommand("gen", "generate benchmark model pairs");
    generate->add_option("family", gen_family, "running-example | fx | multitier")->required();
    generate->add_option("--out", gen_out, "output directory");
    generate->add_option("--pattern", gen_pattern, "fx: service pattern (SEQ, PAR, ...)");
    generate->add_option("--services", gen_services, "fx: services per component");
    generate->add_option("--deployment", gen_deployment, "multitier: D1..D8");

    std::string bench_family = "fx", bench_out;
    std::vector<std::string> bench_patterns, bench_deployments;
    int bench_lo = 1, bench_hi = 3;
    double bench_timeout = 300.0;
    auto* bench = app.add_subcommand("bench", "time and size comparison, two-stage vs monolithic");
    bench->add_option("--family", bench_family, "fx | multitier");
    bench->add_option("--patterns", bench_patterns, "fx: patterns to run (default all 8)");
    bench->add_option("--services-min", bench_lo, "fx: smallest service count");
    bench->add_option("--services-max", bench_hi, "fx: largest service count");
    bench->add_option("--deployments", bench_deployments, "multitier: deployments (default all)");
    bench->add_option("--timeout", bench_timeout, "monolithic per-cell timeout (seconds)");
    bench->add_option("--out", bench_out, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(check_args);
        if (mono->parsed()) return run_check(mono_args);
        if (eval->parsed()) return run_eval(eval_args);
        if (verify->parsed())
            return run_verify(verify_repo_spec, verify_samples, verify_tol, verify_quiet);
        if (generate->parsed()) {
            if (gen_family == "running-example")
                return write_benchmark(gen::running_example(), gen_out);
            if (gen_family == "fx") {
                auto kind = patterns::sbs_kind_from(gen_pattern);
                if (!kind) throw Error("unknown pattern: " + gen_pattern);
                return write_benchmark(gen::fx(*kind, gen_services), gen_out);
            }
            if (gen_family == "multitier") {
                if (gen_deployment.size() < 2 || gen_deployment[0] != 'D')
                    throw Error("deployment id must be D1..D8");
                return write_benchmark(
                    gen::multitier_deployment(std::stoi(gen_deployment.substr(1))), gen_out);
            }
            throw Error("unknown family: " + gen_family);
        }
        if (bench->parsed())
            return run_bench(bench_family, bench_patterns, bench_lo, bench_hi, bench_deployments,
                             bench_timeout, bench_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
