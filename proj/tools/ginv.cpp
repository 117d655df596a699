// ginv: compute, verify, solve and benchmark tensor generalized inverses.
//
// Exit codes: 0 ok, 1 verification not satisfied, 2 parse error, 3 tensor not
// square, 4 SVD/convergence failure, 5 right-hand side outside R(D^k), 6 other.

#include <CLI11.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tgi/characterizations.hpp"
#include "tgi/ginv.hpp"
#include "tgi/io.hpp"
#include "tgi/problems.hpp"
#include "tgi/solvers.hpp"

namespace fs = std::filesystem;
using namespace tgi;

namespace {

enum Exit { kOk = 0, kUnsatisfied = 1, kParse = 2, kNotSquare = 3, kConvergence = 4, kRhs = 5, kOther = 6 };

struct Options {
    std::vector<std::string> inputs;
    std::string rhs = "from-range";
    std::vector<std::string> kinds;
    std::string system = "penrose-all";
    std::string mode = "cmp-constrained";
    std::vector<std::string> problems;
    std::optional<double> tol;
    int repeats = 30;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string out;
    int sample_q = 0;
    bool warn_range = false;
};

DenseTensor load_operand(const Options& o) {
    if (!o.inputs.empty()) return io::read_tensor_file(o.inputs.front());
    if (!o.problems.empty()) return make_problem(o.problems.front()).d;
    throw ParseError("no input tensor: pass --in FILE or --problem SPEC");
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << x;
    return os.str();
}

void print_residuals(const EquationResiduals<double>& r) {
    for (const auto& [eq, v] : r.values()) std::cout << "  eq (" << to_string(eq) << ")  " << fmt(v) << '\n';
}

void print_system(const SystemResidual<double>& r) {
    static const char* names[] = {"Z*D*Z = Z", "D*Z = target", "Z*D = target"};
    for (int i = 0; i < 3; ++i) std::cout << "  " << names[i] << "  " << fmt(r.eq_residuals[i]) << '\n';
}

std::optional<SystemKind> system_for(InverseKind k) {
    switch (k) {
        case InverseKind::CMP: return SystemKind::CMP;
        case InverseKind::DMP: return SystemKind::DMP;
        case InverseKind::MPD: return SystemKind::MPD;
        case InverseKind::MPCEP: return SystemKind::MPCEP;
        case InverseKind::CEPMP: return SystemKind::CEPMP;
        default: return std::nullopt;
    }
}

int cmd_compute(const Options& o) {
    const auto d = load_operand(o);
    const auto kind = parse_inverse_kind(o.kinds.empty() ? "mp" : o.kinds.front());
    const auto y = compute_inverse(d, kind);
    std::cout << "kind " << to_string(kind) << "  shape " << d.shape().to_string();
    if (d.is_square()) std::cout << "  index " << tensor_index(d);
    std::cout << '\n';
    if (auto sys = system_for(kind)) {
        print_system(verify_system(d, y, *sys, o.tol.value_or(kDefaultVerifyTol)));
    } else {
        print_residuals(verify_equations(d, y, defining_equations(kind)));
    }
    const fs::path path = o.out.empty() ? fs::path(o.out_dir) / (std::string(to_string(kind)) + ".tns") : fs::path(o.out);
    io::write_tensor_file(path, y);
    std::cout << "wrote " << path.string() << '\n';
    return kOk;
}

std::vector<Equation> equation_set(const std::string& name) {
    if (name == "penrose-all") return {Equation::E1, Equation::E2, Equation::E3, Equation::E4};
    if (name.rfind("penrose-", 0) == 0) {
        std::vector<Equation> out;
        for (char c : name.substr(8)) out.push_back(parse_equation(std::string(1, c)));
        return out;
    }
    if (name == "drazin") return defining_equations(InverseKind::Drazin);
    if (name == "core-ep") return defining_equations(InverseKind::CoreEP);
    if (name.rfind("equations=", 0) == 0) {
        std::vector<Equation> out;
        std::stringstream ss(name.substr(10));
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(parse_equation(tok));
        return out;
    }
    throw ParseError("unknown system '" + name + "'");
}

int cmd_verify(const Options& o) {
    if (o.inputs.size() != 2) throw ParseError("verify needs two --in files: D then Z");
    const auto d = io::read_tensor_file(o.inputs[0]);
    const auto z = io::read_tensor_file(o.inputs[1]);
    const double tol = o.tol.value_or(kDefaultVerifyTol);
    bool ok = false;
    const std::string suffix = "-system";
    if (o.system.size() > suffix.size() && o.system.ends_with(suffix)) {
        const auto kind = parse_system_kind(o.system.substr(0, o.system.size() - suffix.size()));
        const auto r = verify_system(d, z, kind, tol);
        print_system(r);
        ok = r.satisfied;
    } else {
        const auto r = verify_equations(d, z, equation_set(o.system));
        print_residuals(r);
        ok = r.satisfied(tol);
    }
    std::cout << (ok ? "satisfied" : "NOT satisfied") << " at tol " << fmt(tol) << '\n';
    return ok ? kOk : kUnsatisfied;
}

DenseTensor make_rhs(const Options& o, const DenseTensor& d) {
    const std::string& spec = o.rhs;
    if (spec.rfind("from-range", 0) == 0) {
        int k = tensor_index(d);
        if (spec.size() > 10) {
            if (spec[10] != ':') throw ParseError("--rhs from-range takes an optional ':k'");
            try {
                k = std::stoi(spec.substr(11));
            } catch (const std::exception&) {
                throw ParseError("bad power in --rhs '" + spec + "'");
            }
        }
        return range_rhs(d, k, o.seed);
    }
    if (spec == "random") return range_rhs(d, 0, o.seed);
    return io::read_tensor_file(spec);
}

void print_warning(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

int cmd_solve(const Options& o) {
    const auto d = load_operand(o);
    const auto b = make_rhs(o, d);
    SolveRequest<Complex> req{d, b, parse_solve_mode(o.mode)};
    if (o.warn_range) req.range_check = RangeCheck::Warn;
    const fs::path dir(o.out_dir);
    std::cout << "mode " << to_string(req.mode) << "  shape " << d.shape().to_string() << "  index "
              << tensor_index(d) << '\n';
    std::cout << "  rhs in R(D^k)  " << (rhs_in_power_range(d, b) ? "yes" : "no") << '\n';
    if (is_general_mode(req.mode)) {
        const auto fam = solve_general(req);
        std::cout << "  system  " << fam.constraint_desc << '\n';
        std::cout << "  particular residual  " << fmt(fam.residual(fam.particular)) << '\n';
        for (int i = 0; i < o.sample_q; ++i) {
            const auto q = random_tensor(b.shape(), o.seed + 1 + static_cast<std::uint64_t>(i));
            std::cout << "  member " << i << " residual  " << fmt(fam.residual(fam.member(q))) << '\n';
        }
        io::write_tensor_file(dir / "solution.tns", fam.particular);
        io::write_tensor_file(dir / "projector.tns", fam.projector);
        std::cout << "wrote " << (dir / "solution.tns").string() << " and " << (dir / "projector.tns").string() << '\n';
    } else {
        const auto z = solve_constrained(req, print_warning);
        const auto diag = diagnose_constrained(req, z);
        std::cout << "  ||D*Z - B|| / ||B||  " << fmt(diag.residual) << '\n';
        std::cout << "  in advertised range  " << (diag.in_advertised_range ? "yes" : "no") << '\n';
        std::cout << "  unique in range  " << (diag.unique_in_range ? "yes" : "no") << '\n';
        io::write_tensor_file(dir / "solution.tns", z);
        std::cout << "wrote " << (dir / "solution.tns").string() << '\n';
    }
    return kOk;
}

std::string file_stem(const std::string& label) {
    std::string s;
    for (char c : label) s += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return s;
}

void bench_neumann_surfaces(const Problem& p, const DenseTensor& b, const fs::path& dir) {
    const std::pair<InverseKind, const char*> kinds[] = {
        {InverseKind::MP, "mp"}, {InverseKind::Drazin, "group"}, {InverseKind::CoreEP, "core"}, {InverseKind::MPD, "mpd"}};
    const std::string stem = file_stem(p.label);
    std::vector<DenseTensor> sols;
    std::vector<fs::path> grids;
    std::vector<std::string> titles;
    for (const auto& [kind, name] : kinds) {
        sols.push_back(compute_inverse(p.d, kind) * b);
        grids.push_back(dir / (stem + "_" + name + ".csv"));
        titles.emplace_back(name);
        io::write_grid_csv(grids.back(), sols.back());
    }
    std::ofstream diff(dir / (stem + "_differences.csv"));
    diff << "a,b,difference,relative_to_rhs\n" << std::scientific << std::setprecision(6);
    const double nb = frobenius_norm(b);
    for (std::size_t i = 0; i < sols.size(); ++i) {
        for (std::size_t j = i + 1; j < sols.size(); ++j) {
            const double dif = frobenius_norm(sols[i] - sols[j]);
            diff << kinds[i].second << ',' << kinds[j].second << ',' << dif << ',' << dif / nb << '\n';
        }
    }
    io::write_plot_script(dir / (stem + "_plot.py"), grids, titles);
}

int cmd_bench(const Options& o) {
    if (o.problems.empty()) throw ParseError("bench needs at least one --problem");
    if (o.repeats < 1) throw ParseError("--repeats must be at least 1");
    std::vector<InverseKind> kinds;
    for (const auto& k : o.kinds) kinds.push_back(parse_inverse_kind(k));
    if (kinds.empty()) kinds.assign(kAllInverseKinds.begin(), kAllInverseKinds.end());
    const fs::path dir(o.out_dir);
    fs::create_directories(dir);
    std::vector<ResidualReport> reports;
    for (const auto& spec : o.problems) {
        const auto p = make_problem(spec);
        const auto b = range_rhs(p.d, tensor_index(p.d), o.seed);
        auto rep = residual_report(p.d, b, kinds, o.repeats);
        rep.problem = p.label;
        rep.seed = o.seed;
        for (const auto& row : rep.rows) {
            std::cout << p.label << "  " << to_string(row.kind) << "  residual " << fmt(row.residual) << "  mean "
                      << fmt(row.mean_time_s()) << " s\n";
        }
        if (spec.rfind("neumann", 0) == 0) bench_neumann_surfaces(p, b, dir);
        reports.push_back(std::move(rep));
    }
    io::write_report_csv(dir / "report.csv", reports);
    io::RunConfig cfg{"bench", "", o.kinds, {}, o.repeats, o.out_dir, o.seed};
    for (std::size_t i = 0; i < o.problems.size(); ++i) cfg.problem += (i ? ";" : "") + o.problems[i];
    std::ofstream(dir / "config.json") << io::config_to_text(cfg);
    std::cout << "wrote " << (dir / "report.csv").string() << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tensor generalized inverses under the Einstein product"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--in", o.inputs, "Tensor file (repeat for verify: D then Z)");
        sub->add_option("--problem", o.problems, "Generated problem, e.g. dirichlet:n=8:block=N2");
        sub->add_option("--kind", o.kinds, "Inverse kind: mp drazin core-ep cmp mpd dmp mpcep cepmp");
        sub->add_option("--tol", o.tol, "Verification tolerance");
        sub->add_option("--seed", o.seed, "Seed for generated right-hand sides");
        sub->add_option("--out-dir", o.out_dir, "Output directory");
    };

    auto* compute = app.add_subcommand("compute", "Compute a generalized inverse");
    common(compute);
    compute->add_option("--out", o.out, "Output file (default OUT_DIR/KIND.tns)");

    auto* verify = app.add_subcommand("verify", "Check a candidate against an equation set or system");
    common(verify);
    verify->add_option("--system", o.system,
                       "penrose-all, penrose-<digits>, drazin, core-ep, equations=<list>, <composite>-system");

    auto* solve = app.add_subcommand("solve", "Solve D*Z = B through a composite inverse");
    common(solve);
    solve->add_option("--rhs", o.rhs, "FILE, from-range[:k] or random");
    solve->add_option("--mode", o.mode, "Solve mode, e.g. cmp-constrained or mpcep-general");
    solve->add_option("--sample-q", o.sample_q, "Number of family members to sample (general modes)");
    solve->add_flag("--warn-range", o.warn_range, "Demote the R(D^k) check to a warning");

    auto* bench = app.add_subcommand("bench", "Residual and timing report over generated problems");
    common(bench);
    bench->add_option("--repeats", o.repeats, "Repeats per timing (default 30)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kParse;
    }

    try {
        if (*compute) return cmd_compute(o);
        if (*verify) return cmd_verify(o);
        if (*solve) return cmd_solve(o);
        if (*bench) return cmd_bench(o);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const NotSquare& e) {
        std::cerr << "not square: " << e.what() << '\n';
        return kNotSquare;
    } catch (const ConvergenceFailure& e) {
        std::cerr << "convergence failure: " << e.what() << '\n';
        return kConvergence;
    } catch (const RhsNotInRange& e) {
        std::cerr << "rhs not in range: " << e.what() << '\n';
        return kRhs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kOther;
}
