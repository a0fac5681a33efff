// Command-line front end: feasibility decisions, witness synthesis,
// extremal-family norm tables, sample grids and the self-test sweep.
// Structured output is JSON; sample grids are CSV.
//
// Exit codes: 0 feasible / success, 1 infeasible / failed self-test,
// 2 usage or validation error, 3 numerical failure or I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kolmo/errors.hpp"
#include "kolmo/feasibility.hpp"
#include "kolmo/serialize.hpp"
#include "kolmo/verify.hpp"

namespace {

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Args {
    int r = 4;
    int k2 = 1, k3 = 2;
    double M0 = 1.0, Mk2 = 1.0, Mk3 = 1.0, Mr = 1.0;
    double a = 1.0, b = 0.0, l = 1.0;
    double tol = kolmo::kDefaultTol;
    int samples = -1;
    int n = 100;
    std::string csv_path;
    std::string out_path;
    int trials = 1000;
    std::uint64_t seed = 1;
    int r_min = 3, r_max = 8;
};

void validate_problem_orders(const Args& args) {
    if (args.r < 4 || args.k2 < 1 || args.k2 >= args.k3 || args.k3 > args.r - 2)
        throw std::invalid_argument(
            "orders must satisfy 0 < k2 < k3 <= r-2 with r >= 4 (k3 = r-1 and "
            "k3 = r are not supported)");
}

kolmo::FourNormProblem make_problem(const Args& args) {
    validate_problem_orders(args);
    kolmo::FourNormProblem problem;
    problem.r = args.r;
    problem.k2 = args.k2;
    problem.k3 = args.k3;
    problem.targets.set(0, args.M0);
    problem.targets.set(args.k2, args.Mk2);
    problem.targets.set(args.k3, args.Mk3);
    problem.targets.set(args.r, args.Mr);
    return problem;
}

/// Rows "t,x,x1,...,x{r-1}": the function and its derivatives up to order
/// r-1 on an equally spaced grid over [lo, 0].
void write_sample_csv(std::ostream& out, const kolmo::PiecewisePolynomial& f, int r,
                      double lo, int n) {
    std::vector<kolmo::PiecewisePolynomial> derivs;
    derivs.push_back(f);
    for (int k = 1; k <= r - 1; ++k) derivs.push_back(kolmo::derivative(derivs.back()));

    out << "t,x";
    for (int k = 1; k <= r - 1; ++k) out << ",x" << k;
    out << "\n";
    out.precision(17);
    for (int i = 0; i <= n; ++i) {
        const double t = lo + (0.0 - lo) * i / n;
        out << t;
        for (const auto& d : derivs) out << "," << kolmo::evaluate(d, std::min(t, 0.0));
        out << "\n";
    }
}

int run_feasible(const Args& args) {
    const auto report = kolmo::decide(make_problem(args), args.tol);
    std::cout << kolmo::to_json(report).dump(2) << "\n";
    return report.feasible ? kExitFeasible : kExitInfeasible;
}

int run_witness(const Args& args) {
    const auto problem = make_problem(args);
    const auto report = kolmo::decide(problem, args.tol);
    if (!report.feasible) {
        std::cout << kolmo::to_json(report).dump(2) << "\n";
        return kExitInfeasible;
    }
    const auto witness = kolmo::synthesize(problem, report, args.tol);
    std::cout << kolmo::to_json(witness).dump(2) << "\n";
    if (args.samples >= 0) {
        if (args.csv_path.empty())
            throw std::invalid_argument("--samples requires --csv PATH");
        std::ofstream out(args.csv_path);
        if (!out) {
            std::cerr << "error: cannot open " << args.csv_path << "\n";
            return kExitNumerical;
        }
        write_sample_csv(out, witness.as_piecewise(), args.r,
                         -witness.params.a - 1.0, args.samples);
        if (!out.good()) {
            std::cerr << "error: write failed on " << args.csv_path << "\n";
            return kExitNumerical;
        }
    }
    return kExitFeasible;
}

int run_norms(const Args& args) {
    const kolmo::ExtremalParams params{args.r, args.a, args.b, args.l};
    std::cout << kolmo::to_json(kolmo::norm_table(params)).dump(2) << "\n";
    return kExitFeasible;
}

int run_sample(const Args& args) {
    const kolmo::ExtremalParams params{args.r, args.a, args.b, args.l};
    const auto f = kolmo::build_extremal(params);
    std::ofstream out(args.out_path);
    if (!out) {
        std::cerr << "error: cannot open " << args.out_path << "\n";
        return kExitNumerical;
    }
    write_sample_csv(out, f, args.r, -args.a - 1.0, args.n);
    return out.good() ? kExitFeasible : kExitNumerical;
}

int run_selftest(const Args& args) {
    int threads = 1;
    if (const char* env = std::getenv("THREADS")) {
        threads = std::max(1, std::atoi(env));
    }
    const auto report =
        kolmo::property_sweep(args.r_min, args.r_max, args.trials, args.seed, threads);
    kolmo::write_jsonl(report, std::cout);
    const bool ok = report.failing_seeds.empty() && report.min_slack >= -report.slack_tol;
    return ok ? kExitFeasible : kExitInfeasible;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feasibility oracle for derivative sup-norm problems of "
                 "multiply monotone functions on the half-line (-inf, 0]"};
    app.require_subcommand(1);
    Args args;

    auto add_problem_opts = [&](CLI::App* cmd) {
        cmd->add_option("--r", args.r, "highest derivative order")->required();
        cmd->add_option("--k2", args.k2, "second order, 0 < k2 < k3")->required();
        cmd->add_option("--k3", args.k3, "third order, k2 < k3 <= r-2")->required();
        cmd->add_option("--M0", args.M0, "target sup-norm of the function")->required();
        cmd->add_option("--Mk2", args.Mk2, "target at order k2")->required();
        cmd->add_option("--Mk3", args.Mk3, "target at order k3")->required();
        cmd->add_option("--Mr", args.Mr, "target at order r")->required();
        cmd->add_option("--tol", args.tol, "feasibility tolerance (floor 1e-13)")
            ->default_val(kolmo::kDefaultTol);
    };
    auto add_params_opts = [&](CLI::App* cmd) {
        cmd->add_option("--r", args.r, "order of the family")->required();
        cmd->add_option("--a", args.a, "left support abscissa magnitude")->required();
        cmd->add_option("--b", args.b, "peak abscissa magnitude, 0 <= b < a")->required();
        cmd->add_option("--l", args.l, "top-derivative norm")->required();
    };

    CLI::App* feasible = app.add_subcommand("feasible", "decide the four-norm problem");
    add_problem_opts(feasible);

    CLI::App* witness = app.add_subcommand("witness", "construct an achieving function");
    add_problem_opts(witness);
    witness->add_option("--samples", args.samples,
                        "emit N+1 sample rows of the witness to --csv");
    witness->add_option("--csv", args.csv_path, "CSV output path for --samples");

    CLI::App* norms = app.add_subcommand("norms", "derivative norms of a family member");
    add_params_opts(norms);

    CLI::App* sample = app.add_subcommand("sample", "tabulate a family member to CSV");
    add_params_opts(sample);
    sample->add_option("--n", args.n, "number of grid steps")->default_val(100);
    sample->add_option("--path", args.out_path, "CSV output path")->required();

    CLI::App* selftest = app.add_subcommand("selftest", "randomized inequality sweep");
    selftest->add_option("--trials", args.trials, "members per order")->default_val(1000);
    selftest->add_option("--seed", args.seed, "sweep seed")->default_val(1);
    selftest->add_option("--rmin", args.r_min, "lowest order")->default_val(3);
    selftest->add_option("--rmax", args.r_max, "highest order")->default_val(8);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (args.tol < 1e-13)
            throw std::invalid_argument("--tol floor is 1e-13");
        if (feasible->parsed()) return run_feasible(args);
        if (witness->parsed()) return run_witness(args);
        if (norms->parsed()) return run_norms(args);
        if (sample->parsed()) return run_sample(args);
        if (selftest->parsed()) return run_selftest(args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
