#include "cli.hpp"

#include <hdq/diffusion.hpp>
#include <hdq/error.hpp>
#include <hdq/heavy_traffic.hpp>
#include <hdq/io.hpp>
#include <hdq/oracle.hpp>
#include <hdq/simulator.hpp>
#include <hdq/stationary.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

namespace hdq::cli {

namespace {

struct ModelFlags {
    std::optional<double> rho1, rho2, rho12;
    std::optional<double> lambda1, mu1, lambda2, mu2;
    std::optional<int> ell_d, ell_u;
    std::string config;
};

struct SequenceFlags {
    double b1 = 1.0;
    double b2 = -1.0;
    double ld = 3.0;
    double lu = 10.0;
    double rho12 = 0.8;
    double offset = -1.0;
    std::string rounding = "nearest";
};

struct OutputFlags {
    std::string format = "csv";
    std::string out;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f)
{
    auto* r1 = cmd->add_option("--rho1", f.rho1, "lambda1 / mu1");
    auto* r2 = cmd->add_option("--rho2", f.rho2, "lambda2 / mu2");
    auto* r12 = cmd->add_option("--rho12", f.rho12, "lambda1 / mu2");
    auto* l1 = cmd->add_option("--lambda1", f.lambda1);
    auto* m1 = cmd->add_option("--mu1", f.mu1);
    auto* l2 = cmd->add_option("--lambda2", f.lambda2);
    auto* m2 = cmd->add_option("--mu2", f.mu2);
    cmd->add_option("--ell-d", f.ell_d, "lower threshold ell_d");
    cmd->add_option("--ell-u", f.ell_u, "upper threshold ell_u");
    auto* cfg = cmd->add_option("--config", f.config, "JSON file with one of the two parameter key sets");
    for (auto* ratio : {r1, r2, r12}) {
        for (auto* rate : {l1, m1, l2, m2})
            ratio->excludes(rate);
        ratio->excludes(cfg);
    }
    for (auto* rate : {l1, m1, l2, m2})
        rate->excludes(cfg);
}

void add_sequence_flags(CLI::App* cmd, SequenceFlags& f)
{
    cmd->add_option("--b1", f.b1, "drift scale of background 1")->capture_default_str();
    cmd->add_option("--b2", f.b2, "drift scale of background 2 (< 0)")->capture_default_str();
    cmd->add_option("--ld", f.ld, "scaled lower threshold")->capture_default_str();
    cmd->add_option("--lu", f.lu, "scaled upper threshold")->capture_default_str();
    cmd->add_option("--rho12", f.rho12, "limit of rho12")->capture_default_str();
    cmd->add_option("--rho12-offset", f.offset, "c in rho12 + c / sqrt(n)")->capture_default_str();
    cmd->add_option("--rounding", f.rounding, "nearest, floor or ceil")
        ->check(CLI::IsMember({"nearest", "floor", "ceil"}))
        ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, OutputFlags& f)
{
    cmd->add_option("--format", f.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    cmd->add_option("--out", f.out, "output path (default: standard output)");
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::precondition, "cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Model build_model(const ModelFlags& f)
{
    if (!f.config.empty()) {
        if (f.ell_d || f.ell_u)
            throw Error(ErrorCode::precondition, "--config already fixes ell_d and ell_u");
        return Model::validate(io::parse_model_config(read_file(f.config)));
    }
    if (!f.ell_d || !f.ell_u)
        throw Error(ErrorCode::precondition, "--ell-d and --ell-u are required");
    const bool any_ratio = f.rho1 || f.rho2 || f.rho12;
    if (any_ratio) {
        if (!(f.rho1 && f.rho2 && f.rho12))
            throw Error(ErrorCode::precondition, "--rho1, --rho2 and --rho12 go together");
        return Model::from_ratios({*f.rho1, *f.rho2, *f.rho12}, *f.ell_d, *f.ell_u);
    }
    if (!(f.lambda1 && f.mu1 && f.lambda2 && f.mu2))
        throw Error(ErrorCode::precondition, "give either the three ratios or all four rates");
    return Model::validate({*f.lambda1, *f.mu1, *f.lambda2, *f.mu2, *f.ell_d, *f.ell_u});
}

ScalingSequence build_sequence(const SequenceFlags& f)
{
    return ScalingSequence{DiffusionParams{f.b1, f.b2, f.ld, f.lu, f.rho12}, f.offset, parse_rounding(f.rounding)};
}

std::vector<double> parse_grid(const std::string& spec)
{
    // start:stop:step
    double a = 0.0, b = 0.0, h = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> a >> c1 >> b >> c2 >> h) || c1 != ':' || c2 != ':' || !(h > 0.0) || b < a)
        throw Error(ErrorCode::precondition, "grid must be start:stop:step with step > 0");
    std::vector<double> xs;
    const auto count = static_cast<long>(std::floor((b - a) / h + 1e-9));
    for (long i = 0; i <= count; ++i)
        xs.push_back(a + static_cast<double>(i) * h);
    return xs;
}

void emit(const OutputFlags& f, const std::string& text, std::ostream& out)
{
    if (f.out.empty())
        out << text;
    else
        io::write_atomically(f.out, text);
}

std::string mgf_output(const StationaryDistribution& d, const std::vector<double>& thetas, const std::string& format)
{
    StudyTable t;
    t.columns = {"theta", "psi11", "psi21", "psi12", "psi22"};
    for (double th : thetas) {
        std::vector<double> row{th};
        for (auto region : kAllRegions)
            row.push_back(d.mgf_component(region, th));
        t.rows.push_back(std::move(row));
    }
    return format == "json" ? io::study_json(t) : io::study_csv(t);
}

std::string validation_report(const std::vector<CheckResult>& checks, const std::string& format)
{
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : checks)
            arr.push_back({{"check", c.name},
                           {"max_residual", c.max_residual},
                           {"threshold", c.threshold},
                           {"status", c.passed() ? "pass" : "fail"}});
        return arr.dump(2) + "\n";
    }
    std::string s = "check,max_residual,threshold,status\n";
    for (const auto& c : checks)
        s += c.name + "," + io::format_double(c.max_residual) + "," + io::format_double(c.threshold) + "," +
             (c.passed() ? "pass" : "fail") + "\n";
    return s;
}

int exit_for(const Error& e)
{
    switch (e.category()) {
    case ErrorCategory::invalid_argument:
        return invalid_arguments;
    case ErrorCategory::instability:
        return instability;
    case ErrorCategory::numeric_failure:
        return numeric_failure;
    }
    return invalid_arguments;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"History-dependent two-level M/M/1 queue toolkit", "hdq"};
    app.require_subcommand(1);

    ModelFlags mf;
    SequenceFlags sf;
    OutputFlags of;
    int lmax = -1;
    std::vector<double> thetas{0.0};
    std::string grid = "0:20:0.25";
    std::vector<long long> ns{10, 100, 1000, 10000};
    std::vector<double> b1s;
    long long sweep_n = 1000;
    sim::SimConfig sc;
    ValidationOptions vo;

    auto* exact = app.add_subcommand("exact", "closed-form stationary distribution");
    add_model_flags(exact, mf);
    exact->add_option("--lmax", lmax, "highest level listed (default ell_u + 10)");
    add_output_flags(exact, of);

    auto* mgf = app.add_subcommand("mgf", "partial generating functions psi_ij(theta)");
    add_model_flags(mgf, mf);
    mgf->add_option("--theta", thetas, "comma-separated theta values")->delimiter(',');
    add_output_flags(mgf, of);

    auto* diff = app.add_subcommand("diffusion", "heavy-traffic limit density and CDF");
    add_sequence_flags(diff, sf);
    diff->add_option("--grid", grid, "start:stop:step")->capture_default_str();
    add_output_flags(diff, of);

    auto* approx = app.add_subcommand("approx", "sqrt(n)-scaled approximation of E(L)");
    add_sequence_flags(approx, sf);
    approx->add_option("--n", ns, "comma-separated n values")->delimiter(',');
    add_output_flags(approx, of);

    auto* table1 = app.add_subcommand("table1", "exact vs approximate mean along a scaling sequence");
    add_sequence_flags(table1, sf);
    table1->add_option("--n", ns, "comma-separated n values")->delimiter(',');
    add_output_flags(table1, of);

    auto* sweep = app.add_subcommand("sweep-b1", "exact vs approximate mean over b1");
    add_sequence_flags(sweep, sf);
    sweep->add_option("--b1-values", b1s, "comma-separated b1 values (default -10..10)")->delimiter(',');
    sweep->add_option("--n", sweep_n)->capture_default_str();
    add_output_flags(sweep, of);

    auto* simc = app.add_subcommand("simulate", "discrete-event simulation with batch means");
    add_model_flags(simc, mf);
    simc->add_option("--horizon", sc.horizon)->capture_default_str();
    simc->add_option("--warmup", sc.warmup_fraction, "fraction of the horizon discarded")->capture_default_str();
    simc->add_option("--seed", sc.seed)->capture_default_str();
    simc->add_option("--batches", sc.batches)->capture_default_str();
    add_output_flags(simc, of);

    auto* val = app.add_subcommand("validate", "oracle, balance, normalization and continuity checks");
    val->add_option("--grid", vo.grid, "number of random models")->capture_default_str();
    val->add_option("--seed", vo.seed)->capture_default_str();
    val->add_option("--inject-fault", vo.fault, "corrupt one check's input (negative control)")->group("");
    add_output_flags(val, of);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return ok;
        }
        err << "hdq: " << e.what() << "\n";
        return invalid_arguments;
    }

    try {
        if (*exact) {
            const StationaryDistribution d(build_model(mf));
            const int top = lmax >= 0 ? lmax : d.model().ell_u() + 10;
            const auto table = d.table(top);
            emit(of, of.format == "json" ? io::distribution_json(table) : io::distribution_csv(table), out);
        } else if (*mgf) {
            const StationaryDistribution d(build_model(mf));
            emit(of, mgf_output(d, thetas, of.format), out);
        } else if (*diff) {
            const LimitLaw law(build_sequence(sf).dp);
            const auto xs = parse_grid(grid);
            emit(of, of.format == "json" ? io::density_json(law, xs) : io::density_csv(law, xs), out);
        } else if (*approx) {
            const auto seq = build_sequence(sf);
            const LimitLaw law(seq.dp);
            StudyTable t;
            t.columns = {"n", "rho2", "approx_mean", "diffusion_mean"};
            for (long long n : ns)
                t.rows.push_back({static_cast<double>(n), nth_system(seq, n).ratios().rho2,
                                  approximate_mean(seq, n), law.mean()});
            emit(of, of.format == "json" ? io::study_json(t) : io::study_csv(t), out);
        } else if (*table1) {
            const auto t = convergence_study(build_sequence(sf), ns);
            emit(of, of.format == "json" ? io::study_json(t) : io::study_csv(t), out);
        } else if (*sweep) {
            if (b1s.empty())
                for (int b = -10; b <= 10; ++b)
                    b1s.push_back(b);
            const auto t = b1_sweep(build_sequence(sf), b1s, sweep_n);
            emit(of, of.format == "json" ? io::study_json(t) : io::study_csv(t), out);
        } else if (*simc) {
            const Model m = build_model(mf);
            sc.model = m.params();
            const auto r = sim::simulate(sc);
            // The full result is JSON; csv asks for the occupancy table only.
            const bool csv = simc->get_option("--format")->count() > 0 && of.format == "csv";
            emit(of, csv ? io::occupancy_csv(r, m.ell_d()) : io::sim_result_json(r), out);
        } else if (*val) {
            const auto checks = run_validation(vo);
            emit(of, validation_report(checks, of.format), out);
            bool all = true;
            for (const auto& c : checks) {
                if (!c.passed()) {
                    err << "hdq: check failed: " << c.name << " (max residual " << io::format_double(c.max_residual)
                        << ", threshold " << io::format_double(c.threshold) << ")\n";
                    all = false;
                }
            }
            return all ? ok : numeric_failure;
        }
    } catch (const Error& e) {
        err << "hdq: " << e.what() << "\n";
        return exit_for(e);
    } catch (const std::exception& e) {
        err << "hdq: " << e.what() << "\n";
        return numeric_failure;
    }
    return ok;
}

} // namespace hdq::cli
