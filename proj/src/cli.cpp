#include "ncsoliton/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include "ncsoliton/dnls.hpp"
#include "ncsoliton/error.hpp"
#include "ncsoliton/io.hpp"
#include "ncsoliton/operator.hpp"
#include "ncsoliton/soliton.hpp"
#include "ncsoliton/specfun.hpp"
#include "ncsoliton/verify.hpp"

namespace ncsoliton::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kDefaultFactors = "1.5,2,4,8,16";

struct OptionSpec {
    const char* name;
    const char* help;
    bool flag = false;
};

const std::map<std::string, std::vector<OptionSpec>>& option_table() {
    static const std::map<std::string, std::vector<OptionSpec>> table{
        {"specfun",
         {{"table", "profiles (phi, psi on x = 0..xmax) or expint (E_n(a), n = 1..n)"},
          {"a", "spectral shift a > 0"},
          {"xmax", "last site of the profile table (default 200)"},
          {"n", "number of E_n values (default 60)"},
          {"out", "CSV output (default specfun.csv)"}}},
        {"spectrum",
         {{"n", "matrix size of the truncated L0 (default 200)"},
          {"out", "CSV output (default spectrum.csv)"}}},
        {"construct",
         {{"mu", "spectral parameter, a number or autoNx for N times mu_star"},
          {"p", "nonlinearity exponent (default 3)"},
          {"iter-tol", "tail iteration tolerance (default 1e-12)"},
          {"root-tol", "boundary root tolerance (default 1e-12)"},
          {"max-iters", "tail iteration cap (default 10000)"},
          {"xmax", "truncation, a number or auto (default auto)"},
          {"out", "JSON output (default construct.json)"}}},
        {"verify",
         {{"report", "JSON report path (default <input>.report.json)"}}},
        {"sweep",
         {{"p", "nonlinearity exponent (default 3)"},
          {"factors", "comma-separated multiples of mu_star (default 1.5,2,4,8,16)"},
          {"mu-list", "comma-separated mu values (overrides --factors)"},
          {"iter-tol", "tail iteration tolerance (default 1e-12)"},
          {"root-tol", "boundary root tolerance (default 1e-12)"},
          {"max-iters", "tail iteration cap (default 10000)"},
          {"xmax", "truncation, a number or auto (default auto)"},
          {"out", "CSV output (default sweep.csv)"}}},
        {"evolve",
         {{"from", "construct JSON providing the initial profile"},
          {"initial", "soliton, chi0 or gaussian (default soliton)"},
          {"mu", "soliton parameter when building one, number or autoNx (default auto2x)"},
          {"p", "nonlinearity exponent; even p needs real initial data (default 3)"},
          {"T", "final time (default 10/mu for solitons, 1 otherwise)"},
          {"dt", "time step (default 1e-3/mu for solitons, 1e-3 otherwise)"},
          {"record-every", "steps between recorded rows (default 10)"},
          {"linear-only", "drop the nonlinear term", true},
          {"scale", "factor applied to the initial data (default 1)"},
          {"noise", "relative multiplicative noise drawn with --seed (default 0)"},
          {"xmax", "truncation for chi0 and gaussian data (default 400)"},
          {"center", "gaussian center (default 0)"},
          {"width", "gaussian width (default 2)"},
          {"leak-tol", "TailLeak threshold on |w(X)| / ||w||_inf (default 1e-8)"},
          {"out", "CSV output (default evolve.csv)"},
          {"snapshots", "optional JSON file with the recorded states"}}},
    };
    return table;
}

std::string trim(std::string s) {
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
    return s;
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw UsageError("--" + key + " expects a number, got '" + text + "'");
    }
    return v;
}

long long parse_int(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw UsageError("--" + key + " expects an integer, got '" + text + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
    if (out.empty()) throw UsageError("--" + key + " needs at least one value");
    return out;
}

bool is_auto_mu(const std::string& s) { return s.rfind("auto", 0) == 0; }

/// "auto" = auto2x; "autoNx" = N mu_star.
double auto_factor(const std::string& s) {
    std::string rest = s.substr(4);
    if (rest.empty()) return 2.0;
    if (rest.back() != 'x') throw UsageError("--mu expects a number or autoNx (e.g. auto2x), got '" + s + "'");
    rest.pop_back();
    const double f = parse_double("mu", rest);
    if (!(f > 1.0)) throw UsageError("--mu " + s + ": the factor must exceed 1 (mu > mu_star)");
    return f;
}

class Params {
public:
    explicit Params(const RunConfig& c) : c_(c) {}

    bool has(const std::string& k) const { return c_.params.count(k) > 0; }
    std::string str(const std::string& k, const std::string& def) const { return has(k) ? c_.params.at(k) : def; }
    double num(const std::string& k, double def) const { return has(k) ? parse_double(k, c_.params.at(k)) : def; }
    long long integer(const std::string& k, long long def) const { return has(k) ? parse_int(k, c_.params.at(k)) : def; }
    bool flag(const std::string& k) const {
        if (!has(k)) return false;
        const auto v = c_.params.at(k);
        if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "off" || v == "no") return false;
        throw UsageError("--" + k + " expects true or false, got '" + v + "'");
    }
    fs::path output(const std::string& k, const std::string& def) const {
        fs::path p = str(k, def);
        if (p.is_relative() && !c_.output_dir.empty()) p = c_.output_dir / p;
        return p;
    }

private:
    const RunConfig& c_;
};

SolitonParams soliton_params(const Params& P, double mu) {
    SolitonParams s;
    s.a = mu;
    s.p = static_cast<int>(P.integer("p", 3));
    s.iter_tol = P.num("iter-tol", s.iter_tol);
    s.root_tol = P.num("root-tol", s.root_tol);
    s.max_iters = static_cast<int>(P.integer("max-iters", s.max_iters));
    const std::string xmax = P.str("xmax", "auto");
    if (xmax != "auto") s.truncation.fixed = static_cast<std::size_t>(P.integer("xmax", 0));
    return s;
}

double resolve_mu(const std::string& text, const Thresholds& t) {
    if (is_auto_mu(text)) return auto_factor(text) * t.mu_star;
    return parse_double("mu", text);
}

void write_text(const fs::path& path, const std::string& contents, std::ostream& out, const std::string& what) {
    io::write_atomic(path, contents);
    out << "wrote " << what << " to " << path.string() << "\n";
}

int run_specfun(const Params& P, std::ostream& out) {
    if (!P.has("a")) throw UsageError("specfun needs --a (spectral shift a > 0)");
    const double a = P.num("a", 0.0);
    const std::string table = P.str("table", "profiles");
    if (table == "profiles") {
        const auto xmax = static_cast<std::size_t>(P.integer("xmax", 200));
        const auto log_phi = specfun::laguerre_log_phi(a, xmax);
        const auto psi = specfun::resolvent_psi(a, xmax);
        io::CsvTable csv({"x", "phi", "log_phi", "psi", "psi_asymptote"});
        for (std::size_t x = 0; x <= xmax; ++x) {
            const double asym = x > 0 ? specfun::psi_tail_asymptote(a, static_cast<double>(x))
                                      : std::numeric_limits<double>::quiet_NaN();
            csv.add_row({static_cast<double>(x), std::exp(log_phi[x]), log_phi[x], psi[x], asym});
        }
        write_text(P.output("out", "specfun.csv"), csv.str(), out, std::to_string(csv.rows()) + " profile rows");
    } else if (table == "expint") {
        const auto n = static_cast<std::size_t>(P.integer("n", 60));
        const specfun::ExpIntegralTable t(a, n);
        io::CsvTable csv({"n", "E_n", "scaled_E_n", "lower", "upper"});
        for (std::size_t k = 1; k <= n; ++k) {
            const double kd = static_cast<double>(k);
            csv.add_row({kd, t.value(static_cast<int>(k)), t.scaled(static_cast<int>(k)), 1.0 / (a + kd),
                         1.0 / (a + kd - 1.0)});
        }
        write_text(P.output("out", "specfun.csv"), csv.str(), out, std::to_string(n) + " E_n rows");
    } else {
        throw UsageError("--table must be profiles or expint, got '" + table + "'");
    }
    return kSuccess;
}

int run_spectrum(const Params& P, std::ostream& out) {
    const auto n = static_cast<std::size_t>(P.integer("n", 200));
    const auto m = truncated_matrix(n);
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(m.diagonal.data(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(m.off_diagonal.data(), static_cast<Eigen::Index>(n - 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NonConvergence("spectrum: tridiagonal eigensolver failed");
    io::CsvTable csv({"k", "eigenvalue"});
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        csv.add_row({static_cast<double>(k), solver.eigenvalues()[k]});
    }
    write_text(P.output("out", "spectrum.csv"), csv.str(), out, std::to_string(n) + " eigenvalues");
    return kSuccess;
}

int run_construct(const Params& P, std::ostream& out) {
    if (!P.has("mu")) throw UsageError("construct needs --mu (a number or autoNx, e.g. auto2x)");
    const int p = static_cast<int>(P.integer("p", 3));
    const Thresholds t = compute_thresholds(p);
    const SolitonParams params = soliton_params(P, resolve_mu(P.str("mu", ""), t));
    const SolitonResult r = construct_soliton(params, t);
    const fs::path path = P.output("out", "construct.json");
    io::write_json(path, io::to_json(r));
    out << std::setprecision(10) << "mu = " << params.a << " (mu_star = " << t.mu_star << ", p = " << p
        << ")  X = " << r.alpha.truncation() << "  b_star = " << r.b_star << "  residual = " << r.residual_sup
        << "  iterations = " << r.iterations_used << "\n"
        << "wrote soliton to " << path.string() << "\n";
    return kSuccess;
}

int run_verify(const RunConfig& c, const Params& P, std::ostream& out) {
    if (c.inputs.empty()) throw UsageError("verify needs a construct JSON file");
    const fs::path input = c.inputs.front();
    const SolitonResult r = io::soliton_from_json(io::read_json(input));
    const VerificationReport report = verify_soliton(r);
    fs::path report_path;
    if (P.has("report")) {
        report_path = P.output("report", "");
    } else {
        fs::path name = input.filename();
        name.replace_extension(".report.json");
        report_path = c.output_dir.empty() ? input.parent_path() / name : c.output_dir / name;
    }
    io::write_json(report_path, io::to_json(report));
    out << format_table(report) << "wrote report to " << report_path.string() << "\n";
    return report.passed() ? kSuccess : kVerificationFailed;
}

int run_sweep(const Params& P, std::ostream& out) {
    const int p = static_cast<int>(P.integer("p", 3));
    const Thresholds t = compute_thresholds(p);
    std::vector<double> mus;
    if (P.has("mu-list")) {
        mus = parse_list("mu-list", P.str("mu-list", ""));
    } else {
        for (double f : parse_list("factors", P.str("factors", kDefaultFactors))) mus.push_back(f * t.mu_star);
    }
    std::sort(mus.begin(), mus.end());
    const SolitonParams base = soliton_params(P, mus.front());
    const auto results = construct_sweep(base, mus);

    std::vector<VerificationReport> reports(results.size());
    const auto n = static_cast<std::ptrdiff_t>(results.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) reports[static_cast<std::size_t>(i)] = verify_soliton(results[static_cast<std::size_t>(i)]);

    std::vector<Check> sweep_checks;
    std::vector<double> ratio(results.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<double> l1(results.size(), std::numeric_limits<double>::quiet_NaN());
    double fitted = std::numeric_limits<double>::quiet_NaN();
    if (p >= 3) {
        const auto s = check_l1_bound_sweep(results);
        ratio = s.ratio;
        l1 = s.l1_hat;
        fitted = s.fitted_constant;
        sweep_checks = s.checks;
    }
    bool c1_increasing = true;
    for (std::size_t i = 1; i < reports.size(); ++i) {
        if (!reports[i].decay || !reports[i - 1].decay ||
            !(reports[i].decay->fit.c1_hat > reports[i - 1].decay->fit.c1_hat)) {
            c1_increasing = false;
        }
    }
    sweep_checks.push_back(Check{"decay.rate_trend", "fitted c1 strictly increasing in mu", c1_increasing, 0.0, 0.0, 0.0});

    io::CsvTable csv({"mu", "mu_over_mu_star", "xmax", "b_star", "q_at_root", "s_minus", "l1_hat", "l1_ratio",
                      "residual_sup", "iterations", "c0_hat", "c1_hat", "fit_residual", "x_star", "q_bar",
                      "envelope_ratio", "checks_passed"});
    bool all = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const auto& rep = reports[i];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const auto& d = rep.decay;
        all = all && rep.passed();
        csv.add_row({r.params.a, r.params.a / t.mu_star, static_cast<double>(r.alpha.truncation()), r.b_star,
                     r.q_at_root, r.s_star, l1[i], ratio[i], r.residual_sup, static_cast<double>(r.iterations_used),
                     d ? d->fit.c0_hat : nan, d ? d->fit.c1_hat : nan, d ? d->fit.fit_residual : nan,
                     d ? static_cast<double>(d->x_star) : nan, d ? d->q_bar : nan, d ? d->envelope_ratio : nan,
                     rep.passed() ? 1.0 : 0.0});
        out << std::setprecision(8) << "mu = " << r.params.a << ": " << (rep.passed() ? "all checks passed" : "FAILED") << "\n";
    }
    for (const auto& c : sweep_checks) {
        out << std::left << std::setw(20) << c.name << (c.pass ? "PASS" : "FAIL") << "  measured " << c.measured
            << "  bound " << c.bound << "\n";
        all = all && c.pass;
    }
    if (p >= 3) out << "fitted O-term constant C = " << fitted << "\n";
    write_text(P.output("out", "sweep.csv"), csv.str(), out, std::to_string(results.size()) + " sweep rows");
    return all ? kSuccess : kVerificationFailed;
}

int run_evolve(const RunConfig& c, const Params& P, std::ostream& out) {
    const int p = static_cast<int>(P.integer("p", 3));
    ComplexLatticeVector w0;
    double mu = std::numeric_limits<double>::quiet_NaN();
    std::string initial = P.str("initial", "soliton");
    if (P.has("from")) {
        const auto r = io::soliton_from_json(io::read_json(P.str("from", "")));
        if (P.has("p") && r.params.p != p) throw UsageError("--p disagrees with the p stored in --from");
        mu = r.params.a;
        w0 = dnls::to_complex(r.alpha);
        initial = "soliton";
    } else if (initial == "soliton") {
        const Thresholds t = compute_thresholds(p);
        mu = resolve_mu(P.str("mu", "auto2x"), t);
        w0 = dnls::to_complex(construct_soliton(soliton_params(P, mu), t).alpha);
    } else if (initial == "chi0") {
        w0 = dnls::delta_at_origin(static_cast<std::size_t>(P.integer("xmax", 400)));
    } else if (initial == "gaussian") {
        w0 = dnls::gaussian_profile(static_cast<std::size_t>(P.integer("xmax", 400)), P.num("center", 0.0),
                                    P.num("width", 2.0));
    } else {
        throw UsageError("--initial must be soliton, chi0 or gaussian, got '" + initial + "'");
    }
    const double scale = P.num("scale", 1.0);
    const double noise = P.num("noise", 0.0);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (auto& z : w0.values) z *= scale * (1.0 + noise * unit(rng));

    const bool soliton = initial == "soliton";
    dnls::EvolutionOptions o;
    o.sigma = dnls::sigma_from_p(p);
    o.dt = P.num("dt", soliton ? 1e-3 / mu : 1e-3);
    o.t_final = P.num("T", soliton ? 10.0 / mu : 1.0);
    o.record_every = static_cast<std::size_t>(P.integer("record-every", 10));
    o.linear_only = P.flag("linear-only");
    o.leak_threshold = P.num("leak-tol", o.leak_threshold);
    o.keep_snapshots = P.has("snapshots");
    const auto run = dnls::evolve(w0, o);

    io::CsvTable csv({"t", "ell2", "sup_amp_dev", "phase0", "amp0"});
    double max_dev = 0.0;
    for (const auto& rec : run.records) {
        csv.add_row({rec.t, rec.ell2, rec.sup_amp_dev, rec.phase0, rec.amp0});
        max_dev = std::max(max_dev, rec.sup_amp_dev);
    }
    out << std::setprecision(10) << "steps = " << static_cast<long long>(std::ceil(o.t_final / o.dt - 1e-9))
        << "  max sup_amp_dev = " << max_dev << "  max l2 drift = " << run.max_ell2_drift << "\n";
    if (soliton) {
        try {
            const double zeta = dnls::phase_track(run.records, std::min(o.t_final, 5.0 / mu));
            out << "zeta_hat = " << zeta << "  (-mu = " << -mu << ")\n";
        } catch (const PhaseUnwrapFailure& e) {
            out << "phase not tracked: " << e.what() << "\n";
        }
    }
    write_text(P.output("out", "evolve.csv"), csv.str(), out, std::to_string(csv.rows()) + " time rows");
    if (o.keep_snapshots) {
        const fs::path snap = P.output("snapshots", "");
        io::write_json(snap, io::to_json(run.snapshots));
        out << "wrote " << run.snapshots.size() << " snapshots to " << snap.string() << "\n";
    }
    return kSuccess;
}

void require_range(const Params& P, const std::string& key, double lo, double hi, const std::string& what) {
    if (!P.has(key)) return;
    const double v = P.num(key, 0.0);
    if (!(v > lo && v < hi)) throw UsageError("--" + key + " = " + P.str(key, "") + " violates " + what);
}

}  // namespace

RunConfig parse_command_line(int argc, const char* const* argv, std::ostream& out) {
    CLI::App app{"Ground-state solitons of the discrete NLS with the L0 hopping operator", "ncsoliton"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "key = value file; flags override its entries")->check(CLI::ExistingFile);
    app.add_option("--out-dir", out_dir, "directory for relative output paths")->envname("NCSOLITON_OUTPUT_DIR");
    app.add_option("--seed", seed, "seed for randomized inputs (default 0)");

    std::map<std::string, std::map<std::string, std::string>> store;
    std::map<std::string, CLI::App*> subs;
    std::vector<std::string> inputs;
    const std::map<std::string, std::string> descriptions{
        {"specfun", "tabulate phi, psi or E_n"},
        {"spectrum", "eigenvalues of the truncated L0"},
        {"construct", "build the soliton and write JSON"},
        {"verify", "check a construct JSON and write a report"},
        {"sweep", "construct and verify over a mu grid"},
        {"evolve", "evolve initial data under the discrete NLS"},
    };
    for (const auto& [name, options] : option_table()) {
        CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
        subs[name] = sub;
        for (const auto& o : options) {
            auto& slot = store[name][o.name];
            if (o.flag) {
                sub->add_flag_callback(std::string("--") + o.name, [&slot] { slot = "true"; }, o.help);
            } else {
                sub->add_option(std::string("--") + o.name, slot, o.help);
            }
        }
    }
    subs["verify"]->add_option("input", inputs, "construct JSON file")->required()->check(CLI::ExistingFile);

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return {};
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return {};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    for (const auto& [name, sub] : subs) {
        if (sub->parsed() && sub->get_option_no_throw("--help") && sub->get_option("--help")->count() > 0) {
            out << sub->help();
            return {};
        }
    }

    RunConfig config;
    for (const auto& [name, sub] : subs) {
        if (sub->parsed()) config.subcommand = name;
    }
    CLI::App* sub = subs.at(config.subcommand);
    for (const auto& o : option_table().at(config.subcommand)) {
        const auto& slot = store[config.subcommand][o.name];
        if (o.flag ? !slot.empty() : sub->get_option(std::string("--") + o.name)->count() > 0) {
            config.params[o.name] = slot;
        }
    }
    if (!config_path.empty()) {
        const CLI::ConfigINI ini;
        for (const auto& item : ini.from_file(config_path)) {
            if (item.name == "++" || item.name == "--") continue;
            if (!item.parents.empty() && item.parents != std::vector<std::string>{config.subcommand}) continue;
            if (!sub->get_option_no_throw("--" + item.name)) {
                throw UsageError(config_path + ": unknown key '" + item.name + "' for " + config.subcommand);
            }
            if (config.params.count(item.name) == 0) {
                config.params[item.name] = CLI::detail::join(item.inputs, ",");
            }
        }
    }
    for (const auto& i : inputs) config.inputs.emplace_back(i);
    config.output_dir = out_dir;
    config.seed = seed;
    return config;
}

void validate(const RunConfig& config) {
    if (option_table().count(config.subcommand) == 0) throw UsageError("unknown subcommand '" + config.subcommand + "'");
    const Params P(config);
    if (P.has("p")) {
        const long long p = P.integer("p", 3);
        if (p < 2) throw UsageError("--p = " + std::to_string(p) + " violates p >= 2");
    }
    require_range(P, "a", 0.0, std::numeric_limits<double>::infinity(), "a > 0");
    if (P.has("mu") && !is_auto_mu(P.str("mu", ""))) {
        require_range(P, "mu", 0.0, std::numeric_limits<double>::infinity(), "mu > 0");
    } else if (P.has("mu")) {
        auto_factor(P.str("mu", ""));
    }
    require_range(P, "iter-tol", 0.0, 1.0, "0 < iter_tol < 1");
    require_range(P, "root-tol", 0.0, 1.0, "0 < root_tol < 1");
    if (P.has("max-iters") && P.integer("max-iters", 1) < 1) throw UsageError("--max-iters must be >= 1");
    if (P.has("xmax") && P.str("xmax", "") != "auto" && P.integer("xmax", 2) < 2) throw UsageError("--xmax must be >= 2");
    if (P.has("n") && P.integer("n", 2) < (config.subcommand == "spectrum" ? 2 : 1)) {
        throw UsageError("--n = " + P.str("n", "") + " is too small");
    }
    require_range(P, "dt", 0.0, std::numeric_limits<double>::infinity(), "dt > 0");
    if (P.has("T") && !(P.num("T", 0.0) >= 0.0)) throw UsageError("--T must be >= 0");
    if (P.has("record-every") && P.integer("record-every", 1) < 1) throw UsageError("--record-every must be >= 1");
    require_range(P, "width", 0.0, std::numeric_limits<double>::infinity(), "width > 0");
    if (P.has("mu-list")) {
        for (double mu : parse_list("mu-list", P.str("mu-list", ""))) {
            if (!(mu > 0.0)) throw UsageError("--mu-list entries must be positive");
        }
    }
    if (P.has("factors")) {
        for (double f : parse_list("factors", P.str("factors", ""))) {
            if (!(f > 1.0)) throw UsageError("--factors entries must exceed 1 (mu > mu_star)");
        }
    }
    P.flag("linear-only");
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        validate(config);
        const Params P(config);
        const std::string& s = config.subcommand;
        if (s == "specfun") return run_specfun(P, out);
        if (s == "spectrum") return run_spectrum(P, out);
        if (s == "construct") return run_construct(P, out);
        if (s == "verify") return run_verify(config, P, out);
        if (s == "sweep") return run_sweep(P, out);
        return run_evolve(config, P, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
    } catch (const RegimeViolation& e) {
        err << "regime error: " << e.what() << "\n";
    } catch (const NoTwoRoots& e) {
        err << "regime error: " << e.what() << "\n";
    } catch (const BracketFailure& e) {
        err << "regime error: " << e.what() << "\n";
    } catch (const UnsupportedP& e) {
        err << "unsupported: " << e.what() << "\n";
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
    return kUsageError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_command_line(argc, argv, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    }
    if (config.subcommand.empty()) return kSuccess;
    return dispatch(config, out, err);
}

}  // namespace ncsoliton::cli
