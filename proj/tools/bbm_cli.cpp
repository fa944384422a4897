/*
   Copyright 2026 The bbm-lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// bbm: command-line front end. Exit codes: 0 ok, 1 usage, 2 numerical failure
// or a verdict other than the expected one.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbm/constants.hpp"
#include "bbm/energy.hpp"
#include "bbm/kernels.hpp"
#include "bbm/spec_io.hpp"
#include "bbm/sweep.hpp"

namespace {

using namespace bbm;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;

struct Output {
    std::string format = "csv";
    std::string path;

    void add(CLI::App* sub)
    {
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output,-o", path, "write here instead of stdout");
    }
    void emit(const std::string& text) const
    {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open output file '" + path + "'");
        f << text;
    }
};

struct KernelFlags {
    std::string family = "stable";
    int d = 1;
    double p = 2.0;
    double beta = 0.0;
    double eps0 = 0.5;
    double base_eps = 0.5;

    void add(CLI::App* sub)
    {
        sub->add_option("--family", family, "stable, rescaled, truncated-power, smoothed-power, log-limit, smoothed-log-ball");
        sub->add_option("--d", d, "dimension");
        sub->add_option("--p", p, "exponent p >= 1");
        sub->add_option("--beta", beta, "power for the truncated and smoothed families");
        sub->add_option("--eps0", eps0, "outer radius for the log families");
        sub->add_option("--base-eps", base_eps, "base kernel parameter of the rescaled family");
    }
    KernelSpec spec(double eps) const
    {
        KernelSpec k;
        k.family = parse_family(family);
        k.dim = d;
        k.p = p;
        k.eps = eps;
        k.beta = beta;
        k.eps0 = eps0;
        k.base_eps = base_eps;
        return k;
    }
};

struct ProblemFlags {
    std::vector<std::string> domain{"kind=interval", "lo=0", "hi=1"};
    std::vector<std::string> field{"kind=linear", "slope=1"};
    std::vector<std::string> subdomain;
    std::vector<double> grid = default_eps_grid();
    std::string mode = "deterministic-1d";
    std::string functional = "energy";
    std::int64_t n = 1'000'000;
    std::uint64_t seed = 42;
    std::string case_id = "cli";

    void add(CLI::App* sub)
    {
        sub->add_option("--domain", domain, "domain record, e.g. kind=ball center=0,0 radius=1");
        sub->add_option("--field", field, "field record, e.g. kind=gaussian d=2");
        sub->add_option("--subdomain", subdomain, "domain record for local-measure");
        sub->add_option("--eps-grid", grid, "decreasing parameter grid")->delimiter(',');
        sub->add_option("--mode", mode, "mc or deterministic-1d")->check(CLI::IsMember({"mc", "deterministic-1d"}));
        sub->add_option("--functional", functional, "energy, cross-energy or local-measure")
            ->check(CLI::IsMember({"energy", "cross-energy", "local-measure"}));
        sub->add_option("--n", n, "Monte Carlo samples per grid point");
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--case-id", case_id, "label for the output rows");
    }
};

std::string dump_json(const io::json& j) { return j.dump(2) + "\n"; }

// Limit of the chosen functional, or NaN when no finite limit is known.
SweepCase problem_case(const KernelFlags& kf, const ProblemFlags& pf)
{
    SweepCase c;
    c.id = pf.case_id;
    c.family = kf.spec(0.1);
    c.domain = io::domain_from_record(io::parse_record(pf.domain));
    c.field = io::field_from_record(io::parse_record(pf.field));
    if (!pf.subdomain.empty()) c.subdomain = io::domain_from_record(io::parse_record(pf.subdomain));
    c.grid = pf.grid;
    c.mode = pf.mode == "mc" ? Mode::MonteCarlo : Mode::Deterministic1D;
    c.functional = parse_functional(pf.functional);
    c.n = pf.n;
    c.seed = pf.seed;

    if (c.functional == Functional::LocalMeasure && !c.subdomain)
        throw std::invalid_argument("local-measure needs --subdomain");
    if (c.functional == Functional::CrossEnergy) {
        c.target_kind = TargetKind::Zero;
        c.target_value = 0.0;
        c.tolerance_scale = c.field.sobolev_norm_p(kf.p);
        return c;
    }
    const Domain& where = c.subdomain ? *c.subdomain : c.domain;
    const double K = kdp_mean(kf.d, kf.p);
    if (c.field.regularity() != Regularity::PiecewiseConstant) {
        c.target_kind = TargetKind::GradLp;
        c.target_value = K * grad_lp_norm(c.field, where, kf.p);
    } else if (kf.p == 1.0) {
        c.target_kind = TargetKind::BVSeminorm;
        c.target_value = K * bv_seminorm(c.field, where);
    } else {
        c.target_kind = TargetKind::Divergent;
        c.target_value = std::numeric_limits<double>::quiet_NaN();
        c.expected = Verdict::Diverged;
    }
    if (c.target_kind != TargetKind::Divergent && c.target_value == 0.0) c.target_kind = TargetKind::Zero;
    return c;
}

std::string render(const std::vector<SweepReport>& reps, const Output& out)
{
    if (out.format == "json") return dump_json(io::to_json(reps));
    std::ostringstream os;
    io::write_csv(os, reps);
    return os.str();
}

bool all_expected(const std::vector<SweepReport>& reps)
{
    bool ok = true;
    for (const auto& r : reps) {
        if (!r.error.empty()) std::cerr << r.case_id << ": " << r.error << "\n";
        if (r.verdict != r.expected) {
            std::cerr << r.case_id << ": verdict '" << verdict_name(r.verdict) << "', expected '"
                      << verdict_name(r.expected) << "'\n";
            ok = false;
        }
    }
    return ok;
}

std::string usage_hint()
{
    return "kernel keys: " + io::join(io::kKernelKeys) + "\ndomain keys: " + io::join(io::kDomainKeys) +
           "\nfield keys: " + io::join(io::kFieldKeys) + "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nonlocal-to-local energy limits: constants, kernels, estimators and sweeps"};
    app.set_config("--config", "", "INI/TOML file with one section per subcommand; command-line flags take precedence");
    app.require_subcommand(1);

    int rc = kOk;
    Output out;

    // constant
    auto* c_const = app.add_subcommand("constant", "K_{d,p} by sphere quadrature, closed form and Monte Carlo");
    int cd = 2;
    double cp = 2.0;
    std::int64_t cn = 1'000'000;
    std::uint64_t cseed = 42;
    c_const->add_option("--d", cd, "dimension")->required();
    c_const->add_option("--p", cp, "exponent")->required();
    c_const->add_option("--n", cn, "Monte Carlo samples (0 skips)");
    c_const->add_option("--seed", cseed, "seed");
    out.add(c_const);
    c_const->callback([&] {
        const auto k = kdp(cd, cp);
        McValue mc{std::nan(""), std::nan(""), 0};
        if (cn > 0) mc = kdp_mc(cd, cp, cn, cseed);
        if (out.format == "json") {
            out.emit(dump_json({{"d", cd}, {"p", cp}, {"value_mean", k.value_mean}, {"value_closed", k.value_closed},
                                {"value_printed", io::num_json(k.value_printed)}, {"value_mc", io::num_json(mc.value)},
                                {"mc_stderr", io::num_json(mc.std_error)}, {"n", mc.n}, {"seed", cseed},
                                {"discrepancy", k.discrepancy},
                                {"printed_discrepancy", io::num_json(k.printed_discrepancy)}}));
            return;
        }
        std::ostringstream os;
        os << "d,p,value_mean,value_closed,value_printed,value_mc,mc_stderr,n,seed,discrepancy,printed_discrepancy\n"
           << cd << ',' << io::csv_num(cp) << ',' << io::csv_num(k.value_mean) << ',' << io::csv_num(k.value_closed)
           << ',' << io::csv_num(k.value_printed) << ',' << io::csv_num(mc.value) << ',' << io::csv_num(mc.std_error)
           << ',' << mc.n << ',' << cseed << ',' << io::csv_num(k.discrepancy) << ','
           << io::csv_num(k.printed_discrepancy) << '\n';
        out.emit(os.str());
    });

    // kernel-check
    auto* c_kernel = app.add_subcommand("kernel-check", "normalization and tail mass of one kernel");
    KernelFlags kk;
    double keps = 0.1, kdelta = 0.1;
    kk.add(c_kernel);
    c_kernel->add_option("--eps", keps, "kernel parameter");
    c_kernel->add_option("--delta", kdelta, "radius for the tail mass");
    out.add(c_kernel);
    c_kernel->callback([&] {
        const auto spec = kk.spec(keps);
        const auto k = make_kernel(spec);
        const double norm = normalization(k);
        const double tail = mass_outside(k, kdelta);
        double closed = std::nan("");
        if (spec.family == Family::Stable)
            closed = (spec.p - keps) * (1.0 - std::pow(kdelta, keps)) / spec.p + keps / spec.p;
        const bool pass = std::abs(norm - 1.0) <= 1e-6;
        if (out.format == "json") {
            out.emit(dump_json({{"kernel", k.id()}, {"family", kk.family}, {"d", kk.d}, {"p", kk.p}, {"eps", keps},
                                {"normalization", norm}, {"delta", kdelta}, {"mass_outside", tail},
                                {"mass_outside_closed", io::num_json(closed)}, {"pass", pass}}));
        } else {
            std::ostringstream os;
            os << "family,d,p,eps,normalization,delta,mass_outside,mass_outside_closed,pass\n"
               << kk.family << ',' << kk.d << ',' << io::csv_num(kk.p) << ',' << io::csv_num(keps) << ','
               << io::csv_num(norm) << ',' << io::csv_num(kdelta) << ',' << io::csv_num(tail) << ','
               << io::csv_num(closed) << ',' << (pass ? "true" : "false") << '\n';
            out.emit(os.str());
        }
        if (!pass) rc = kNumerical;
    });

    // energy
    auto* c_energy = app.add_subcommand("energy", "energy estimates along an eps grid");
    KernelFlags ek;
    ProblemFlags ep;
    ek.add(c_energy);
    ep.add(c_energy);
    out.add(c_energy);
    c_energy->callback([&] {
        const auto c = problem_case(ek, ep);
        std::vector<io::CsvRow> rows;
        for (double eps : c.grid) {
            const auto e = evaluate_case(c, eps);
            rows.push_back({c.id, family_name(c.family.family), ek.d, ek.p, eps, e.value, e.std_error, e.n_samples,
                            c.target_value, mode_name(c.mode), c.seed});
        }
        if (out.format == "json") {
            io::json arr = io::json::array();
            for (const auto& r : rows) arr.push_back(io::to_json(r));
            out.emit(dump_json(arr));
            return;
        }
        std::ostringstream os;
        os << io::kCsvHeader << '\n';
        for (const auto& r : rows) {
            io::write_csv_row(os, r);
            os << '\n';
        }
        out.emit(os.str());
    });

    // sweep
    auto* c_sweep = app.add_subcommand("sweep", "energy sweep with a convergence verdict");
    KernelFlags sk;
    ProblemFlags sp;
    sk.add(c_sweep);
    sp.add(c_sweep);
    out.add(c_sweep);
    c_sweep->callback([&] {
        const std::vector<SweepReport> reps{run_sweep(problem_case(sk, sp))};
        out.emit(render(reps, out));
        if (!reps[0].error.empty()) throw NumericalError(reps[0].error, std::nan(""));
        if (reps[0].verdict == Verdict::Diverged && reps[0].expected != Verdict::Diverged) rc = kNumerical;
    });

    // suite
    auto* c_suite = app.add_subcommand("suite", "the built-in acceptance suite");
    std::uint64_t suite_seed = 42;
    std::int64_t suite_n = 1'000'000;
    std::vector<std::string> only;
    c_suite->add_option("--seed", suite_seed, "master seed");
    c_suite->add_option("--n", suite_n, "Monte Carlo samples per grid point");
    c_suite->add_option("--case", only, "run only these case ids");
    out.add(c_suite);
    c_suite->callback([&] {
        auto cases = builtin_suite(suite_seed, suite_n);
        if (!only.empty()) {
            std::erase_if(cases, [&](const SweepCase& c) { return std::find(only.begin(), only.end(), c.id) == only.end(); });
            if (cases.empty()) throw std::invalid_argument("no suite case matches --case");
        }
        const auto reps = run_suite(cases);
        out.emit(render(reps, out));
        if (!all_expected(reps)) rc = kNumerical;
    });

    // generator
    auto* c_gen = app.add_subcommand("generator", "nonlocal generator at a point (p = 2)");
    KernelFlags gk;
    gk.family = "stable";
    std::vector<std::string> gfield{"kind=gaussian", "d=1"};
    std::vector<double> gx;
    std::vector<double> ggrid = default_eps_grid();
    gk.add(c_gen);
    c_gen->add_option("--field", gfield, "field record");
    c_gen->add_option("--x", gx, "evaluation point (default origin)")->delimiter(',');
    c_gen->add_option("--eps-grid", ggrid, "decreasing eps grid")->delimiter(',');
    out.add(c_gen);
    c_gen->callback([&] {
        const Field u = io::field_from_record(io::parse_record(gfield));
        if (c_gen->count("--d") == 0) gk.d = u.dim();
        const Vec x = gx.empty() ? Vec(u.dim()) : Vec::from(gx);
        const double target = -u.laplacian(x) / (2.0 * u.dim());
        io::json arr = io::json::array();
        std::ostringstream os;
        os << "eps,value,target\n";
        for (double eps : ggrid) {
            const double v = generator(u, x, make_kernel(gk.spec(eps)));
            os << io::csv_num(eps) << ',' << io::csv_num(v) << ',' << io::csv_num(target) << '\n';
            arr.push_back({{"eps", eps}, {"value", v}, {"target", target}});
        }
        out.emit(out.format == "json" ? dump_json(arr) : os.str());
    });

    // counterexample
    auto* c_counter = app.add_subcommand("counterexample", "slit-domain mismatch and Gagliardo cutoff sweeps");
    std::uint64_t cx_seed = 42;
    c_counter->add_option("--seed", cx_seed, "master seed");
    out.add(c_counter);
    c_counter->callback([&] {
        auto cases = builtin_suite(cx_seed);
        std::erase_if(cases, [](const SweepCase& c) { return c.id.rfind("slit-", 0) != 0; });
        const auto reps = run_suite(cases);
        out.emit(render(reps, out));
        if (!all_expected(reps)) rc = kNumerical;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n" << usage_hint();
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return rc;
}
