#include "wr/errors.hpp"
#include "wr/geom.hpp"
#include "wr/hill.hpp"
#include "wr/rigidity.hpp"
#include "wr/scenario.hpp"
#include "wr/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv("WR_OUT")) return env;
    return "wr_out";
}

int cmd_run(const std::string& path, const std::string& out) {
    const wr::ScenarioResult res = wr::run_scenario_file(path, out);
    for (const auto& c : res.checks)
        std::cout << (c.pass ? "  ok   " : "  FAIL ") << c.name << "  value=" << wr::format_double(c.value)
                  << " threshold=" << wr::format_double(c.threshold)
                  << (c.note.empty() ? "" : "  (" + c.note + ")") << "\n";
    for (const auto& a : res.artifacts) std::cout << "wrote " << a << "\n";
    if (!res.error.empty()) std::cerr << "error: " << res.error << "\n";
    std::cout << (res.exit_code == 0 ? "PASS" : "FAIL") << " " << res.name << "\n";
    return res.exit_code;
}

int cmd_verify(const std::string& filter, std::optional<double> tol) {
    const auto results = wr::run_acceptance(filter, tol);
    std::cout << wr::acceptance_summary(results);
    return wr::all_passed(results) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"warped-product solution spaces: scenario runner and verification suite"};
    app.require_subcommand(1);

    std::string out_dir = default_out_dir();

    // run
    auto* run = app.add_subcommand("run", "run a scenario file and write its report and CSV artifacts");
    std::string scenario_path;
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (default: $WR_OUT or ./wr_out)");

    // verify
    auto* verify = app.add_subcommand("verify", "run the acceptance criteria and print a pass/fail matrix");
    std::string filter;
    double tol_value = 0.0;
    bool tol_set = false;
    verify->add_option("--filter", filter, "run only criteria whose id or name contains this substring");
    verify->add_option("--tol", tol_value, "override every numeric threshold (sensitivity reporting)")
        ->each([&tol_set](const std::string&) { tol_set = true; });

    // table1d
    auto* table = app.add_subcommand("table1d", "emit the 1-D dimension table as CSV");
    std::string domain = "circle";
    double tau = 1.0;
    std::vector<double> extents;
    table->add_option("--domain", domain, "line|circle|half_line|interval");
    table->add_option("--tau", tau, "characteristic constant");
    table->add_option("--a", extents, "radius / length parameter (repeatable)");
    table->add_option("--out", out_dir, "output directory");

    // ode
    auto* ode = app.add_subcommand("ode", "integrate w'' = theta(t) w and emit samples");
    std::string theta_expr = "-1";
    double t0 = 0.0, t1 = 6.283185307179586, w0 = 1.0, dw0 = 0.0;
    double period = 0.0;
    ode->add_option("--theta", theta_expr, "theta as an expression in t");
    ode->add_option("--t0", t0, "window start");
    ode->add_option("--t1", t1, "window end");
    ode->add_option("--w0", w0, "initial value");
    ode->add_option("--dw0", dw0, "initial derivative");
    ode->add_option("--period", period, "declared period: also print monodromy and coexistence");
    ode->add_option("--out", out_dir, "output directory");

    // surfaces
    auto* surf = app.add_subcommand("surfaces", "build an isocurved surface pair from a profile");
    std::string v1_expr = "exp(t^2/2)";
    double c2 = 1.0, win_lo = -2.0, win_hi = 2.0;
    double tail_bound = -1.0;
    surf->add_option("--v1", v1_expr, "positive profile v1(t)");
    surf->add_option("--c2", c2, "integration constant");
    surf->add_option("--lo", win_lo, "window start");
    surf->add_option("--hi", win_hi, "window end");
    surf->add_option("--tail-bound", tail_bound, "declared bound on the profile tail mass");
    surf->add_option("--out", out_dir, "output directory");

    // theoremc
    auto* thc = app.add_subcommand("theoremc", "classify a warped pair specification");
    std::string pair_path;
    thc->add_option("spec", pair_path, "pair spec JSON (a theoremC scenario file)")->required();
    thc->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path, out_dir);
        if (verify->parsed())
            return cmd_verify(filter, tol_set ? std::optional<double>(tol_value) : std::nullopt);
        if (table->parsed()) {
            if (extents.empty()) extents = {1.0};
            std::vector<std::pair<std::string, std::pair<double, double>>> reqs;
            for (double a : extents) reqs.push_back({domain, {tau, a}});
            const std::string csv = wr::table_1d_csv(wr::table_1d(reqs));
            std::cout << csv;
            wr::write_text_file(out_dir + "/table_1d.csv", csv);
            return 0;
        }
        if (ode->parsed()) {
            const wr::Expr theta = wr::parse_expr(theta_expr);
            wr::OdeProblem p;
            p.theta = [theta](double t) { return wr::eval(theta, {{"t", t}}); };
            p.t_lo = t0;
            p.t_hi = t1;
            const wr::OdeSolution s = wr::solve_ivp(p, w0, dw0);
            std::ostringstream csv;
            csv << "t,w,dw\n";
            for (int i = 0; i <= 256; ++i) {
                const double t = t0 + (t1 - t0) * i / 256.0;
                csv << wr::format_double(t) << "," << wr::format_double(s.value(t)) << ","
                    << wr::format_double(s.deriv(t)) << "\n";
            }
            std::cout << wr::write_text_file(out_dir + "/ode.csv", csv.str()) << "\n";
            if (period > 0.0) {
                p.period = period;
                p.t_hi = std::max(t1, period);
                const wr::CoexistenceReport rep = wr::coexistence(p);
                const wr::Mat& m = rep.mono;
                std::cout << "monodromy = [[" << m(0, 0) << ", " << m(0, 1) << "], [" << m(1, 0) << ", "
                          << m(1, 1) << "]]  det = " << wr::det(m) << "\n";
                std::cout << "coexistence: "
                          << (rep.verdict == wr::Coexistence::all_periodic
                                  ? "all_periodic"
                                  : rep.verdict == wr::Coexistence::one_periodic_ray ? "one_periodic_ray"
                                                                                     : "none")
                          << "  periodic_dim = " << rep.periodic_dim
                          << (rep.antiperiodic ? " (antiperiodic)" : "") << "\n";
            }
            return 0;
        }
        if (surf->parsed()) {
            nlohmann::json doc;
            doc["name"] = "surfaces_cli";
            doc["kind"] = "isocurved_pair";
            doc["params"] = {{"v1", v1_expr}, {"C2", c2}, {"window", {win_lo, win_hi}}};
            if (tail_bound >= 0.0) doc["params"]["tail_bound"] = tail_bound;
            const wr::ScenarioResult res = wr::run_scenario_json(doc, out_dir);
            for (const auto& c : res.checks)
                std::cout << (c.pass ? "  ok   " : "  FAIL ") << c.name << "  value="
                          << wr::format_double(c.value) << "\n";
            if (!res.error.empty()) std::cerr << "error: " << res.error << "\n";
            return res.exit_code;
        }
        if (thc->parsed()) return cmd_run(pair_path, out_dir);
    } catch (const wr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
