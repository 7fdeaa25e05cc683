#include "wr/scenario.hpp"

#include "wr/errors.hpp"
#include "wr/geom.hpp"
#include "wr/hill.hpp"
#include "wr/rigidity.hpp"
#include "wr/solspace.hpp"
#include "wr/spaceform.hpp"
#include "wr/warp.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace wr {

namespace {

struct SchemaError : Error {
    using Error::Error;
};

const nlohmann::json& need(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) throw SchemaError("missing required field '" + key + "'");
    return j.at(key);
}

double need_num(const nlohmann::json& j, const std::string& key) {
    const auto& v = need(j, key);
    if (!v.is_number()) throw SchemaError("field '" + key + "' must be a number");
    return v.get<double>();
}

std::string need_str(const nlohmann::json& j, const std::string& key) {
    const auto& v = need(j, key);
    if (!v.is_string()) throw SchemaError("field '" + key + "' must be a string");
    return v.get<std::string>();
}

double opt_num(const nlohmann::json& j, const std::string& key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number()) throw SchemaError("field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

std::pair<double, double> need_window(const nlohmann::json& j, const std::string& key) {
    const auto& v = need(j, key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw SchemaError("field '" + key + "' must be [lo, hi]");
    const double lo = v[0].get<double>(), hi = v[1].get<double>();
    if (!(lo < hi)) throw SchemaError("window must have lo < hi");
    return {lo, hi};
}

SpaceFormSpec fiber_from_json(const nlohmann::json& j) {
    SpaceFormSpec spec;
    const std::string kind = need_str(j, "kind");
    if (kind == "sphere")
        spec.kind = SpaceFormKind::sphere;
    else if (kind == "euclidean")
        spec.kind = SpaceFormKind::euclidean;
    else if (kind == "hyperbolic")
        spec.kind = SpaceFormKind::hyperbolic;
    else
        throw SchemaError("fiber kind must be sphere|euclidean|hyperbolic");
    spec.dim = static_cast<int>(need_num(j, "dim"));
    spec.tau = opt_num(j, "tau", kind == "sphere" ? 1.0 : (kind == "hyperbolic" ? -1.0 : 0.0));
    if (j.contains("tau_fn")) {
        const Expr e = parse_expr(need_str(j, "tau_fn"));
        spec.tau_fn = [e](double t) { return eval(e, {{"t", t}}); };
    }
    return spec;
}

struct CheckList {
    std::vector<ScenarioCheck>& checks;
    void bound(const std::string& name, double value, double threshold) {
        checks.push_back({name, value < threshold, value, threshold, ""});
    }
    void equal_int(const std::string& name, int got, int expect) {
        checks.push_back({name, got == expect, static_cast<double>(got), static_cast<double>(expect),
                          "expects equality"});
    }
    void truth(const std::string& name, bool ok, const std::string& note = "") {
        checks.push_back({name, ok, ok ? 1.0 : 0.0, 1.0, note});
    }
};

// ---- kind handlers ----------------------------------------------------

void run_oneD_table(const nlohmann::json& params, const std::string& out_dir, ScenarioResult& res) {
    const auto& rows_in = need(params, "rows");
    if (!rows_in.is_array() || rows_in.empty()) throw SchemaError("'rows' must be a nonempty array");
    std::vector<std::pair<std::string, std::pair<double, double>>> reqs;
    std::vector<std::optional<std::vector<int>>> expects;
    for (const auto& r : rows_in) {
        reqs.push_back({need_str(r, "domain"), {need_num(r, "tau"), opt_num(r, "extent", 1.0)}});
        if (r.contains("expect")) {
            std::vector<int> e = r.at("expect").get<std::vector<int>>();
            if (e.size() != 3) throw SchemaError("'expect' must be [dim, dim_D, dim_N]");
            expects.emplace_back(std::move(e));
        } else {
            expects.emplace_back(std::nullopt);
        }
    }
    const auto rows = table_1d(reqs);
    res.artifacts.push_back(write_text_file(out_dir + "/table_1d.csv", table_1d_csv(rows)));
    CheckList ck{res.checks};
    for (size_t i = 0; i < rows.size(); ++i)
        if (expects[i]) {
            ck.equal_int("row" + std::to_string(i) + "_dim", rows[i].dim, (*expects[i])[0]);
            ck.equal_int("row" + std::to_string(i) + "_dim_D", rows[i].dim_D, (*expects[i])[1]);
            ck.equal_int("row" + std::to_string(i) + "_dim_N", rows[i].dim_N, (*expects[i])[2]);
        }
}

LineFamily family_from_json(const nlohmann::json& params) {
    const auto window = need_window(params, "window");
    const ScalarField u = field_from_expr(need_str(params, "u"), {"t"});
    const SpaceFormModel fiber = make_space_form(fiber_from_json(need(params, "fiber")));
    return line_base_family(u, fiber, window.first, window.second);
}

void run_warped_build(const nlohmann::json& params, const std::string& out_dir, ScenarioResult& res,
                      const nlohmann::json& tol) {
    LineFamily fam = family_from_json(params);
    const double residual_tol = opt_num(tol, "residual", 1e-6);
    const double roundtrip_tol = opt_num(tol, "roundtrip", 1e-8);
    const double mu_tol = opt_num(tol, "mu_spread", 1e-6);

    const auto grid = fam.wp.product_grid(17, 17, 20.0 * kDefaultStep);
    SolutionSpace total{fam.wp.total, fam.q, {}, {}};
    CheckList ck{res.checks};

    std::ostringstream csv;
    csv << "t,y";
    for (size_t i = 0; i < fam.wp.fiber.basis.size(); ++i) csv << ",residual_w" << i;
    csv << "\n";

    std::vector<ScalarField> lifts;
    for (const auto& v : fam.wp.fiber.basis) lifts.push_back(lift_solution(fam.wp, v));
    std::vector<double> worst(lifts.size(), 0.0);
    for (const Point& p : grid) {
        csv << format_double(p[0]) << "," << format_double(p[1]);
        for (size_t i = 0; i < lifts.size(); ++i) {
            const Mat hw = hess_scalar(total.manifold, lifts[i], p);
            const double r = (hw - fam.q.q(p).scaled(lifts[i].eval(p))).frobenius();
            worst[i] = std::max(worst[i], r);
            csv << "," << format_double(r);
        }
        csv << "\n";
    }
    res.artifacts.push_back(write_text_file(out_dir + "/lift_residuals.csv", csv.str()));
    for (size_t i = 0; i < lifts.size(); ++i)
        ck.bound("lift_w" + std::to_string(i) + "_residual", worst[i], residual_tol);

    for (size_t i = 0; i < lifts.size(); ++i) {
        const Decomposition dec = decompose(fam.wp, lifts[i]);
        ck.bound("decompose_w" + std::to_string(i) + "_consistency", dec.consistency, roundtrip_tol);
        double z_sup = 0.0;
        std::vector<int> counts{17};
        for (const Point& x : interior_grid(fam.wp.base.metric.chart, counts, 20.0 * kDefaultStep))
            z_sup = std::max(z_sup, std::abs(dec.z.eval(x)));
        ck.bound("decompose_w" + std::to_string(i) + "_gauge_z", z_sup, roundtrip_tol);
    }

    if (!fam.wp.fiber.spec.has_tau_fn()) {
        for (size_t i = 0; i < lifts.size(); ++i) {
            const MuForms mf = mu_forms(fam.wp, lifts[i], lifts[i], grid);
            ck.bound("mu_spread_w" + std::to_string(i), mf.mu1_spread, mu_tol);
        }
        ck.truth("constant_curvature_condition",
                 true, fam.constant_curvature_condition ? "holds (dim = k+2)" : "fails (dim = k+1)");
    }

    const ExtensionReport ext = check_extension_conditions(
        fam.wp, constant_field(fam.wp.base_dim(), 0.0), fam.wp.fiber.basis.front());
    ck.bound("extension_pair_residual", std::max(ext.z_residual, ext.fiber_residual_direct), residual_tol);
    ck.bound("extension_forms_agree", ext.forms_agreement, 1e-10);
}

void run_curvature_crosscheck(const nlohmann::json& params, const std::string& out_dir,
                              ScenarioResult& res, const nlohmann::json& tol) {
    LineFamily fam = family_from_json(params);
    const double curv_tol = opt_num(tol, "curvature", 1e-4);
    const double trace_tol = opt_num(tol, "trace", 1e-6);
    CheckList ck{res.checks};
    const auto grid = fam.wp.product_grid(9, 5, 40.0 * kDefaultStep);
    std::ostringstream csv;
    csv << "t,y,scalar_fd,scalar_closed,vertical_dev,horizontal_dev,radial_dev,scalar_dev\n";
    double worst = 0.0, worst_trace = 0.0;
    for (const Point& p : grid) {
        const CurvatureCheckReport rep = oneill_curvature_check(fam.wp, p);
        const CurvatureReport fd = curvature(fam.wp.total, p);
        worst = std::max(worst, rep.max_dev());
        worst_trace = std::max(worst_trace, trace_relation_check(fam.wp, p).dev);
        csv << format_double(p[0]) << "," << format_double(p[1]) << "," << format_double(fd.scalar) << ","
            << format_double(rep.scalar_closed) << "," << format_double(rep.vertical_ricci_dev) << ","
            << format_double(rep.horizontal_ricci_dev) << "," << format_double(rep.radial_hessian_dev)
            << "," << format_double(rep.scalar_dev) << "\n";
    }
    res.artifacts.push_back(write_text_file(out_dir + "/curvature_crosscheck.csv", csv.str()));
    ck.bound("curvature_identities_rel_dev", worst, curv_tol);
    ck.bound("trace_relation_dev", worst_trace, trace_tol);
}

void run_isocurved_pair(const nlohmann::json& params, const std::string& out_dir, ScenarioResult& res,
                        const nlohmann::json& tol) {
    const auto window = need_window(params, "window");
    const ScalarField v1 = field_from_expr(need_str(params, "v1"), {"t"});
    const double c2 = need_num(params, "C2");
    std::optional<double> tail;
    if (params.contains("tail_bound")) tail = need_num(params, "tail_bound");
    const IsocurvedBuild build = build_isocurved_pair(v1, c2, window.first, window.second, tail);
    const SurfacePair& pair = build.pair;

    CheckList ck{res.checks};
    ck.bound("curvature_match", pair.curvature_match, opt_num(tol, "curvature_match", 1e-6));
    ck.bound("wronskian_spread", pair.wronskian_spread, opt_num(tol, "wronskian_spread", 1e-7));

    std::ostringstream csv;
    csv << "t,tau,v1,v2,wronskian\n";
    for (int i = 0; i <= 128; ++i) {
        const double t = window.first + (window.second - window.first) * i / 128.0;
        const Point p{t};
        const double w = pair.v2.grad(p)[0] * pair.v1.eval(p) - pair.v2.eval(p) * pair.v1.grad(p)[0];
        csv << format_double(t) << "," << format_double(pair.tau(t)) << "," << format_double(pair.v1.eval(p))
            << "," << format_double(pair.v2.eval(p)) << "," << format_double(w) << "\n";
    }
    res.artifacts.push_back(write_text_file(out_dir + "/isocurved_pair.csv", csv.str()));

    if (params.contains("expected_tau")) {
        const Expr e = parse_expr(need_str(params, "expected_tau"));
        double dev = 0.0;
        for (int i = 0; i <= 128; ++i) {
            const double t = window.first + (window.second - window.first) * i / 128.0;
            dev = std::max(dev, std::abs(pair.tau(t) - eval(e, {{"t", t}})));
        }
        ck.bound("tau_matches_expected", dev, opt_num(tol, "tau", 1e-6));
    }

    // FD Gauss curvature of both surface metrics must reproduce tau
    double fd_dev = 0.0;
    const double margin = 40.0 * kDefaultStep;
    for (int i = 0; i <= 16; ++i) {
        const double t = window.first + margin + (window.second - window.first - 2 * margin) * i / 16.0;
        const Point p{t, 0.0};
        fd_dev = std::max(fd_dev, std::abs(0.5 * curvature(pair.metric1(), p).scalar - pair.tau(t)));
        fd_dev = std::max(fd_dev, std::abs(0.5 * curvature(pair.metric2(), p).scalar - pair.tau(t)));
    }
    ck.bound("fd_gauss_curvature_dev", fd_dev, opt_num(tol, "fd_curvature", 1e-4));

    const NonIsometryReport wit = non_isometry_witness(pair);
    ck.truth("witness_not_isometric", wit.conclusive && wit.verdict == "not isometric", wit.reason);
    ck.bound("witness_min_gap_positive", -wit.min_log_slope_gap, 0.0);
}

void run_liealg(const nlohmann::json& params, const std::string& out_dir, ScenarioResult& res,
                const nlohmann::json& tol, unsigned seed) {
    const SpaceFormModel model = make_space_form(fiber_from_json(need(params, "model")));
    const int pairs = static_cast<int>(opt_num(params, "pairs", 100));
    const int npts = static_cast<int>(opt_num(params, "points", 20));
    const GramMu gm = gram_mu(model);
    const int n = gm.gram.rows();

    std::ostringstream csv;
    csv << "i,j,gram\n";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            csv << i << "," << j << "," << format_double(gm.gram(i, j)) << "\n";
    res.artifacts.push_back(write_text_file(out_dir + "/gram.csv", csv.str()));

    CheckList ck{res.checks};
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    auto random_wedge = [&]() {
        WedgeElement z;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) z.add(coeff(rng), i, j);
        return z;
    };
    double anti = 0.0, bracket_dev = 0.0, jacobi = 0.0;
    for (int rep = 0; rep < pairs; ++rep) {
        const WedgeElement z1 = random_wedge(), z2 = random_wedge(), z3 = random_wedge();
        const Mat l1 = wedge_endomorphism(gm.gram, z1).matrix;
        const Mat l2 = wedge_endomorphism(gm.gram, z2).matrix;
        anti = std::max(anti, (gm.gram * l1 + l1.transpose() * gm.gram).max_abs());
        const Mat comm = l1 * l2 - l2 * l1;
        bracket_dev =
            std::max(bracket_dev, (comm - wedge_endomorphism(gm.gram, bracket_wedge(gm.gram, z1, z2)).matrix)
                                      .max_abs());
        const Mat l3 = wedge_endomorphism(gm.gram, z3).matrix;
        const Mat cyc = (l1 * (l2 * l3 - l3 * l2) - (l2 * l3 - l3 * l2) * l1) +
                        (l2 * (l3 * l1 - l1 * l3) - (l3 * l1 - l1 * l3) * l2) +
                        (l3 * (l1 * l2 - l2 * l1) - (l1 * l2 - l2 * l1) * l3);
        jacobi = std::max(jacobi, cyc.max_abs());
    }
    ck.bound("mu_antisymmetry", anti, opt_num(tol, "antisymmetry", 1e-12));
    ck.bound("bracket_identity", bracket_dev, opt_num(tol, "bracket", 1e-10));
    ck.bound("jacobi_identity", jacobi, opt_num(tol, "jacobi", 1e-10));

    SolutionSpace s{model.metric, qform_scaled_metric(model.metric, -model.tau()), model.basis, {}};
    const auto pts = sample_interior(model.metric.chart, npts, 0.1, rng);
    double hom = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = k + 1; l < n; ++l)
                    hom = std::max(hom, homomorphism_check(s, gm.gram, WedgeElement::basis(i, j),
                                                           WedgeElement::basis(k, l), pts));
    ck.bound("iota_homomorphism", hom, opt_num(tol, "homomorphism", 1e-5));
}

void run_theoremC(const nlohmann::json& params, const std::string& out_dir, ScenarioResult& res,
                  const nlohmann::json&) {
    EinsteinPairSpec spec;
    const auto& mj = need(params, "metric");
    const std::string mkind = need_str(mj, "kind");
    std::vector<std::string> coords;
    if (mkind == "line") {
        const auto window = need_window(mj, "window");
        spec.M = euclidean_metric(1, {window.first}, {window.second}, "line");
        coords = {"t"};
    } else if (mkind == "circle") {
        const double radius = need_num(mj, "radius");
        Chart c = Chart::box({0.0}, {2.0 * M_PI * radius});
        c.set_periodic(0, 2.0 * M_PI * radius);
        spec.M = metric_from_exprs(c, {"1"}, {"t"}, "circle");
        coords = {"t"};
    } else if (mkind == "space_form") {
        SpaceFormSpec fs;
        const std::string form = need_str(mj, "form");
        if (form == "hyperbolic")
            fs.kind = SpaceFormKind::hyperbolic;
        else if (form == "sphere")
            fs.kind = SpaceFormKind::sphere;
        else if (form == "euclidean")
            fs.kind = SpaceFormKind::euclidean;
        else
            throw SchemaError("space_form 'form' must be sphere|euclidean|hyperbolic");
        fs.dim = static_cast<int>(need_num(mj, "dim"));
        fs.tau = opt_num(mj, "tau", form == "sphere" ? 1.0 : (form == "hyperbolic" ? -1.0 : 0.0));
        const SpaceFormModel model = make_space_form(fs);
        spec.M = model.metric;
        if (fs.kind == SpaceFormKind::hyperbolic)
            coords = fs.dim == 2 ? std::vector<std::string>{"r", "phi"} : std::vector<std::string>{"t"};
        else if (fs.kind == SpaceFormKind::sphere)
            coords = fs.dim == 2 ? std::vector<std::string>{"theta", "phi"} : std::vector<std::string>{"theta"};
        else
            for (int i = 0; i < fs.dim; ++i) coords.push_back("x" + std::to_string(i + 1));
    } else {
        throw SchemaError("metric kind must be line|circle|space_form");
    }
    spec.w1 = field_from_expr(need_str(params, "w1"), coords);
    spec.w2 = field_from_expr(need_str(params, "w2"), coords);
    spec.d = static_cast<int>(opt_num(params, "d", 1));
    spec.kappa1 = opt_num(params, "kappa1", 0.0);
    spec.kappa2 = opt_num(params, "kappa2", 0.0);
    spec.name = res.name;

    const ClassifyReport rep = classify_pair(spec);
    const ClassifyReport swapped_rep = classify_pair(swapped(spec));

    std::ostringstream csv;
    csv << "which,verdict,stage,tau_mean,tau_spread,curvature_gap\n";
    csv << "direct," << to_string(rep.verdict) << "," << rep.stage << "," << format_double(rep.tau_mean)
        << "," << format_double(rep.tau_spread) << "," << format_double(rep.curvature_gap) << "\n";
    csv << "swapped," << to_string(swapped_rep.verdict) << "," << swapped_rep.stage << ","
        << format_double(swapped_rep.tau_mean) << "," << format_double(swapped_rep.tau_spread) << ","
        << format_double(swapped_rep.curvature_gap) << "\n";
    res.artifacts.push_back(write_text_file(out_dir + "/classification.csv", csv.str()));

    CheckList ck{res.checks};
    ck.truth("swap_symmetric", rep.verdict == swapped_rep.verdict,
             to_string(rep.verdict) + " vs " + to_string(swapped_rep.verdict));
    if (params.contains("expect"))
        ck.truth("verdict", to_string(rep.verdict) == need_str(params, "expect"),
                 to_string(rep.verdict) + ": " + rep.detail);
}

} // namespace

nlohmann::json ScenarioResult::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["kind"] = kind;
    j["pass"] = pass;
    j["exit_code"] = exit_code;
    j["error"] = error;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        cj["value"] = c.value;
        cj["threshold"] = c.threshold;
        cj["note"] = c.note;
        j["checks"].push_back(cj);
    }
    j["artifacts"] = artifacts;
    return j;
}

ScenarioResult run_scenario_json(const nlohmann::json& doc, const std::string& out_dir) {
    ScenarioResult res;
    try {
        res.name = need_str(doc, "name");
        res.kind = need_str(doc, "kind");
        const unsigned seed = static_cast<unsigned>(opt_num(doc, "seed", 0.0));
        const nlohmann::json tol = doc.contains("tolerances") ? doc.at("tolerances") : nlohmann::json::object();
        const nlohmann::json& params = need(doc, "params");
        static const std::vector<std::string> kinds = {"oneD_table",     "warped_build", "isocurved_pair",
                                                       "liealg",         "theoremC",     "curvature_crosscheck"};
        if (std::find(kinds.begin(), kinds.end(), res.kind) == kinds.end())
            throw SchemaError("unknown scenario kind '" + res.kind + "'");
        std::filesystem::create_directories(out_dir);
        if (res.kind == "oneD_table")
            run_oneD_table(params, out_dir, res);
        else if (res.kind == "warped_build")
            run_warped_build(params, out_dir, res, tol);
        else if (res.kind == "curvature_crosscheck")
            run_curvature_crosscheck(params, out_dir, res, tol);
        else if (res.kind == "isocurved_pair")
            run_isocurved_pair(params, out_dir, res, tol);
        else if (res.kind == "liealg")
            run_liealg(params, out_dir, res, tol, seed);
        else if (res.kind == "theoremC")
            run_theoremC(params, out_dir, res, tol);
        res.pass = true;
        for (const auto& c : res.checks) res.pass = res.pass && c.pass;
        res.exit_code = res.pass ? kExitPass : kExitAssertionFailed;
        if (!res.pass) {
            for (const auto& c : res.checks)
                if (!c.pass) {
                    res.error = "check failed: " + c.name;
                    break;
                }
        }
    } catch (const SchemaError& e) {
        res.pass = false;
        res.exit_code = kExitSchemaError;
        res.error = e.what();
    } catch (const Error& e) {
        res.pass = false;
        res.exit_code = kExitAssertionFailed;
        res.error = e.what();
    }
    try {
        write_text_file(out_dir + "/report.json", res.to_json().dump(2) + "\n");
        res.artifacts.push_back(out_dir + "/report.json");
    } catch (...) {
        // report writing must never mask the run outcome
    }
    return res;
}

ScenarioResult run_scenario_file(const std::string& path, const std::string& out_dir) {
    auto failed = [&out_dir](const std::string& why) {
        ScenarioResult res;
        res.exit_code = kExitSchemaError;
        res.error = why;
        try {
            write_text_file(out_dir + "/report.json", res.to_json().dump(2) + "\n");
        } catch (...) {
        }
        return res;
    };
    std::ifstream in(path);
    if (!in) return failed("cannot open scenario file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        return failed(std::string("JSON parse error: ") + e.what());
    }
    return run_scenario_json(doc, out_dir);
}

std::vector<OneDTableRow> table_1d(
    const std::vector<std::pair<std::string, std::pair<double, double>>>& rows) {
    std::vector<OneDTableRow> out;
    for (const auto& [domain, tt] : rows) {
        OneDProblem p;
        if (domain == "line")
            p.domain = OneDDomain::line;
        else if (domain == "circle")
            p.domain = OneDDomain::circle;
        else if (domain == "half_line")
            p.domain = OneDDomain::half_line;
        else if (domain == "interval")
            p.domain = OneDDomain::interval;
        else
            throw SchemaError("unknown 1-D domain '" + domain + "'");
        p.tau = tt.first;
        p.extent = tt.second;
        if (p.domain == OneDDomain::line || p.domain == OneDDomain::half_line) p.extent = std::max(p.extent, 3.0);
        if (p.domain == OneDDomain::interval) p.extent = 2.0 * M_PI * tt.second;
        const OneDClassification c = classify_1d(p);
        out.push_back({domain, tt.first, tt.second, c.dim, c.dim_D, c.dim_N});
    }
    return out;
}

std::string table_1d_csv(const std::vector<OneDTableRow>& rows) {
    std::ostringstream os;
    os << "domain,tau,a,dim,dim_D,dim_N\n";
    for (const auto& r : rows)
        os << r.domain << "," << format_double(r.tau) << "," << format_double(r.extent) << "," << r.dim
           << "," << r.dim_D << "," << r.dim_N << "\n";
    return os.str();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary); // binary keeps LF endings everywhere
    if (!out) throw Error("cannot write " + path);
    out << content;
    return path;
}

} // namespace wr
