#include "levypos/commands.hpp"

#include "levypos/criterion.hpp"
#include "levypos/errors.hpp"
#include "levypos/spec_io.hpp"
#include "levypos/suite.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace levypos {

namespace {

using nlohmann::ordered_json;

std::vector<double> parse_t_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw InputError("--t expects comma-separated numbers, got '" + item + "'");
        }
        if (used != item.size() || !(v > 0.0) || !std::isfinite(v)) {
            throw InputError("--t values must be positive numbers, got '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw InputError("--t needs at least one value");
    }
    return out;
}

std::pair<int, int> parse_grid(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw InputError("--grid expects jmin:jmax, got '" + text + "'");
    }
    try {
        std::size_t u1 = 0;
        std::size_t u2 = 0;
        const std::string a = text.substr(0, colon);
        const std::string b = text.substr(colon + 1);
        const int lo = std::stoi(a, &u1);
        const int hi = std::stoi(b, &u2);
        if (u1 != a.size() || u2 != b.size() || hi <= lo || lo < 0 || hi > 1000) {
            throw InputError("");
        }
        return {lo, hi};
    } catch (const std::exception&) {
        throw InputError("--grid expects integers 0 <= jmin < jmax <= 1000, got '" + text + "'");
    }
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size() || v < 1 || v > kCriterionCount) {
                throw InputError("");
            }
            out.push_back(v);
        } catch (const std::exception&) {
            throw InputError("--only expects criterion numbers 1.." +
                             std::to_string(kCriterionCount) + ", got '" + item + "'");
        }
    }
    return out;
}

ordered_json base_inputs(const RunOptions& opt, const LevyModel* m) {
    ordered_json in;
    in["command"] = opt.command;
    in["spec"] = m ? ordered_json::parse(model_spec_json(*m)) : ordered_json(nullptr);
    in["seed"] = opt.seed;
    return in;
}

void prepare_out(const std::filesystem::path& out) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec || !std::filesystem::is_directory(out)) {
        throw InputError("cannot create output directory " + out.string());
    }
}

ordered_json flags_json(const ConditionFlags& f) {
    const auto opt = [](const std::optional<bool>& b) {
        return b ? ordered_json(*b) : ordered_json(nullptr);
    };
    ordered_json j;
    j["limit_inf"] = opt(f.limit_inf);
    j["limsup_inf"] = opt(f.limsup_inf);
    j["limsup_shifted_inf"] = opt(f.limsup_shifted_inf);
    j["liminf_plus_finite"] = opt(f.liminf_plus_finite);
    j["limsup_minus_finite"] = opt(f.limsup_minus_finite);
    return j;
}

ordered_json subordinator_json(const SubordinatorCheck& s) {
    ordered_json j;
    j["is_subordinator"] = s.is_subordinator;
    j["drift"] = json_number(s.drift);
    j["drift_nonneg"] = s.drift_nonneg;
    j["A_nonneg"] = s.A_nonneg;
    j["bounded_variation"] = s.bv;
    j["sigma_zero"] = s.sigma_zero;
    return j;
}

int run_analyze(const RunOptions& opt, const LevyModel& m, std::ostream& out) {
    const auto [jmin, jmax] = opt.grid.value_or(std::pair<int, int>{1, 30});
    ordered_json inputs = base_inputs(opt, &m);
    inputs["grid"] = {jmin, jmax};
    const Provenance prov{opt.command, m.label, opt.seed, config_hash(inputs)};

    const std::vector<double> grid = dyadic_grid(jmin, jmax);
    const FunctionalTable table = functional_table(m, grid);
    CsvWriter csv(prov, {"x", "tail_plus", "tail_minus", "nu", "A", "V", "V_plus", "V_minus", "U"});
    for (const Functionals& f : table.rows) {
        csv.row({f.x, f.tail_plus, f.tail_minus, f.nu, f.A, f.V, f.V_plus, f.V_minus, f.U});
    }
    csv.write(opt.out / "functionals.csv");

    const ValidationReport v = validate_model(m);
    ordered_json summary = provenance_json(prov);
    summary["validation"]["status"] = v.status == ValidationStatus::Pass           ? "pass"
                                      : v.status == ValidationStatus::AnalyticOnly ? "analytic_only"
                                                                                   : "reject";
    for (const ValidationCheck& c : v.checks) {
        summary["validation"]["checks"].push_back(
            {{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    summary["grid"] = {{"j_min", jmin}, {"j_max", jmax}, {"points", grid.size()}};
    summary["gamma"] = m.gamma;
    summary["sigma2"] = m.sigma2;
    const Functionals& last = table.rows.back();
    summary["smallest_x"] = {{"x", last.x}, {"A", json_number(last.A)}, {"U", json_number(last.U)},
                             {"nu", json_number(last.nu)}};
    summary["files"] = {"functionals.csv"};
    write_json(opt.out / "summary.json", summary);
    out << "analyze: " << table.rows.size() << " rows written to " << (opt.out / "functionals.csv").string()
        << "\n";
    return kExitOk;
}

int run_classify(const RunOptions& opt, const LevyModel& m, std::ostream& out) {
    ClassifyConfig cfg;
    if (opt.grid) {
        cfg.j_min = opt.grid->first;
        cfg.j_max = opt.grid->second;
    }
    ordered_json inputs = base_inputs(opt, &m);
    inputs["grid"] = {cfg.j_min, cfg.j_max};
    const Provenance prov{opt.command, m.label, opt.seed, config_hash(inputs)};
    const CriterionReport r = classify(m, cfg);

    ordered_json doc = provenance_json(prov);
    doc["verdict"] = std::string(to_string(r.verdict));
    doc["heuristic_verdict"] = std::string(to_string(r.heuristic_verdict));
    doc["oracle_verdict"] =
        r.oracle_verdict ? ordered_json(std::string(to_string(*r.oracle_verdict))) : ordered_json(nullptr);
    doc["oracle_agrees"] = r.oracle_agrees;
    doc["flags"] = flags_json(r.flags);
    doc["oracle_flags"] = r.oracle_flags ? flags_json(*r.oracle_flags) : ordered_json(nullptr);
    doc["slopes"] = {{"ratio_minus", json_number(r.slopes.ratio_minus)},
                     {"ratio_minus_envelope", json_number(r.slopes.ratio_minus_envelope)},
                     {"ratio_plus", json_number(r.slopes.ratio_plus)},
                     {"ratio_plus_envelope", json_number(r.slopes.ratio_plus_envelope)},
                     {"ratio_minus_shifted", json_number(r.slopes.ratio_minus_shifted)},
                     {"ratio_minus_shifted_envelope",
                      json_number(r.slopes.ratio_minus_shifted_envelope)}};
    doc["subordinator"] = r.subordinator ? subordinator_json(*r.subordinator) : ordered_json(nullptr);
    doc["negative_subordinator"] =
        r.negative_subordinator ? subordinator_json(*r.negative_subordinator) : ordered_json(nullptr);
    doc["A0"] = {{"value", json_number(r.A0.value)},
                 {"band", json_number(r.A0.band)},
                 {"converged", r.A0.converged}};
    doc["config"] = {{"j_min", cfg.j_min}, {"j_max", cfg.j_max},   {"r_max", cfg.r_max},
                     {"s_min", cfg.s_min}, {"min_points", cfg.min_points}};
    doc["notes"] = r.notes;
    CsvWriter csv(prov, {"x", "ratio_minus", "ratio_plus", "ratio_minus_shifted"});
    for (const RatioSample& s : r.ratios) {
        doc["ratio_table"].push_back({{"x", s.x},
                                      {"ratio_minus", json_number(s.ratio_minus)},
                                      {"ratio_plus", json_number(s.ratio_plus)},
                                      {"ratio_minus_shifted", json_number(s.ratio_minus_shifted)}});
        csv.row({s.x, s.ratio_minus, s.ratio_plus, s.ratio_minus_shifted});
    }
    write_json(opt.out / "report.json", doc);
    csv.write(opt.out / "ratios.csv");
    out << "classify: " << m.label << " -> " << to_string(r.verdict)
        << (r.oracle_agrees ? "" : " (heuristic and closed form disagree)") << "\n";
    return kExitOk;
}

ordered_json sim_config_json(const SimConfig& cfg, double M_ratio, double M_linear) {
    ordered_json j;
    j["h_plus"] = cfg.h_plus;
    j["h_minus"] = cfg.h_minus;
    j["epsilon"] = cfg.epsilon > 0.0 ? ordered_json(cfg.epsilon) : ordered_json("auto");
    j["gaussian_surrogate"] = cfg.gaussian_surrogate;
    j["n_samples"] = cfg.n_samples;
    j["t_values"] = cfg.t_values;
    j["surrogate_target"] = cfg.surrogate_target;
    j["max_band_rate"] = cfg.max_band_rate;
    j["M_ratio"] = M_ratio;
    j["M_linear"] = M_linear;
    return j;
}

int run_simulate(const RunOptions& opt, const LevyModel& m, std::ostream& out) {
    SimConfig cfg;
    cfg.master_seed = opt.seed;
    cfg.n_samples = opt.n.value_or(10000);
    cfg.t_values = opt.t.empty() ? std::vector<double>{1e-2, 1e-3, 1e-4} : opt.t;
    try {
        cfg.validate();
    } catch (const PreconditionError& e) {
        throw InputError(e.what());
    }
    const double M_ratio = opt.M.value_or(kDefaultRatioM);
    const double M_linear = opt.M.value_or(kDefaultLinearM);
    const auto rows = simulate_rows(m, cfg.t_values, cfg, M_ratio, M_linear);
    write_simulation_report(opt.out, m, cfg, M_ratio, M_linear, rows);
    for (const SimulationRow& r : rows) {
        out << "simulate: t=" << format_number(r.t) << " " << r.estimator
            << " p_hat=" << format_number(r.estimate.p_hat) << " ci=["
            << format_number(r.estimate.ci_low) << ", " << format_number(r.estimate.ci_high)
            << "]\n";
    }
    return kExitOk;
}

int run_verify(const RunOptions& opt, const LevyModel* m, std::ostream& out) {
    std::vector<CriterionOutcome> results;
    if (m) {
        ModelCheckOptions mo;
        mo.seed = opt.seed;
        mo.t_values = opt.t;
        mo.n_samples = opt.n.value_or(20000);
        if (opt.grid) {
            mo.grid = *opt.grid;
        }
        results = verify_model(*m, mo);
    } else {
        SuiteOptions so;
        so.seed = opt.seed;
        so.scratch = opt.out / "suite";
        results = run_suite(so, opt.only);
    }
    ordered_json inputs = base_inputs(opt, m);
    inputs["only"] = opt.only;
    inputs["t"] = opt.t;
    const Provenance prov{opt.command, m ? m->label : "catalog", opt.seed, config_hash(inputs)};
    ordered_json doc = provenance_json(prov);
    std::string text = "# model_label=" + prov.model_label + " seed=" + std::to_string(opt.seed) +
                       " config_hash=" + prov.config_hash + "\n";
    bool all = true;
    for (const CriterionOutcome& c : results) {
        const std::string line = format_outcome(c);
        out << line << "\n";
        text += line + "\n";
        all = all && c.passed;
        doc["checks"].push_back(
            {{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"details", c.details}});
    }
    doc["all_passed"] = all;
    write_text(opt.out / "verify.txt", text);
    write_json(opt.out / "verify.json", doc);
    return all ? kExitOk : kExitAcceptance;
}

}  // namespace

std::vector<SimulationRow> simulate_rows(const LevyModel& m, const std::vector<double>& t_values,
                                         const SimConfig& cfg, double M_ratio, double M_linear) {
    std::vector<SimulationRow> rows;
    const bool ratio = !m.tail_minus.is_zero();
    for (const double t : t_values) {
        const SampleBatch b = simulate_batch(m, t, cfg);
        const auto add = [&](std::string name, double M, Estimate e) {
            SimulationRow r;
            r.t = t;
            r.estimator = std::move(name);
            r.M = M;
            r.estimate = e;
            r.epsilon = b.plan.epsilon;
            r.surrogate_ratio = b.plan.surrogate_ratio;
            r.surrogate_target_met = b.plan.surrogate_target_met;
            rows.push_back(std::move(r));
        };
        add("positive", 0.0, positive_fraction(b.samples));
        if (ratio) {
            add("ratio(M=" + format_number(M_ratio) + ")", M_ratio,
                ratio_fraction(b.samples, M_ratio, b.plan.epsilon));
        }
        add("linear(M=" + format_number(M_linear) + ")", M_linear,
            linear_fraction(b.samples, M_linear, t));
    }
    return rows;
}

void write_simulation_report(const std::filesystem::path& dir, const LevyModel& m,
                             const SimConfig& cfg, double M_ratio, double M_linear,
                             const std::vector<SimulationRow>& rows) {
    prepare_out(dir);
    ordered_json inputs;
    inputs["command"] = "simulate";
    inputs["spec"] = ordered_json::parse(model_spec_json(m));
    inputs["seed"] = cfg.master_seed;
    inputs["config"] = sim_config_json(cfg, M_ratio, M_linear);
    const Provenance prov{"simulate", m.label, cfg.master_seed, config_hash(inputs)};

    ordered_json doc = provenance_json(prov);
    doc["config"] = inputs["config"];
    doc["note"] = "estimates describe the supplied t values only; the ratio estimator floors the "
                  "largest negative jump at epsilon, which can only lower p_hat";
    CsvWriter csv(prov, {"t", "n", "p_hat", "ci_low", "ci_high", "estimator"});
    for (const SimulationRow& r : rows) {
        doc["results"].push_back({{"t", r.t},
                                  {"estimator", r.estimator},
                                  {"M", r.M},
                                  {"n", r.estimate.n},
                                  {"p_hat", r.estimate.p_hat},
                                  {"ci", {r.estimate.ci_low, r.estimate.ci_high}},
                                  {"epsilon", r.epsilon},
                                  {"surrogate_ratio", json_number(r.surrogate_ratio)},
                                  {"surrogate_target_met", r.surrogate_target_met}});
        csv.row({format_number(r.t), std::to_string(r.estimate.n), format_number(r.estimate.p_hat),
                 format_number(r.estimate.ci_low), format_number(r.estimate.ci_high), r.estimator});
    }
    write_json(dir / "simulation.json", doc);
    csv.write(dir / "simulation.csv");
}

int run_command(const RunOptions& opt, std::ostream& out) {
    static const std::vector<std::string> commands{"analyze", "classify", "simulate", "verify"};
    if (std::find(commands.begin(), commands.end(), opt.command) == commands.end()) {
        throw InputError("unknown command '" + opt.command + "'");
    }
    if (opt.out.empty()) {
        throw InputError("--out is required");
    }
    if (opt.spec.empty() && opt.command != "verify") {
        throw InputError("--spec is required for " + opt.command);
    }
    std::optional<LevyModel> model;
    if (!opt.spec.empty()) {
        model = load_model_spec(opt.spec);
    }
    prepare_out(opt.out);
    if (opt.command == "analyze") {
        return run_analyze(opt, *model, out);
    }
    if (opt.command == "classify") {
        return run_classify(opt, *model, out);
    }
    if (opt.command == "simulate") {
        return run_simulate(opt, *model, out);
    }
    return run_verify(opt, model ? &*model : nullptr, out);
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Small-time positivity of Levy processes: functionals, classification, "
                 "simulation and verification"};
    RunOptions opt;
    std::string grid;
    std::string t_list;
    std::string only;
    std::size_t n = 0;
    double M = 0.0;
    app.add_option("command", opt.command, "analyze | classify | simulate | verify")
        ->required()
        ->check(CLI::IsMember({"analyze", "classify", "simulate", "verify"}));
    app.add_option("--spec", opt.spec, "process spec (JSON)");
    app.add_option("--out", opt.out, "output directory")->required();
    app.add_option("--seed", opt.seed, "master seed");
    auto* grid_opt = app.add_option("--grid", grid, "dyadic grid jmin:jmax (x = 2^-j)");
    auto* t_opt = app.add_option("--t", t_list, "comma-separated times");
    auto* n_opt = app.add_option("--n", n, "samples per time")->check(CLI::Range(100, 100000000));
    auto* m_opt = app.add_option("--M", M, "threshold multiplier")->check(CLI::NonNegativeNumber);
    auto* only_opt = app.add_option("--only", only, "verify: comma-separated criterion numbers");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return kExitInput;
    }
    try {
        if (*grid_opt) {
            opt.grid = parse_grid(grid);
        }
        if (*t_opt) {
            opt.t = parse_t_list(t_list);
        }
        if (*n_opt) {
            opt.n = n;
        }
        if (*m_opt) {
            opt.M = M;
        }
        if (*only_opt) {
            opt.only = parse_int_list(only);
        }
        return run_command(opt, std::cout);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace levypos
