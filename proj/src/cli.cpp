#include "gasket/cli.hpp"

#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gasket/divisible.hpp"
#include "gasket/graph.hpp"
#include "gasket/harness.hpp"
#include "gasket/io.hpp"
#include "gasket/render.hpp"
#include "gasket/rotor.hpp"
#include "gasket/sandpile.hpp"

namespace gasket {

namespace {

namespace fs = std::filesystem;

// --law values are inline JSON or @file references
nlohmann::json law_json(const std::string& flag) {
    if (!flag.empty() && flag[0] == '@') {
        return nlohmann::json::parse(read_file(flag.substr(1)));
    }
    try {
        return nlohmann::json::parse(flag);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string("cannot parse law JSON: ") + e.what());
    }
}

RotorLaw parse_rotor_law(const std::string& flag) {
    const nlohmann::json j = law_json(flag);
    if (!j.is_array() || j.size() != 4) {
        throw config_error("rotor law must be a JSON array of 4 probabilities");
    }
    return RotorLaw({j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                     j[3].get<double>()});
}

HeightLaw parse_height_law(const std::string& flag) {
    const nlohmann::json j = law_json(flag);
    std::vector<std::pair<std::int64_t, double>> support;
    for (const auto& entry : j) {
        support.emplace_back(entry.at(0).get<std::int64_t>(), entry.at(1).get<double>());
    }
    return HeightLaw(std::move(support));
}

MassLaw parse_mass_law(const std::string& flag) {
    const nlohmann::json j = law_json(flag);
    std::vector<std::pair<double, double>> support;
    for (const auto& entry : j) {
        support.emplace_back(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
    return MassLaw(std::move(support));
}

LatticeCoord parse_coord_flag(const std::string& flag) {
    try {
        return parse_coord_key(flag);
    } catch (const std::exception&) {
        throw config_error("coordinates must be given as a,b");
    }
}

// Every run directory receives the resolved configuration; re-running that
// configuration reproduces all outputs byte for byte.
struct OutputDir {
    explicit OutputDir(const std::string& dir) : path(dir) {
        std::error_code ec;
        fs::create_directories(path, ec);
        if (ec) throw config_error("cannot create output directory " + dir);
    }

    void echo_config(const std::string& subcommand, const nlohmann::json& parameters) const {
        nlohmann::json config;
        config["subcommand"] = subcommand;
        config["parameters"] = parameters;
        write_file_atomic(path / "config.json", config.dump(2) + "\n");
    }

    void write(const std::string& name, const std::string& contents) const {
        write_file_atomic(path / name, contents);
    }

    fs::path path;
};

void emit_experiment(const OutputDir& out, const std::string& subcommand,
                     const ExperimentSpec& spec, int workers) {
    const ExperimentResult result = run(spec, workers);
    out.echo_config(subcommand, spec.to_json());
    out.write("records.csv", result.records_csv());
    out.write("summary.json", result.summary_json().dump(2) + "\n");
    std::cout << result.summary_json()["levels"].dump(2) << "\n";
}

nlohmann::json rotor_config_json(const RotorConfig& rotors) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [v, r] : rotors) j[coord_key(v)] = r;
    return j;
}

RotorConfig rotor_config_from_json(const nlohmann::json& j) {
    RotorConfig config;
    for (const auto& [key, value] : j.items()) {
        config[parse_coord_key(key)] = value.get<std::uint8_t>();
    }
    return config;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{
        "Rotor walks and sandpiles on doubly-infinite Sierpinski gasket prefractals"};
    app.require_subcommand(0, 1);
    argv = app.ensure_utf8(const_cast<char**>(argv));

    int workers = default_worker_count();
    app.add_option("--workers", workers,
                   "worker threads (default: GASKETSIM_WORKERS or hardware)");

    // ---- build-graph ----
    auto* build_cmd = app.add_subcommand(
        "build-graph", "Construct a prefractal and export it as JSON "
                       "{level, half, vertices, edges}");
    int bg_level = 2;
    std::string bg_half = "plus";
    std::string bg_out;
    build_cmd->add_option("--level", bg_level, "prefractal level n >= 0")->required();
    build_cmd->add_option("--half", bg_half, "plus|minus|both");
    build_cmd->add_option("--out", bg_out, "output directory (stdout when omitted)");

    // ---- rotor-run ----
    auto* rotor_cmd = app.add_subcommand(
        "rotor-run", "Run one rotor walk from the origin; writes trace.csv (t,a,b), "
                     "rotors.json and summary.json");
    std::uint64_t rr_steps = 1000;
    int rr_level = 6;
    std::uint64_t rr_seed = 0;
    std::string rr_law;
    std::string rr_out = "rotor-run-out";
    rotor_cmd->add_option("--steps", rr_steps, "number of steps");
    rotor_cmd->add_option("--level", rr_level, "ambient level to materialize");
    rotor_cmd->add_option("--seed", rr_seed, "master seed");
    rotor_cmd->add_option("--law", rr_law, "rotor law JSON [p1,p2,p3,p4] or @file");
    rotor_cmd->add_option("--out", rr_out, "output directory")->required();

    // ---- reflecting-stats ----
    auto* refl_cmd = app.add_subcommand(
        "reflecting-stats", "Frequency of reflecting cut-set boundaries; records.csv "
                            "columns: trial,level,seed,reflecting,error");
    int rf_level_min = 1, rf_level_max = 5;
    std::uint64_t rf_trials = 1000000, rf_seed = 0;
    std::string rf_law, rf_out = "reflecting-out";
    refl_cmd->add_option("--level-min", rf_level_min, "smallest level");
    refl_cmd->add_option("--level-max", rf_level_max, "largest level");
    refl_cmd->add_option("--level", rf_level_min, "single level shorthand")
        ->excludes("--level-min");
    refl_cmd->add_option("--trials", rf_trials, "trials per level");
    refl_cmd->add_option("--seed", rf_seed, "master seed");
    refl_cmd->add_option("--law", rf_law, "rotor law JSON or @file");
    refl_cmd->add_option("--out", rf_out, "output directory")->required();
    bool rf_single = false;
    refl_cmd->callback([&]() { rf_single = refl_cmd->count("--level") > 0; });

    // ---- lemma9-check ----
    auto* lemma_cmd = app.add_subcommand(
        "lemma9-check", "Walks conditioned on a reflecting cut set must return before "
                        "leaving; records.csv columns: trial,level,seed,returned_first,"
                        "steps,error");
    int l9_level_min = 1, l9_level_max = 3;
    std::uint64_t l9_trials = 1000, l9_seed = 0, l9_cap = 100000000;
    std::string l9_out = "lemma9-out";
    lemma_cmd->add_option("--level-min", l9_level_min, "smallest level");
    lemma_cmd->add_option("--level-max", l9_level_max, "largest level");
    lemma_cmd->add_option("--trials", l9_trials, "trials per level");
    lemma_cmd->add_option("--seed", l9_seed, "master seed");
    lemma_cmd->add_option("--cap", l9_cap, "step cap per walk");
    lemma_cmd->add_option("--out", l9_out, "output directory")->required();

    // ---- return-times ----
    auto* ret_cmd = app.add_subcommand(
        "return-times", "Return-time study for random rotor walks; records.csv "
                        "columns: trial,level,seed,returned,steps,frontier,error");
    std::uint64_t rt_trials = 10000, rt_seed = 0, rt_cap = 1000000;
    int rt_max_level = 9;
    std::string rt_law, rt_out = "return-times-out";
    ret_cmd->add_option("--trials", rt_trials, "number of walks");
    ret_cmd->add_option("--cap", rt_cap, "step cap per walk");
    ret_cmd->add_option("--max-level", rt_max_level, "largest level to materialize");
    ret_cmd->add_option("--seed", rt_seed, "master seed");
    ret_cmd->add_option("--law", rt_law, "rotor law JSON or @file");
    ret_cmd->add_option("--out", rt_out, "output directory")->required();

    // ---- sandpile-stabilize ----
    auto* stab_cmd = app.add_subcommand(
        "sandpile-stabilize", "Stabilize one sandpile on a prefractal domain; "
                              "final.csv columns: a,b,initial,final,topples,odometer");
    int st_level = 4;
    std::string st_half = "plus";
    std::string st_law;
    std::int64_t st_constant = -1;
    std::uint64_t st_seed = 0, st_cap = 1000000000000ULL;
    std::string st_policy = "fifo";
    std::string st_out = "stabilize-out";
    stab_cmd->add_option("--level", st_level, "domain level");
    stab_cmd->add_option("--half", st_half, "domain half: plus|both");
    stab_cmd->add_option("--law", st_law, "height law JSON [[value,prob],...] or @file");
    stab_cmd->add_option("--constant", st_constant, "constant initial height");
    stab_cmd->add_option("--seed", st_seed, "sampling seed");
    stab_cmd->add_option("--cap", st_cap, "topple cap");
    stab_cmd->add_option("--policy", st_policy, "fifo|lifo|random");
    stab_cmd->add_option("--out", st_out, "output directory")->required();

    // ---- explosion ----
    auto* exp_cmd = app.add_subcommand(
        "explosion", "Abelian explosion experiment on SG_n^+; records.csv columns: "
                     "trial,level,seed,n_chips,u_o,t_o,sink_mass,final_total,"
                     "indicator,error");
    int ex_level_min = 4, ex_level_max = 6;
    std::uint64_t ex_trials = 400, ex_seed = 0, ex_cap = 1000000000000ULL;
    std::string ex_law = "[[2,0.5],[5,0.5]]";
    std::string ex_out = "explosion-out";
    exp_cmd->add_option("--level-min", ex_level_min, "smallest level");
    exp_cmd->add_option("--level-max", ex_level_max, "largest level");
    exp_cmd->add_option("--trials", ex_trials, "trials per level");
    exp_cmd->add_option("--seed", ex_seed, "master seed");
    exp_cmd->add_option("--cap", ex_cap, "topple cap per trial");
    exp_cmd->add_option("--law", ex_law, "height law JSON or @file (mean >= 3)");
    exp_cmd->add_option("--out", ex_out, "output directory")->required();

    // ---- explosion-div ----
    auto* div_cmd = app.add_subcommand(
        "explosion-div", "Divisible explosion experiment on SG_n^+; records.csv "
                         "columns: trial,level,seed,total_mass,u_o,sink_mass,"
                         "final_total,indicator,converged,sweeps,error");
    int dv_level_min = 4, dv_level_max = 6;
    std::uint64_t dv_trials = 200, dv_seed = 0, dv_sweep_cap = 10000000;
    double dv_epsilon = 1e-9;
    std::string dv_law = "[[0.5,0.5],[1.5,0.5]]";
    std::string dv_out = "explosion-div-out";
    div_cmd->add_option("--level-min", dv_level_min, "smallest level");
    div_cmd->add_option("--level-max", dv_level_max, "largest level");
    div_cmd->add_option("--trials", dv_trials, "trials per level");
    div_cmd->add_option("--seed", dv_seed, "master seed");
    div_cmd->add_option("--epsilon", dv_epsilon, "instability tolerance");
    div_cmd->add_option("--sweep-cap", dv_sweep_cap, "sweep cap per trial");
    div_cmd->add_option("--law", dv_law, "mass law JSON or @file (mean = 1)");
    div_cmd->add_option("--out", dv_out, "output directory")->required();

    // ---- green-ratio ----
    auto* green_cmd = app.add_subcommand(
        "green-ratio", "Truncated Green estimates for SRW vs URW; records.csv "
                       "columns: trial,level,seed,srw_visits,urw_visits,error");
    int gr_level = 2;
    std::uint64_t gr_trials = 100000, gr_seed = 0;
    std::string gr_x = "0,0", gr_y = "0,0", gr_out = "green-out";
    green_cmd->add_option("--level", gr_level, "cut-set level");
    green_cmd->add_option("--trials", gr_trials, "number of walks per estimator");
    green_cmd->add_option("--seed", gr_seed, "master seed");
    green_cmd->add_option("--x", gr_x, "source vertex a,b");
    green_cmd->add_option("--y", gr_y, "target vertex a,b");
    green_cmd->add_option("--out", gr_out, "output directory")->required();

    // ---- clt-check ----
    auto* clt_cmd = app.add_subcommand(
        "clt-check", "Standardized total-chip statistic against the normal law");
    int clt_level = 6;
    std::uint64_t clt_samples = 10000, clt_seed = 0;
    std::string clt_law = "[[2,0.5],[5,0.5]]";
    std::string clt_out = "clt-out";
    clt_cmd->add_option("--level", clt_level, "level of SG_n^+");
    clt_cmd->add_option("--samples", clt_samples, "number of N_n samples");
    clt_cmd->add_option("--seed", clt_seed, "master seed");
    clt_cmd->add_option("--law", clt_law, "height law JSON or @file");
    clt_cmd->add_option("--out", clt_out, "output directory")->required();

    // ---- render ----
    auto* render_cmd = app.add_subcommand(
        "render", "Render a prefractal as SVG with an optional overlay");
    int rd_level = 2;
    std::string rd_half = "both";
    std::string rd_overlay = "none";
    std::string rd_rotors;
    std::string rd_heights;
    std::string rd_odometer;
    std::string rd_out = "gasket.svg";
    double rd_stroke = 1.5;
    render_cmd->add_option("--level", rd_level, "prefractal level");
    render_cmd->add_option("--half", rd_half, "plus|minus|both");
    render_cmd->add_option("--overlay", rd_overlay, "none|rotors|heights|odometer");
    render_cmd->add_option("--rotors", rd_rotors,
                           "rotor source: 'reflecting' for the conditioned corner "
                           "rotors, or @file with a {\"a,b\": index} map");
    render_cmd->add_option("--heights", rd_heights, "@file with a {\"a,b\": chips} map");
    render_cmd->add_option("--odometer", rd_odometer, "@file with a {\"a,b\": mass} map");
    render_cmd->add_option("--stroke-width", rd_stroke, "stroke width");
    render_cmd->add_option("--out", rd_out, "output SVG path")->required();

    // ---- run-spec ----
    auto* spec_cmd = app.add_subcommand(
        "run-spec", "Run an experiment described by a JSON spec file");
    std::string sp_file;
    std::string sp_out = "spec-out";
    spec_cmd->add_option("--spec", sp_file, "path to an ExperimentSpec JSON")->required();
    spec_cmd->add_option("--out", sp_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (app.get_subcommands().empty()) {
        std::cerr << app.help() << std::flush;
        return 2;
    }

    if (build_cmd->parsed()) {
        const PrefractalGraph g =
            PrefractalGraph::build(bg_level, half_from_string(bg_half));
        if (bg_out.empty()) {
            std::cout << g.to_json() << "\n";
        } else {
            const OutputDir out(bg_out);
            out.echo_config("build-graph",
                            {{"level", bg_level}, {"half", bg_half}});
            out.write("graph.json", g.to_json() + "\n");
        }
        return 0;
    }

    if (rotor_cmd->parsed()) {
        const OutputDir out(rr_out);
        const RotorLaw law =
            rr_law.empty() ? RotorLaw::uniform() : parse_rotor_law(rr_law);
        const PrefractalGraph ambient = PrefractalGraph::build(rr_level, Half::Both);
        const RotorSampler sampler(law, rr_seed);
        WalkState walk;
        walk.position = {0, 0};
        RunOptions options;
        options.sampler = &sampler;
        options.record_trace = true;
        // run as one capped segment; a frontier hit reports how far it got
        const RunResult res = run_until_visit(walk, ambient, {0, 0}, rr_steps, options);
        std::ostringstream trace;
        trace << "t,a,b\n";
        for (std::size_t t = 0; t < res.trace.size(); ++t) {
            trace << t << ',' << res.trace[t].a << ',' << res.trace[t].b << '\n';
        }
        nlohmann::json summary;
        summary["steps_taken"] = res.time;
        summary["returned"] = res.status == RunStatus::Returned;
        summary["frontier_hit"] = res.status == RunStatus::FrontierHit;
        summary["final_position"] = {walk.position.a, walk.position.b};
        summary["distinct_vertices_visited"] = walk.visit_counts.size();
        out.echo_config("rotor-run", {{"steps", rr_steps},
                                      {"level", rr_level},
                                      {"seed", rr_seed},
                                      {"law", rr_law.empty() ? "uniform" : rr_law}});
        out.write("trace.csv", trace.str());
        out.write("rotors.json", rotor_config_json(walk.rotors).dump(2) + "\n");
        out.write("summary.json", summary.dump(2) + "\n");
        std::cout << summary.dump(2) << "\n";
        return 0;
    }

    if (refl_cmd->parsed()) {
        ExperimentSpec spec;
        spec.kind = ExperimentKind::ReflectingFrequency;
        spec.level_min = rf_level_min;
        spec.level_max = rf_single ? rf_level_min : rf_level_max;
        spec.trials = rf_trials;
        spec.master_seed = rf_seed;
        if (!rf_law.empty()) spec.rotor_law = parse_rotor_law(rf_law);
        emit_experiment(OutputDir(rf_out), "reflecting-stats", spec, workers);
        return 0;
    }

    if (lemma_cmd->parsed()) {
        ExperimentSpec spec;
        spec.kind = ExperimentKind::LemmaNine;
        spec.level_min = l9_level_min;
        spec.level_max = l9_level_max;
        spec.trials = l9_trials;
        spec.master_seed = l9_seed;
        spec.step_cap = l9_cap;
        emit_experiment(OutputDir(l9_out), "lemma9-check", spec, workers);
        return 0;
    }

    if (ret_cmd->parsed()) {
        ExperimentSpec spec;
        spec.kind = ExperimentKind::ReturnTimes;
        spec.level_min = spec.level_max = std::min(4, rt_max_level);
        spec.trials = rt_trials;
        spec.master_seed = rt_seed;
        spec.step_cap = rt_cap;
        spec.max_walk_level = rt_max_level;
        if (!rt_law.empty()) spec.rotor_law = parse_rotor_law(rt_law);
        emit_experiment(OutputDir(rt_out), "return-times", spec, workers);
        return 0;
    }

    if (stab_cmd->parsed()) {
        if (st_half != "plus" && st_half != "both") {
            throw config_error("--half must be plus or both for a sink domain");
        }
        const OutputDir out(st_out);
        const PrefractalGraph ambient = PrefractalGraph::build(st_level + 1, Half::Both);
        const Domain domain =
            Domain::prefractal(ambient, st_level, half_from_string(st_half));
        Sandpile sigma;
        if (st_constant >= 0) {
            sigma.assign(domain.size(), st_constant);
        } else if (!st_law.empty()) {
            sigma = sample_iid(parse_height_law(st_law), domain.size(), st_seed);
        } else {
            throw config_error("need --law or --constant");
        }
        TopplePolicy policy = TopplePolicy::Fifo;
        if (st_policy == "lifo") policy = TopplePolicy::Lifo;
        else if (st_policy == "random") policy = TopplePolicy::RandomOrder;
        else if (st_policy != "fifo") throw config_error("--policy must be fifo|lifo|random");
        const ToppleResult r = stabilize(domain, sigma, policy, st_cap, st_seed);

        std::ostringstream csv;
        csv << "a,b,initial,final,topples,odometer\n";
        for (std::uint32_t v = 0; v < domain.size(); ++v) {
            const LatticeCoord c = domain.coord(v);
            csv << c.a << ',' << c.b << ',' << sigma[v] << ',' << r.final[v] << ','
                << r.topples[v] << ',' << r.odometer(v) << '\n';
        }
        nlohmann::json summary;
        summary["vertices"] = domain.size();
        summary["initial_total"] =
            std::accumulate(sigma.begin(), sigma.end(), std::int64_t{0});
        summary["final_total"] =
            std::accumulate(r.final.begin(), r.final.end(), std::int64_t{0});
        summary["sink_mass"] = r.sink_mass;
        summary["total_topples"] =
            std::accumulate(r.topples.begin(), r.topples.end(), std::int64_t{0});
        summary["laplacian_ok"] = laplacian_check(domain, sigma, r);
        out.echo_config("sandpile-stabilize",
                        {{"level", st_level},
                         {"half", st_half},
                         {"law", st_law},
                         {"constant", st_constant},
                         {"seed", st_seed},
                         {"cap", st_cap},
                         {"policy", st_policy}});
        out.write("final.csv", csv.str());
        out.write("summary.json", summary.dump(2) + "\n");
        std::cout << summary.dump(2) << "\n";
        return 0;
    }

    if (exp_cmd->parsed()) {
        ExperimentSpec spec;
        spec.kind = ExperimentKind::AbelianExplosion;
        spec.level_min = ex_level_min;
        spec.level_max = ex_level_max;
        spec.trials = ex_trials;
        spec.master_seed = ex_seed;
        spec.topple_cap = ex_cap;
        spec.height_law = parse_height_law(ex_law);
        emit_experiment(OutputDir(ex_out), "explosion", spec, workers);
        return 0;
    }

    if (div_cmd->parsed()) {
        ExperimentSpec spec;
        spec.kind = ExperimentKind::DivisibleExplosion;
        spec.level_min = dv_level_min;
        spec.level_max = dv_level_max;
        spec.trials = dv_trials;
        spec.master_seed = dv_seed;
        spec.epsilon = dv_epsilon;
        spec.sweep_cap = dv_sweep_cap;
        spec.mass_law = parse_mass_law(dv_law);
        emit_experiment(OutputDir(dv_out), "explosion-div", spec, workers);
        return 0;
    }

    if (green_cmd->parsed()) {
        ExperimentSpec spec;
        spec.kind = ExperimentKind::GreenRatio;
        spec.level_min = spec.level_max = gr_level;
        spec.trials = gr_trials;
        spec.master_seed = gr_seed;
        spec.green_source = parse_coord_flag(gr_x);
        spec.green_target = parse_coord_flag(gr_y);
        emit_experiment(OutputDir(gr_out), "green-ratio", spec, workers);
        return 0;
    }

    if (clt_cmd->parsed()) {
        const OutputDir out(clt_out);
        const HeightLaw law = parse_height_law(clt_law);
        const CltResult r = clt_statistic(law, clt_level, clt_samples, clt_seed);
        nlohmann::json summary;
        summary["level"] = clt_level;
        summary["vertex_count"] = r.vertex_count;
        summary["samples"] = clt_samples;
        summary["mean"] = r.mean;
        summary["variance"] = r.variance;
        summary["ks_distance"] = r.ks_distance;
        summary["small_sample_warning"] = r.small_sample;
        std::ostringstream csv;
        csv << "sample,standardized\n";
        for (std::size_t i = 0; i < r.standardized.size(); ++i) {
            csv << i << ',' << format_double(r.standardized[i]) << '\n';
        }
        out.echo_config("clt-check", {{"level", clt_level},
                                      {"samples", clt_samples},
                                      {"seed", clt_seed},
                                      {"law", clt_law}});
        out.write("standardized.csv", csv.str());
        out.write("summary.json", summary.dump(2) + "\n");
        std::cout << summary.dump(2) << "\n";
        return 0;
    }

    if (render_cmd->parsed()) {
        const Half half = half_from_string(rd_half);
        const PrefractalGraph g = PrefractalGraph::build(rd_level, half);
        Overlay overlay;
        std::optional<PrefractalGraph> rotor_view;
        if (rd_overlay == "none") {
            overlay.kind = OverlayKind::None;
        } else if (rd_overlay == "rotors") {
            overlay.kind = OverlayKind::Rotors;
            if (rd_rotors == "reflecting") {
                if (half != Half::Both) {
                    throw config_error("the reflecting preset needs --half both");
                }
                rotor_view = PrefractalGraph::build(rd_level + 1, Half::Both);
                overlay.rotors = reflecting_corner_rotors(*rotor_view, rd_level);
            } else if (!rd_rotors.empty() && rd_rotors[0] == '@') {
                overlay.rotors = rotor_config_from_json(
                    nlohmann::json::parse(read_file(rd_rotors.substr(1))));
                rotor_view = PrefractalGraph::build(rd_level + 1, half == Half::Both
                                                                      ? Half::Both
                                                                      : half);
            } else {
                throw config_error("--rotors must be 'reflecting' or @file");
            }
        } else if (rd_overlay == "heights") {
            overlay.kind = OverlayKind::Heights;
            if (rd_heights.empty() || rd_heights[0] != '@') {
                throw config_error("--heights must be @file");
            }
            for (const auto& [key, value] :
                 nlohmann::json::parse(read_file(rd_heights.substr(1))).items()) {
                overlay.heights[parse_coord_key(key)] = value.get<std::int64_t>();
            }
        } else if (rd_overlay == "odometer") {
            overlay.kind = OverlayKind::Odometer;
            if (rd_odometer.empty() || rd_odometer[0] != '@') {
                throw config_error("--odometer must be @file");
            }
            for (const auto& [key, value] :
                 nlohmann::json::parse(read_file(rd_odometer.substr(1))).items()) {
                overlay.odometer[parse_coord_key(key)] = value.get<double>();
            }
        } else {
            throw config_error("--overlay must be none|rotors|heights|odometer");
        }
        RenderOptions options;
        options.stroke_width = rd_stroke;
        const std::string svg = render_svg(
            g, overlay, options, rotor_view ? &*rotor_view : nullptr);
        const fs::path out_path(rd_out);
        if (out_path.has_parent_path()) {
            fs::create_directories(out_path.parent_path());
        }
        write_file_atomic(out_path, svg);
        std::cout << "wrote " << rd_out << "\n";
        return 0;
    }

    if (spec_cmd->parsed()) {
        const ExperimentSpec spec =
            ExperimentSpec::from_json(nlohmann::json::parse(read_file(sp_file)));
        emit_experiment(OutputDir(sp_out), "run-spec", spec, workers);
        return 0;
    }

    std::cerr << app.help() << std::flush;
    return 2;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    try {
        return run_cli(argc, argv);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace gasket
