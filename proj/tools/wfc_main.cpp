// Command-line front end: fatigue-table management, one-shot optimization
// and calibration, scenario runs, and run-to-run statistics.
#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wfc/config_io.hpp"
#include "wfc/estimation.hpp"
#include "wfc/flow.hpp"
#include "wfc/optimizer.hpp"
#include "wfc/runner.hpp"
#include "wfc/surrogate.hpp"

namespace {

using nlohmann::json;

json kappa_json(const wfc::WakeParams& k) {
    return {{"k_a", k.k_a}, {"k_b", k.k_b}, {"alpha", k.alpha}, {"beta", k.beta}};
}

void add_lut_commands(CLI::App& app) {
    CLI::App* lut = app.add_subcommand("lut", "Fatigue lookup table tools");
    lut->require_subcommand(1);

    auto* build = lut->add_subcommand("build", "Populate a table from the load surrogate");
    auto grid = std::make_shared<std::string>();
    auto turbine = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto workers = std::make_shared<int>(4);
    auto duration = std::make_shared<double>(600.0);
    auto rate = std::make_shared<double>(10.0);
    auto base_seed = std::make_shared<std::uint64_t>(1);
    build->add_option("--grid", *grid, "Axes JSON; defaults to the full grid");
    build->add_option("--turbine", *turbine, "Turbine config file")->required();
    build->add_option("--out", *out, "Output table path")->required();
    build->add_option("--workers", *workers, "Worker threads");
    build->add_option("--duration", *duration, "Series length per seed [s]");
    build->add_option("--rate", *rate, "Sample rate [Hz]");
    build->add_option("--base-seed", *base_seed, "Turbulence seed base");
    build->callback([=]() {
        const wfc::TurbineSpec spec = wfc::load_turbine_spec(*turbine);
        const wfc::LutAxes axes =
            grid->empty() ? wfc::LutAxes::full_default() : wfc::load_lut_axes(*grid);
        wfc::LutBuildMeta meta;
        meta.duration_s = *duration;
        meta.sample_rate_hz = *rate;
        meta.base_seed = *base_seed;
        const auto plan = wfc::LutBuildPlan::make(axes, meta);
        std::cerr << "nodes " << plan.nodes_total << " (distinct " << plan.nodes_distinct
                  << "), series " << plan.series_total << "\n";
        std::size_t last_percent = 0;
        const wfc::FatigueLut table = wfc::build_lut(
            axes, spec, meta, *workers, [&](std::size_t done, std::size_t total) {
                const std::size_t percent = 100 * done / total;
                if (percent >= last_percent + 10) {
                    std::cerr << "  " << percent << "%\n";
                    last_percent = percent;
                }
            });
        table.save(*out);
        std::cout << json{{"path", *out},
                          {"nodes", table.node_count()},
                          {"hash", table.provenance_hash()}}
                         .dump(2)
                  << "\n";
    });

    auto* query = lut->add_subcommand("query", "Interpolate the table at one point");
    auto qpath = std::make_shared<std::string>();
    auto at = std::make_shared<std::vector<double>>();
    query->add_option("--lut", *qpath, "Table path")->required();
    query->add_option("--at", *at,
                      "wind_speed,ti,yaw,pitch,w_d,sigma_d,delta_c")
        ->required()
        ->delimiter(',')
        ->expected(wfc::kLutAxisCount);
    query->callback([=]() {
        const wfc::FatigueLut table = wfc::FatigueLut::load(*qpath);
        std::array<double, wfc::kLutAxisCount> point{};
        std::copy(at->begin(), at->end(), point.begin());
        const wfc::LutQueryResult res = table.interpolate(point);
        json j{{"clamped", res.clamped}};
        for (std::size_t c = 0; c < wfc::kLutChannelCount; ++c) {
            j["del"][wfc::kLutChannelNames[c]] = res.del[c];
            j["mean"][wfc::kLutChannelNames[c]] = res.mean[c];
        }
        std::cout << j.dump(2) << "\n";
    });

    auto* dump = lut->add_subcommand("dump-csv", "Write all nodes as CSV");
    auto dpath = std::make_shared<std::string>();
    auto dout = std::make_shared<std::string>();
    dump->add_option("--lut", *dpath, "Table path")->required();
    dump->add_option("--out", *dout, "CSV path (default stdout)");
    dump->callback([=]() {
        const wfc::FatigueLut table = wfc::FatigueLut::load(*dpath);
        if (dout->empty()) {
            table.dump_csv(std::cout);
        } else {
            std::ofstream file(*dout);
            if (!file) throw std::runtime_error("cannot open " + *dout);
            table.dump_csv(file);
        }
    });
}

void add_optimize_command(CLI::App& app) {
    auto* cmd = app.add_subcommand("optimize", "One-shot yaw set-point optimization");
    auto layout_path = std::make_shared<std::string>();
    auto turbine_path = std::make_shared<std::string>();
    auto ambient = std::make_shared<std::vector<double>>();
    auto weights = std::make_shared<std::vector<double>>(std::vector<double>{1.0, 0.0});
    auto lut_path = std::make_shared<std::string>();
    auto off = std::make_shared<std::vector<std::size_t>>();
    auto kappa = std::make_shared<std::vector<double>>();
    auto seed = std::make_shared<std::uint64_t>(1);
    auto flow_out = std::make_shared<std::string>();
    cmd->add_option("--layout", *layout_path, "Layout CSV (default: [layout] in turbine file)");
    cmd->add_option("--turbine", *turbine_path, "Turbine config file")->required();
    cmd->add_option("--ambient", *ambient, "speed,direction,ti")
        ->required()
        ->delimiter(',')
        ->expected(3);
    cmd->add_option("--weights", *weights, "wP,wL")->delimiter(',')->expected(2);
    cmd->add_option("--lut", *lut_path, "Fatigue table (required when wL > 0)");
    cmd->add_option("--off", *off, "Unavailable turbine ids")->delimiter(',');
    cmd->add_option("--kappa", *kappa, "k_a,k_b,alpha,beta")->delimiter(',')->expected(4);
    cmd->add_option("--seed", *seed, "Multi-start seed");
    cmd->add_option("--flow-out", *flow_out, "Hub-height flow raster CSV at the optimum");
    cmd->callback([=]() {
        wfc::FarmLayout layout;
        const wfc::TurbineSpec spec = wfc::load_turbine_spec(*turbine_path, &layout);
        if (!layout_path->empty()) layout = wfc::load_layout_csv(*layout_path);
        if (layout.size() == 0) {
            throw std::runtime_error("no layout: pass --layout or add a [layout] section");
        }
        wfc::AmbientState amb;
        amb.speed = (*ambient)[0];
        amb.direction = (*ambient)[1];
        amb.ti = (*ambient)[2];
        std::vector<int> availability(layout.size(), 1);
        for (std::size_t id : *off) {
            if (id >= layout.size()) throw std::runtime_error("--off id out of range");
            availability[id] = 0;
        }
        wfc::WakeParams params;
        if (!kappa->empty()) {
            params = wfc::WakeParams::from_array(
                {(*kappa)[0], (*kappa)[1], (*kappa)[2], (*kappa)[3]});
        }
        wfc::YawOptimizerConfig config;
        config.weights.power = (*weights)[0];
        config.weights.load = (*weights)[1];
        wfc::FatigueLut table;
        if (!lut_path->empty()) table = wfc::FatigueLut::load(*lut_path);
        const wfc::FatigueLut* lut = table.empty() ? nullptr : &table;
        const wfc::OptimizeResult res =
            wfc::optimize_yaw(layout, amb, params, spec, availability, lut, config, *seed);
        json j{{"yaw_deg", res.yaw},
               {"power_gain", res.gains.power_gain},
               {"del_gain", res.gains.load_gain},
               {"objective", res.gains.objective},
               {"evaluations", res.evaluations},
               {"winning_start", res.winning_start}};
        std::cout << j.dump(2) << "\n";
        if (!flow_out->empty()) {
            wfc::ControlState control = wfc::ControlState::zeros(layout.size());
            control.yaw = res.yaw;
            control.available = availability;
            const wfc::FarmSolution sol = wfc::solve_farm(layout, amb, control, params, spec);
            wfc::Vec2 lo{1e30, 1e30}, hi{-1e30, -1e30};
            for (const auto& p : layout.positions) {
                lo.x = std::min(lo.x, p.x);
                lo.y = std::min(lo.y, p.y);
                hi.x = std::max(hi.x, p.x);
                hi.y = std::max(hi.y, p.y);
            }
            const double pad = 4.0 * spec.rotor_diameter;
            std::ofstream file(*flow_out);
            if (!file) throw std::runtime_error("cannot open " + *flow_out);
            wfc::export_flow_csv(sol.field, spec.hub_height, {lo.x - pad, lo.y - pad},
                                 {hi.x + pad, hi.y + pad}, 201, 201, file);
        }
    });
}

void add_calibrate_command(CLI::App& app) {
    auto* cmd = app.add_subcommand("calibrate", "Fit wake parameters to window measurements");
    auto measurements = std::make_shared<std::string>();
    auto state = std::make_shared<std::string>();
    auto lambda = std::make_shared<double>(2.0);
    cmd->add_option("--measurements", *measurements, "Window statistics CSV")->required();
    cmd->add_option("--state", *state, "State JSON: turbine, layout, ambient, kappa")->required();
    cmd->add_option("--lambda", *lambda, "Ridge weight");
    cmd->callback([=]() {
        std::ifstream in(*state);
        if (!in) throw std::runtime_error("cannot open " + *state);
        json j;
        in >> j;
        const auto base = std::filesystem::path(*state).parent_path();
        wfc::FarmLayout layout;
        const wfc::TurbineSpec spec =
            wfc::load_turbine_spec((base / j.at("turbine").get<std::string>()).string(), &layout);
        if (j.contains("layout")) {
            layout = wfc::load_layout_csv((base / j.at("layout").get<std::string>()).string());
        }
        wfc::AmbientState amb;
        amb.speed = j.at("ambient").at("speed").get<double>();
        amb.direction = j.at("ambient").at("direction").get<double>();
        amb.ti = j.at("ambient").at("ti").get<double>();
        amb.rho = j.at("ambient").value("rho", amb.rho);
        wfc::WakeParams prev;
        if (j.contains("kappa")) {
            prev.k_a = j["kappa"].value("k_a", prev.k_a);
            prev.k_b = j["kappa"].value("k_b", prev.k_b);
            prev.alpha = j["kappa"].value("alpha", prev.alpha);
            prev.beta = j["kappa"].value("beta", prev.beta);
        }
        const wfc::MeasurementWindow window = wfc::load_measurements_csv(*measurements);
        if (window.turbines.size() != layout.size()) {
            throw std::runtime_error("measurement rows do not match layout size");
        }
        std::vector<int> availability =
            j.value("availability", std::vector<int>(layout.size(), 1));
        wfc::CalibrationOptions options;
        options.lambda = *lambda;
        const wfc::CalibrationResult res =
            wfc::calibrate(layout, amb, window, availability, prev, spec, options);
        std::cout << json{{"kappa", kappa_json(res.kappa)},
                          {"degenerate", res.degenerate},
                          {"objective_before", res.objective_before},
                          {"objective_after", res.objective_after},
                          {"rms_before_w", res.rms_before},
                          {"rms_after_w", res.rms_after}}
                         .dump(2)
                  << "\n";
    });
}

void add_run_command(CLI::App& app) {
    auto* cmd = app.add_subcommand("run", "Run one scenario under a control mode");
    auto scenario_path = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("cl");
    auto weights = std::make_shared<std::vector<double>>(std::vector<double>{1.0, 0.0});
    auto lut_path = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(1);
    auto out = std::make_shared<std::string>();
    auto t_s = std::make_shared<double>(600.0);
    auto lambda = std::make_shared<double>(2.0);
    cmd->add_option("--scenario", *scenario_path, "Scenario JSON")->required();
    cmd->add_option("--mode", *mode, "greedy | ol | cl");
    cmd->add_option("--weights", *weights, "wP,wL")->delimiter(',')->expected(2);
    cmd->add_option("--lut", *lut_path, "Fatigue table for load objective and tallies");
    cmd->add_option("--seed", *seed, "Plant/optimizer seed");
    cmd->add_option("--out", *out, "Report directory")->required();
    cmd->add_option("--t-s", *t_s, "Sampling period [s]");
    cmd->add_option("--lambda", *lambda, "Calibration ridge weight");
    cmd->callback([=]() {
        const wfc::Scenario scenario = wfc::load_scenario(*scenario_path);
        wfc::LoopConfig config;
        config.t_s = *t_s;
        config.mode = wfc::control_mode_from_string(*mode);
        config.lambda = *lambda;
        config.optimizer.weights.power = (*weights)[0];
        config.optimizer.weights.load = (*weights)[1];
        wfc::FatigueLut table;
        if (!lut_path->empty()) table = wfc::FatigueLut::load(*lut_path);
        const wfc::FatigueLut* lut = table.empty() ? nullptr : &table;
        const wfc::RunReport report = wfc::run_scenario(scenario, config, lut, *seed);
        wfc::write_report(report, *out);
        std::cout << json{{"out", *out},
                          {"hash", wfc::report_hash(report)},
                          {"energy_j", report.energy_j},
                          {"farm_del", report.farm_del},
                          {"final_kappa", kappa_json(report.final_kappa)}}
                         .dump(2)
                  << "\n";
    });
}

void add_stats_command(CLI::App& app) {
    auto* cmd = app.add_subcommand("stats", "Compare two run reports");
    auto a = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    auto block = std::make_shared<std::size_t>(1);
    auto resamples = std::make_shared<std::size_t>(1000);
    auto level = std::make_shared<double>(0.95);
    cmd->add_option("--a", *a, "Run directory A")->required();
    cmd->add_option("--b", *b, "Baseline run directory B")->required();
    cmd->add_option("--block", *block, "Bootstrap block length [windows]");
    cmd->add_option("--resamples", *resamples, "Bootstrap resamples");
    cmd->add_option("--level", *level, "CI level");
    cmd->callback([=]() {
        const wfc::RunReport ra = wfc::load_report(*a);
        const wfc::RunReport rb = wfc::load_report(*b);
        const wfc::GainSummary g = wfc::report_gains(ra, rb, *block, *resamples, *level);
        std::cout << json{{"energy_gain", g.energy_gain},
                          {"energy_gain_ci", {g.energy_gain_ci.low, g.energy_gain_ci.high}},
                          {"del_gain", g.del_gain},
                          {"welch_t", g.welch_t},
                          {"welch_dof", g.welch_dof},
                          {"welch_p", g.welch_p},
                          {"windows", g.windows}}
                         .dump(2)
                  << "\n";
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale closed-loop wind-farm yaw control toolkit"};
    app.require_subcommand(1);
    add_lut_commands(app);
    add_optimize_command(app);
    add_calibrate_command(app);
    add_run_command(app);
    add_stats_command(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
