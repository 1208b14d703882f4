#include "wfc/config_io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace wfc {

namespace {

using nlohmann::json;

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trimmed(field));
    return fields;
}

WakeParams kappa_from_json(const json& j) {
    WakeParams k;
    k.k_a = j.value("k_a", k.k_a);
    k.k_b = j.value("k_b", k.k_b);
    k.alpha = j.value("alpha", k.alpha);
    k.beta = j.value("beta", k.beta);
    return k;
}

}  // namespace

TurbineSpec load_turbine_spec(const std::string& path, FarmLayout* layout) {
    std::ifstream in = open_or_throw(path);
    TurbineSpec spec;
    std::map<std::string, double*> scalars{
        {"rotor_diameter", &spec.rotor_diameter},
        {"hub_height", &spec.hub_height},
        {"cut_in", &spec.cut_in},
        {"cut_out", &spec.cut_out},
        {"yaw_rate_limit", &spec.yaw_rate_limit},
        {"wohler_blade", &spec.wohler_blade},
        {"wohler_tower", &spec.wohler_tower},
        {"power_scaling", &spec.power_scaling},
    };
    std::vector<double> ct_x, ct_y, cp_x, cp_y;
    std::map<std::size_t, Vec2> layout_rows;
    std::string section;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trimmed(line.substr(0, line.find('#')));
        if (text.empty()) continue;
        if (text.front() == '[' && text.back() == ']') {
            section = trimmed(text.substr(1, text.size() - 2));
            if (section != "ct_curve" && section != "cp_curve" && section != "layout") {
                throw std::invalid_argument(path + ": unknown section [" + section + "]");
            }
            continue;
        }
        if (section.empty()) {
            const auto eq = text.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                            ": expected key = value");
            }
            const std::string key = trimmed(text.substr(0, eq));
            const auto it = scalars.find(key);
            if (it == scalars.end()) {
                throw std::invalid_argument(path + ": unknown key '" + key + "'");
            }
            *it->second = std::stod(trimmed(text.substr(eq + 1)));
        } else if (section == "layout") {
            std::istringstream row(text);
            std::size_t id = 0;
            double x = 0.0, y = 0.0;
            if (!(row >> id >> x >> y)) {
                throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                            ": expected 'id x y' row");
            }
            if (!layout_rows.emplace(id, Vec2{x, y}).second) {
                throw std::invalid_argument(path + ": duplicate turbine id in [layout]");
            }
        } else {
            std::istringstream pair(text);
            double x = 0.0, y = 0.0;
            if (!(pair >> x >> y)) {
                throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                            ": expected 'speed value' pair");
            }
            if (section == "ct_curve") {
                ct_x.push_back(x);
                ct_y.push_back(y);
            } else {
                cp_x.push_back(x);
                cp_y.push_back(y);
            }
        }
    }
    spec.ct_curve = LinearTable(std::move(ct_x), std::move(ct_y));
    spec.cp_curve = LinearTable(std::move(cp_x), std::move(cp_y));
    spec.validate();
    if (layout != nullptr && !layout_rows.empty()) {
        layout->positions.clear();
        for (const auto& [id, p] : layout_rows) {
            if (id != layout->positions.size()) {
                throw std::invalid_argument(path + ": [layout] ids must cover 0..n-1");
            }
            layout->positions.push_back(p);
        }
    }
    return spec;
}

FarmLayout load_layout_csv(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"id", "x", "y"}) {
        throw std::invalid_argument(path + ": expected header id,x,y");
    }
    std::map<std::size_t, Vec2> rows;
    while (std::getline(in, line)) {
        if (trimmed(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw std::invalid_argument(path + ": malformed row '" + line + "'");
        const auto id = static_cast<std::size_t>(std::stoul(fields[0]));
        if (!rows.emplace(id, Vec2{std::stod(fields[1]), std::stod(fields[2])}).second) {
            throw std::invalid_argument(path + ": duplicate turbine id " + fields[0]);
        }
    }
    FarmLayout layout;
    layout.positions.reserve(rows.size());
    for (const auto& [id, p] : rows) {
        if (id != layout.positions.size()) {
            throw std::invalid_argument(path + ": turbine ids must cover 0..n-1");
        }
        layout.positions.push_back(p);
    }
    if (layout.positions.empty()) throw std::invalid_argument(path + ": no turbines");
    return layout;
}

MeasurementWindow load_measurements_csv(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    const std::vector<std::string> header{"turbine", "power_mean_w", "yaw_mean_deg",
                                          "completeness"};
    if (!std::getline(in, line) || split_csv_line(line) != header) {
        throw std::invalid_argument(path +
                                    ": expected header turbine,power_mean_w,yaw_mean_deg,completeness");
    }
    std::map<std::size_t, TurbineWindow> rows;
    while (std::getline(in, line)) {
        if (trimmed(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) throw std::invalid_argument(path + ": malformed row '" + line + "'");
        TurbineWindow t;
        t.power_mean = std::stod(fields[1]);
        t.yaw_mean = std::stod(fields[2]);
        t.completeness = std::stod(fields[3]);
        const auto id = static_cast<std::size_t>(std::stoul(fields[0]));
        if (!rows.emplace(id, t).second) {
            throw std::invalid_argument(path + ": duplicate turbine id " + fields[0]);
        }
    }
    MeasurementWindow window;
    window.t_end = 1.0;  // synthetic window; only the statistics matter
    for (const auto& [id, t] : rows) {
        if (id != window.turbines.size()) {
            throw std::invalid_argument(path + ": turbine ids must cover 0..n-1");
        }
        window.turbines.push_back(t);
    }
    window.validate();
    return window;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    json j;
    in >> j;
    const auto base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& ref) { return (base / ref).string(); };

    Scenario sc;
    sc.name = j.value("name", std::filesystem::path(path).stem().string());
    sc.turbine = load_turbine_spec(resolve(j.at("turbine").get<std::string>()));
    sc.layout = load_layout_csv(resolve(j.at("layout").get<std::string>()));
    const json& amb = j.at("ambient");
    sc.ambient.speed = amb.at("speed").get<double>();
    sc.ambient.direction = amb.at("direction").get<double>();
    sc.ambient.ti = amb.at("ti").get<double>();
    sc.ambient.rho = amb.value("rho", sc.ambient.rho);
    sc.duration_s = j.value("duration_s", sc.duration_s);
    if (j.contains("controller_kappa")) sc.controller_kappa = kappa_from_json(j["controller_kappa"]);

    if (j.contains("plant")) {
        const json& p = j["plant"];
        if (p.contains("kappa")) sc.plant.kappa_true = kappa_from_json(p["kappa"]);
        sc.plant.dt = p.value("dt", sc.plant.dt);
        sc.plant.spin_up_s = p.value("spin_up_s", sc.plant.spin_up_s);
        sc.plant.noise_std = p.value("noise_std", sc.plant.noise_std);
        sc.plant.noise_tau_s = p.value("noise_tau_s", sc.plant.noise_tau_s);
        sc.plant.yaw_deadband_deg = p.value("yaw_deadband_deg", sc.plant.yaw_deadband_deg);
        sc.plant.deficit_exponent = p.value("deficit_exponent", sc.plant.deficit_exponent);
        sc.plant.apply_eta = p.value("apply_eta", sc.plant.apply_eta);
        for (const auto& o : p.value("outages", json::array())) {
            sc.plant.outages.push_back({o.at("turbine").get<std::size_t>(),
                                        o.at("t_start").get<double>(),
                                        o.at("t_end").get<double>()});
        }
    }
    sc.validate();
    return sc;
}

LutAxes load_lut_axes(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    json j;
    in >> j;
    LutAxes axes;
    for (std::size_t i = 0; i < kLutAxisCount; ++i) {
        axes.values[i] = j.at(kLutAxisNames[i]).get<std::vector<double>>();
    }
    axes.validate();
    return axes;
}

}  // namespace wfc
