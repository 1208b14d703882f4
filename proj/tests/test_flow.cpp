#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "support.hpp"
#include "wfc/farm.hpp"
#include "wfc/flow.hpp"

using namespace wfc;

TEST_SUITE("flow") {

TEST_CASE("quadrature geometry: two rings, exact low-order moments") {
    const auto& pts = rotor_quadrature_points();
    CHECK(pts[0][0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(pts[0][1] == doctest::Approx(0.5).epsilon(1e-15));

    double sy = 0.0, sz = 0.0, syy = 0.0, szz = 0.0, syz = 0.0, sr2 = 0.0;
    for (int k = 0; k < 16; ++k) {
        const double r = std::hypot(pts[k][0], pts[k][1]);
        CHECK(r == doctest::Approx(k < 8 ? std::sqrt(0.25) : std::sqrt(0.75)).epsilon(1e-12));
        sy += pts[k][0];
        sz += pts[k][1];
        syy += pts[k][0] * pts[k][0];
        szz += pts[k][1] * pts[k][1];
        syz += pts[k][0] * pts[k][1];
        sr2 += r * r;
    }
    // Disc averages: <y> = <z> = <yz> = 0, <y^2> = <z^2> = R^2/4, <r^2> = R^2/2.
    CHECK(std::abs(sy / 16.0) < 1e-15);
    CHECK(std::abs(sz / 16.0) < 1e-15);
    CHECK(std::abs(syz / 16.0) < 1e-15);
    CHECK(syy / 16.0 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(szz / 16.0 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sr2 / 16.0 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("disc average of a uniform field is exact") {
    FlowField field;
    field.ambient_velocity = {7.3, -1.1};
    const double want = std::hypot(7.3, -1.1);
    CHECK(rotor_average_speed(field, {500.0, -200.0}, 119.0, 33.0, 178.3)
          == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("single unyawed wake reduces only the streamwise component") {
    WakeEntry w;
    w.center = {0.0, 0.0};
    w.z_h = 119.0;
    w.diameter = 178.3;
    w.ct = 0.8;
    w.k_w = 0.042;
    w.x0 = 445.75;

    FlowField field;
    field.ambient_velocity = {8.0, 0.0};
    field.wakes.push_back(w);

    for (double x : {300.0, 891.5, 2000.0}) {
        for (double y : {-120.0, 0.0, 75.0}) {
            const Vec2 v = field.evaluate({x, y}, 119.0);
            const double want =
                8.0 * (1.0 - deficit(x, y, 119.0, w.x0, w.k_w, w.ct, 0.0, w.diameter, w.z_h).value);
            CHECK(v.x == doctest::Approx(want).epsilon(1e-12));
            CHECK(v.y == doctest::Approx(0.0).epsilon(1e-15));
        }
    }
    // Upstream of the rotor the wake contributes nothing.
    const Vec2 up = field.evaluate({-10.0, 0.0}, 119.0);
    CHECK(up.x == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("clamped near-field points are counted and zero the axial component") {
    WakeEntry w;
    w.center = {0.0, 0.0};
    w.z_h = 119.0;
    w.diameter = 178.3;
    w.ct = 0.985;
    w.k_w = 0.001;
    w.x0 = 445.75;

    FlowField field;
    field.ambient_velocity = {8.0, 0.0};
    field.wakes.push_back(w);

    int clamps = 0;
    const Vec2 v = field.evaluate({100.0, 0.0}, 119.0, &clamps);
    CHECK(clamps == 1);
    CHECK(v.x == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("orientation adds yaw to the local flow angle") {
    CHECK(turbine_orientation(8.0, 0.8, 0.0) == doctest::Approx(5.710593137499643).epsilon(1e-12));
    CHECK(turbine_orientation(1.0, 0.0, 15.0) == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(turbine_orientation(0.0, -2.0, 0.0) == doctest::Approx(-90.0).epsilon(1e-12));
}

TEST_CASE("power law, losses and cut range") {
    const TurbineSpec spec = test::reference_turbine();
    // 1/2 rho A = 15293.210303996815 at rho = 1.225; C_P(8) = 0.476.
    CHECK(turbine_power(8.0, 0.0, spec, 1.225, false)
          == doctest::Approx(15293.210303996815 * 0.476 * 512.0).epsilon(1e-12));
    CHECK(turbine_power(8.0, 0.0, spec, 1.225, true)
          == doctest::Approx(4025309.9791762857).epsilon(1e-12));
    // cos^3 with the cos^-1 recovery leaves cos^2: 1.08 cos^2(30) = 0.81.
    CHECK(turbine_power(9.0, 30.0, spec, 1.225, true) / turbine_power(9.0, 0.0, spec, 1.225, false)
          == doctest::Approx(0.81000000000000016).epsilon(1e-12));
    CHECK(turbine_power(3.999, 0.0, spec, 1.225, true) == 0.0);
    CHECK(turbine_power(25.001, 0.0, spec, 1.225, true) == 0.0);
    CHECK(turbine_power(4.0, 0.0, spec, 1.225, true) > 0.0);
}

TEST_CASE("two-turbine chain matches the reference solver, aligned") {
    const TurbineSpec spec = test::reference_turbine();
    const FarmLayout layout = test::column_layout(2, 5.0);
    const AmbientState amb = test::west_wind(8.0, 0.06);
    const auto sol = solve_farm(layout, amb, ControlState::zeros(2), WakeParams{}, spec);

    CHECK(sol.order == std::vector<std::size_t>{0, 1});
    CHECK(sol.turbines[0].s_rotor == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(sol.turbines[0].power == doctest::Approx(4025309.9791762857).epsilon(1e-9));
    CHECK(sol.turbines[1].s_rotor == doctest::Approx(6.268682184522457).epsilon(1e-9));
    CHECK(sol.turbines[1].ct == doctest::Approx(0.89164061951196705).epsilon(1e-9));
    CHECK(sol.turbines[1].i_rotor == doctest::Approx(0.15206734296898605).epsilon(1e-9));
    CHECK(sol.turbines[1].power == doctest::Approx(1857617.3502829433).epsilon(1e-9));
    CHECK(sol.farm_power == doctest::Approx(5882927.3294592295).epsilon(1e-9));
}

TEST_CASE("two-turbine chain matches the reference solver, steered") {
    const TurbineSpec spec = test::reference_turbine();
    const FarmLayout layout = test::column_layout(2, 5.0);
    const AmbientState amb = test::west_wind(8.0, 0.06);
    ControlState ctrl = ControlState::zeros(2);
    ctrl.yaw[0] = 20.0;
    const auto sol = solve_farm(layout, amb, ctrl, WakeParams{}, spec);

    CHECK(sol.turbines[0].power == doctest::Approx(3554438.1602778248).epsilon(1e-9));
    CHECK(sol.turbines[1].s_rotor == doctest::Approx(6.6335336599756713).epsilon(1e-9));
    CHECK(sol.turbines[1].theta_flow == doctest::Approx(-6.1724144014190614).epsilon(1e-9));
    CHECK(sol.turbines[1].power == doctest::Approx(2231117.7573220511).epsilon(1e-9));
    CHECK(sol.farm_power == doctest::Approx(5785555.9175998755).epsilon(1e-9));
}

TEST_CASE("two-turbine chain matches the reference solver, mixed yaw at 11 m/s") {
    const TurbineSpec spec = test::reference_turbine();
    const FarmLayout layout = test::column_layout(2, 5.0);
    const AmbientState amb = test::west_wind(11.0, 0.10);
    ControlState ctrl = ControlState::zeros(2);
    ctrl.yaw[0] = 25.0;
    ctrl.yaw[1] = -15.0;
    const auto sol = solve_farm(layout, amb, ctrl, WakeParams{}, spec);

    CHECK(sol.turbines[1].s_rotor == doctest::Approx(9.6609311432042801).epsilon(1e-9));
    CHECK(sol.turbines[1].theta_flow == doctest::Approx(-4.7996359370811552).epsilon(1e-9));
    CHECK(sol.turbines[1].i_rotor == doctest::Approx(0.17373440596741216).epsilon(1e-9));
    CHECK(sol.farm_power == doctest::Approx(15209404.265317051).epsilon(1e-9));
}

TEST_CASE("solve is invariant under rigid farm rotation") {
    const TurbineSpec spec = test::reference_turbine();
    const FarmLayout layout = test::grid_layout(2, 2, 5.0);
    AmbientState amb = test::west_wind(8.5, 0.08);
    ControlState ctrl = ControlState::zeros(4);
    ctrl.yaw = {22.0, -10.0, 5.0, 0.0};

    const auto base = solve_farm(layout, amb, ctrl, WakeParams{}, spec);
    for (double dphi : {35.0, 90.0, 217.0}) {
        AmbientState turned_amb = amb;
        turned_amb.direction = amb.direction - dphi;
        const auto turned = solve_farm(rotate_layout(layout, dphi), turned_amb, ctrl,
                                       WakeParams{}, spec);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(turned.turbines[k].s_rotor
                  == doctest::Approx(base.turbines[k].s_rotor).epsilon(1e-6));
            CHECK(turned.turbines[k].power == doctest::Approx(base.turbines[k].power).epsilon(1e-6));
        }
        CHECK(turned.farm_power == doctest::Approx(base.farm_power).epsilon(1e-6));
    }
}

TEST_CASE("unavailable upstream turbine casts no wake and makes no power") {
    const TurbineSpec spec = test::reference_turbine();
    const FarmLayout layout = test::column_layout(2, 5.0);
    const AmbientState amb = test::west_wind(8.0, 0.06);
    ControlState ctrl = ControlState::zeros(2);
    ctrl.available[0] = 0;
    const auto sol = solve_farm(layout, amb, ctrl, WakeParams{}, spec);

    CHECK(sol.turbines[0].power == 0.0);
    CHECK_FALSE(sol.turbines[0].operating);
    CHECK(sol.field.wakes.empty() == false);  // only the downstream wake
    CHECK(sol.field.wakes.size() == 1);
    CHECK(sol.turbines[1].s_rotor == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(sol.farm_power == doctest::Approx(4025309.9791762857).epsilon(1e-9));
}

TEST_CASE("frozen operating points pin thrust and turbulence") {
    const TurbineSpec spec = test::reference_turbine();
    const FarmLayout layout = test::column_layout(3, 5.0);
    const AmbientState amb = test::west_wind(8.0, 0.06);

    const auto base = solve_farm(layout, amb, ControlState::zeros(3), WakeParams{}, spec);
    std::vector<FrozenOperatingPoint> frozen(3);
    for (std::size_t k = 0; k < 3; ++k) {
        frozen[k] = {base.turbines[k].ct, base.turbines[k].i_rotor};
    }
    SolveOptions opt;
    opt.frozen = &frozen;
    ControlState ctrl = ControlState::zeros(3);
    ctrl.yaw[0] = 20.0;
    const auto sol = solve_farm(layout, amb, ctrl, WakeParams{}, spec, opt);
    CHECK(sol.turbines[1].ct == doctest::Approx(base.turbines[1].ct).epsilon(1e-15));
    CHECK(sol.turbines[1].i_rotor == doctest::Approx(base.turbines[1].i_rotor).epsilon(1e-15));
    // Yawing the front row speeds up the middle rotor, so its free-running
    // thrust would drop; pinning it keeps the last rotor's inflow distinct.
    const auto free_sol = solve_farm(layout, amb, ctrl, WakeParams{}, spec);
    CHECK(sol.turbines[1].ct != doctest::Approx(free_sol.turbines[1].ct).epsilon(1e-12));
    CHECK(sol.turbines[2].s_rotor != doctest::Approx(free_sol.turbines[2].s_rotor).epsilon(1e-12));
}

TEST_CASE("dominant wake triple at the waked rotor") {
    const TurbineSpec spec = test::reference_turbine();
    const FarmLayout layout = test::column_layout(2, 5.0);
    const AmbientState amb = test::west_wind(8.0, 0.06);
    ControlState ctrl = ControlState::zeros(2);
    ctrl.yaw[0] = 20.0;
    const auto sol = solve_farm(layout, amb, ctrl, WakeParams{}, spec);

    const auto dom = dominant_wake_at(sol.field, 1, layout.positions[1], spec.hub_height,
                                      spec.rotor_diameter);
    CHECK(dom.waked);
    const double kw0 = sol.turbines[0].k_w;
    const double x00 = sol.turbines[0].x0;
    const auto w = wake_widths(891.5, x00, kw0, 20.0, spec.rotor_diameter);
    const double radicand = 1.0 - sol.turbines[0].ct * std::cos(deg2rad(20.0)) * 178.3 * 178.3 /
                                      (8.0 * w.sigma_y * w.sigma_z);
    CHECK(dom.w_d == doctest::Approx(1.0 - std::sqrt(radicand)).epsilon(1e-12));
    CHECK(dom.sigma_d == doctest::Approx((w.sigma_y + w.sigma_z) / 178.3).epsilon(1e-12));
    CHECK(dom.delta_c
          == doctest::Approx(deflection(891.5, x00, kw0, sol.turbines[0].ct, 20.0, 178.3) / 178.3)
                 .epsilon(1e-12));

    const auto front = dominant_wake_at(sol.field, 0, layout.positions[0], spec.hub_height,
                                        spec.rotor_diameter);
    CHECK_FALSE(front.waked);
}

TEST_CASE("flow raster export") {
    FlowField field;
    field.ambient_velocity = {8.0, 0.0};
    std::ostringstream out;
    export_flow_csv(field, 119.0, {0.0, -100.0}, {100.0, 100.0}, 3, 2, out);
    const std::string text = out.str();
    CHECK(text.rfind("x,y,u,v,speed\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n' ? 1 : 0;
    CHECK(lines == 7);  // header + 3x2 grid
    CHECK(text.find("100.000000,100.000000,8.000000,0.000000,8.000000") != std::string::npos);
}

}  // TEST_SUITE
