#include "bubblefield/presets.hpp"

#include "bubblefield/errors.hpp"

#include <numbers>

namespace bubblefield::presets {

const std::array<SemiAxes, 10> kFormationTable = {{{0.5141, 0.9926},
                                                   {0.5219, 0.9718},
                                                   {0.5295, 0.9506},
                                                   {0.5369, 0.9289},
                                                   {0.5443, 0.9067},
                                                   {0.5514, 0.8841},
                                                   {0.5584, 0.8612},
                                                   {0.5651, 0.8382},
                                                   {0.5717, 0.8154},
                                                   {0.5780, 0.7928}}};

const std::array<SemiAxes, 10> kEfieldTable = {{{0.5558, 0.8698},
                                                {0.5626, 0.8468},
                                                {0.5693, 0.8239},
                                                {0.5757, 0.8013},
                                                {0.5819, 0.7789},
                                                {0.5878, 0.7571},
                                                {0.5935, 0.7359},
                                                {0.5990, 0.7153},
                                                {0.6042, 0.6953},
                                                {0.6091, 0.6760}}};

namespace {

using config::BubbleSpec;
using config::Mode;
using config::RunConfig;

constexpr double kHalfPi = std::numbers::pi / 2.0;

BubbleSpec pressure_bubble(int id, double a, double dp, double L, double ds, shape_fit::Point2 at = {}) {
    BubbleSpec b;
    b.id = id;
    coupling::NearFieldSetup s;
    s.params.form = young_laplace::RhsForm::Pressure;
    s.params.a = a;
    s.params.delta_p_over_alpha = dp;
    s.L = L;
    s.ds = ds;
    s.angle = young_laplace::AngleCondition::start(kHalfPi);
    b.near = s;
    b.placement = at;
    return b;
}

// Shared far-field defaults: 100 x 200 unit cells, upward rise, slow growth.
void far_defaults(RunConfig& cfg) {
    cfg.grid = levelset::Grid2D::from_extent(100, 200, 0.0, 0.0, 100.0, 200.0);
    cfg.transport.vx = 0.0;
    cfg.transport.vy = 1.0;
    cfg.transport.F0 = 0.05;
    cfg.refresh_every = 50;
}

// Ten-bubble sweep dp/alpha = 0.2, 0.4, ..., 2.0 on a 2 x 5 lattice.
std::vector<BubbleSpec> sweep() {
    std::vector<BubbleSpec> out;
    for (int k = 0; k < 10; ++k) {
        const double x = k % 2 == 0 ? 20.0 : 80.0;
        const double y = 20.0 + 20.0 * (k / 2);
        out.push_back(pressure_bubble(k + 1, 0.01, 0.2 * (k + 1), 2.0, 0.001, {x, y}));
    }
    return out;
}

RunConfig exp1() {
    RunConfig cfg;
    cfg.name = "exp1";
    cfg.mode = Mode::NearOnly;
    const double radii[] = {1.0, 2.0, 3.0, 3.5};
    int id = 1;
    for (double a : radii) {
        const double L = 2.0 * std::numbers::pi * a * a / 4.0;
        cfg.bubbles.push_back(pressure_bubble(id++, a, 0.0, L, 2.0 * std::numbers::pi * 0.001));
    }
    return cfg;
}

RunConfig exp2() {
    RunConfig cfg;
    cfg.name = "exp2";
    cfg.mode = Mode::NearOnly;
    const double dps[] = {0.0, 0.8, 1.4};
    int id = 1;
    for (double dp : dps) cfg.bubbles.push_back(pressure_bubble(id++, 0.01, dp, 2.0, 0.001));
    return cfg;
}

RunConfig exp_2bubble() {
    RunConfig cfg;
    cfg.name = "exp-2bubble";
    cfg.mode = Mode::Coupled;
    far_defaults(cfg);
    cfg.times = {0.1, 25.0};
    cfg.bubbles.push_back(pressure_bubble(1, 0.01, 0.8, 1.0, 0.001, {20.0, 100.0}));
    cfg.bubbles.push_back(pressure_bubble(2, 0.01, 0.8, 2.0, 0.001, {70.0, 90.0}));
    return cfg;
}

RunConfig exp10() {
    RunConfig cfg;
    cfg.name = "exp10";
    cfg.mode = Mode::Coupled;
    far_defaults(cfg);
    cfg.times = {0.1, 25.0, 50.0};
    cfg.bubbles = sweep();
    return cfg;
}

RunConfig exp_efield() {
    RunConfig cfg;
    cfg.name = "exp-efield";
    cfg.mode = Mode::CoupledEfield;
    far_defaults(cfg);
    cfg.times = {0.1, 25.0, 50.0};
    young_laplace::EFieldParams e;
    e.E0_sq = 0.1;
    e.epsilon = 1.0;
    e.form = young_laplace::EFieldForm::Section54;
    cfg.efield = e;
    cfg.bubbles = sweep();
    for (auto& b : cfg.bubbles) {
        auto& p = b.near->params;
        p.form = young_laplace::RhsForm::ElectricField;
        p.alpha = 0.1;
        p.sigma = 0.1;
        p.rho = 0.1;
        p.g = 9.81;
        p.efield = e;
    }
    return cfg;
}

}  // namespace

std::vector<std::string> names() { return {"exp1", "exp2", "exp-2bubble", "exp10", "exp-efield"}; }

config::RunConfig get(std::string_view name) {
    if (name == "exp1") return exp1();
    if (name == "exp2") return exp2();
    if (name == "exp-2bubble") return exp_2bubble();
    if (name == "exp10") return exp10();
    if (name == "exp-efield") return exp_efield();
    std::string known;
    for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::ConfigError, "config", "preset: unknown name '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace bubblefield::presets
