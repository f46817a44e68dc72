#include "bubblefield/config.hpp"

#include "bubblefield/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bubblefield::config {

namespace {
constexpr const char* kModule = "config";
using boost::property_tree::ptree;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw Error(ErrorCode::ConfigError, kModule, key + ": " + what);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
        fail(key, "expected a number, got '" + t + "'");
    }
    return v;
}

long long to_integer(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        fail(key, "expected an integer, got '" + t + "'");
    }
    return v;
}

std::string fmt(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// One INI section; remembers which keys were read so leftovers can be
// reported as unknown.
class Section {
public:
    Section(const ptree* node, std::string name) : node_(node), name_(std::move(name)) {}

    bool present() const { return node_ != nullptr; }
    const std::string& name() const { return name_; }
    std::string key(const std::string& k) const { return name_ + "." + k; }

    std::optional<std::string> raw(const std::string& k) {
        used_.insert(k);
        if (node_ == nullptr) return std::nullopt;
        const auto it = node_->find(k);
        if (it == node_->not_found()) return std::nullopt;
        return trim(it->second.data());
    }
    double number(const std::string& k, double fallback) {
        const auto v = raw(k);
        return v ? to_double(key(k), *v) : fallback;
    }
    double number(const std::string& k) {
        const auto v = raw(k);
        if (!v) fail(key(k), "required");
        return to_double(key(k), *v);
    }
    long long integer(const std::string& k, long long fallback) {
        const auto v = raw(k);
        return v ? to_integer(key(k), *v) : fallback;
    }
    long long integer(const std::string& k) {
        const auto v = raw(k);
        if (!v) fail(key(k), "required");
        return to_integer(key(k), *v);
    }
    std::string text(const std::string& k, const std::string& fallback) {
        const auto v = raw(k);
        return v ? *v : fallback;
    }
    void finish() const {
        if (node_ == nullptr) return;
        for (const auto& [k, child] : *node_) {
            if (!child.empty()) fail(key(k), "nested values are not supported");
            if (!used_.count(k)) fail(key(k), "unknown key");
        }
    }

private:
    const ptree* node_;
    std::string name_;
    std::set<std::string> used_;
};

template <typename E>
E choose(const std::string& key, const std::string& value, std::initializer_list<std::pair<const char*, E>> options) {
    std::string allowed;
    for (const auto& [name, e] : options) {
        if (value == name) return e;
        allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    }
    fail(key, "'" + value + "' is not one of " + allowed);
}

Mode parse_mode(const std::string& key, const std::string& v) {
    return choose<Mode>(key, v,
                        {{"near-only", Mode::NearOnly},
                         {"far-only", Mode::FarOnly},
                         {"coupled", Mode::Coupled},
                         {"coupled-efield", Mode::CoupledEfield},
                         {"cd-reference", Mode::CdReference}});
}

std::string_view form_name(young_laplace::RhsForm f) { return young_laplace::to_string(f); }

// Near-field keys shared by [near] (defaults) and [bubble.N].
struct NearKeys {
    std::optional<std::string> form, angle;
    std::map<std::string, double> numbers;
};

const char* const kNearNumbers[] = {"a", "dp_over_alpha", "beta", "rho", "g", "alpha", "sigma", "R_t", "L", "ds", "theta"};

NearKeys read_near_keys(Section& s) {
    NearKeys k;
    k.form = s.raw("form");
    k.angle = s.raw("angle");
    for (const char* name : kNearNumbers) {
        if (auto v = s.raw(name)) k.numbers[name] = to_double(s.key(name), *v);
    }
    return k;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
    return out;
}

}  // namespace

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
        case Mode::NearOnly: return "near-only";
        case Mode::FarOnly: return "far-only";
        case Mode::Coupled: return "coupled";
        case Mode::CoupledEfield: return "coupled-efield";
        case Mode::CdReference: return "cd-reference";
    }
    return "?";
}

RunConfig parse_config(std::string_view text) {
    ptree root;
    try {
        std::istringstream is{std::string(text)};
        boost::property_tree::read_ini(is, root);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw Error(ErrorCode::ConfigError, kModule, "line " + std::to_string(e.line()) + ": " + e.message());
    }

    std::map<std::string, const ptree*> sections;
    std::vector<std::pair<int, const ptree*>> bubble_sections;
    for (const auto& [name, node] : root) {
        if (node.empty() && !node.data().empty()) fail(name, "key outside of a section");
        if (name.rfind("bubble.", 0) == 0) {
            const long long id = to_integer(name, name.substr(7));
            bubble_sections.emplace_back(static_cast<int>(id), &node);
        } else if (name == "run" || name == "grid" || name == "transport" || name == "efield" || name == "near" ||
                   name == "cylindrical" || name == "oscillation" || name == "manifest") {
            sections[name] = &node;
        } else {
            fail(name, "unknown section");
        }
    }
    auto section = [&](const std::string& name) {
        const auto it = sections.find(name);
        return Section(it == sections.end() ? nullptr : it->second, name);
    };

    RunConfig cfg;
    Section run = section("run");
    cfg.name = run.text("name", cfg.name);
    cfg.mode = parse_mode("run.mode", run.text("mode", std::string(to_string(cfg.mode))));
    cfg.output_dir = run.text("output_dir", cfg.output_dir);
    if (auto t = run.raw("times")) cfg.times = parse_list("run.times", *t);
    const long long k = run.integer("refresh_every", static_cast<long long>(cfg.refresh_every));
    if (k < 0) fail("run.refresh_every", "must be >= 0");
    cfg.refresh_every = static_cast<std::size_t>(k);
    cfg.transport.sign = choose<levelset::NormalTermSign>(
        "run.normal-term-sign", run.text("normal-term-sign", "pde"),
        {{"pde", levelset::NormalTermSign::Pde}, {"literal", levelset::NormalTermSign::Literal}});
    const auto efield_form = choose<young_laplace::EFieldForm>(
        "run.efield-form", run.text("efield-form", "canonical"),
        {{"canonical", young_laplace::EFieldForm::Canonical}, {"section54", young_laplace::EFieldForm::Section54}});
    cfg.init_mode = choose<levelset::InitMode>(
        "run.init-mode", run.text("init-mode", "union"),
        {{"union", levelset::InitMode::Union}, {"piecewise", levelset::InitMode::PaperPiecewise}});
    run.finish();

    Section grid = section("grid");
    if (grid.present()) {
        const auto nx = grid.integer("nx");
        const auto ny = grid.integer("ny");
        const double x0 = grid.number("x0", 0.0), y0 = grid.number("y0", 0.0);
        const double x1 = grid.number("x1"), y1 = grid.number("y1");
        if (nx < 3 || ny < 3 || nx > 1'000'000 || ny > 1'000'000) fail("grid.nx", "nx and ny must be in [3, 1e6]");
        if (!(x1 > x0)) fail("grid.x1", "must be > x0");
        if (!(y1 > y0)) fail("grid.y1", "must be > y0");
        cfg.grid = levelset::Grid2D::from_extent(static_cast<int>(nx), static_cast<int>(ny), x0, y0, x1, y1);
    }
    grid.finish();

    Section transport = section("transport");
    cfg.transport.vx = transport.number("vx", 0.0);
    cfg.transport.vy = transport.number("vy", 0.0);
    cfg.transport.F0 = transport.number("F0", 0.0);
    transport.finish();

    Section efield = section("efield");
    if (efield.present()) {
        young_laplace::EFieldParams e;
        e.E0_sq = efield.number("E0_sq");
        e.epsilon = efield.number("epsilon", 1.0);
        e.form = efield_form;
        cfg.efield = e;
    }
    efield.finish();

    Section osc = section("oscillation");
    cfg.oscillation.k = osc.number("k", cfg.oscillation.k);
    cfg.oscillation.p0 = osc.number("p0", cfg.oscillation.p0);
    osc.finish();

    Section cyl = section("cylindrical");
    if (cyl.present()) {
        levelset::CylindricalParams c;
        c.v = cyl.number("v", 0.0);
        c.D_L = cyl.number("D_L", 0.0);
        c.D_t = cyl.number("D_t", 0.0);
        cfg.cylindrical = c;
    }
    cyl.finish();

    Section manifest = section("manifest");
    manifest.raw("version");
    manifest.raw("threads");
    manifest.finish();

    Section near = section("near");
    const NearKeys defaults = read_near_keys(near);
    near.finish();

    std::set<int> ids;
    for (const auto& [id, node] : bubble_sections) {
        Section b(node, "bubble." + std::to_string(id));
        if (!ids.insert(id).second) fail(b.name(), "duplicate bubble id");
        BubbleSpec spec;
        spec.id = id;
        spec.placement = {b.number("x", 0.0), b.number("y", 0.0)};
        NearKeys keys = read_near_keys(b);
        const auto ea = b.raw("ellipse_a");
        const auto eb = b.raw("ellipse_b");
        b.finish();

        if (ea || eb) {
            if (!ea || !eb) fail(b.key(ea ? "ellipse_b" : "ellipse_a"), "required together with its pair");
            shape_fit::EllipseParams e;
            e.a = to_double(b.key("ellipse_a"), *ea);
            e.b = to_double(b.key("ellipse_b"), *eb);
            if (!(e.a > 0.0) || !(e.b > 0.0)) fail(b.key("ellipse_a"), "semi-axes must be > 0");
            spec.ellipse = e;
            cfg.bubbles.push_back(spec);
            continue;
        }

        auto get = [&](const char* name, double fallback) {
            if (auto it = keys.numbers.find(name); it != keys.numbers.end()) return it->second;
            if (auto it = defaults.numbers.find(name); it != defaults.numbers.end()) return it->second;
            return fallback;
        };
        auto has = [&](const char* name) { return keys.numbers.count(name) || defaults.numbers.count(name); };

        coupling::NearFieldSetup setup;
        auto& p = setup.params;
        const std::string form = keys.form ? *keys.form : defaults.form.value_or("pressure");
        p.form = choose<young_laplace::RhsForm>(b.key("form"), form,
                                                {{"bond", young_laplace::RhsForm::Bond},
                                                 {"pressure", young_laplace::RhsForm::Pressure},
                                                 {"efield", young_laplace::RhsForm::ElectricField}});
        p.a = get("a", p.a);
        p.delta_p_over_alpha = get("dp_over_alpha", 0.0);
        p.beta = get("beta", 0.0);
        p.rho = get("rho", 0.0);
        p.g = get("g", 0.0);
        p.alpha = get("alpha", 1.0);
        p.sigma = get("sigma", 1.0);
        p.R_t = get("R_t", 1.0);
        if (p.form == young_laplace::RhsForm::ElectricField) {
            if (!cfg.efield) fail("efield", "section required by " + b.key("form") + " = efield");
            p.efield = cfg.efield;
        }
        if (!has("L")) fail(b.key("L"), "required (or give ellipse_a and ellipse_b)");
        setup.L = get("L", 0.0);
        setup.ds = get("ds", setup.ds);
        const std::string angle = keys.angle ? *keys.angle : defaults.angle.value_or("start");
        const double theta = get("theta", 1.5707963267948966);
        setup.angle = choose<young_laplace::AngleCondition>(
            b.key("angle"), angle,
            {{"start", young_laplace::AngleCondition::start(theta)}, {"end", young_laplace::AngleCondition::end(theta)}});
        if (!(p.a > 0.0)) fail(b.key("a"), "must be > 0");
        if (!(setup.L > 0.0)) fail(b.key("L"), "must be > 0");
        if (!(setup.ds > 0.0)) fail(b.key("ds"), "must be > 0");
        if (!(p.alpha > 0.0)) fail(b.key("alpha"), "must be > 0");
        spec.near = setup;
        cfg.bubbles.push_back(spec);
    }

    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    const bool far = mode != Mode::NearOnly;
    if (bubbles.empty()) fail("bubble", "no [bubble.N] sections");
    if (far) {
        if (!grid) fail("grid", "section required by run.mode = " + std::string(to_string(mode)));
        if (times.empty()) fail("run.times", "required by run.mode = " + std::string(to_string(mode)));
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (times[k] < 0.0) fail("run.times", "must be >= 0");
            if (k > 0 && !(times[k] > times[k - 1])) fail("run.times", "must be strictly increasing");
        }
        if (!(times.back() > 0.0)) fail("run.times", "the last time must be > 0");
        if (transport.vx < 0.0) fail("transport.vx", "must be >= 0");
        if (transport.vy < 0.0) fail("transport.vy", "must be >= 0");
        if (transport.F0 < 0.0) fail("transport.F0", "must be >= 0");
    }
    for (const auto& b : bubbles) {
        const std::string key = "bubble." + std::to_string(b.id);
        if (mode == Mode::NearOnly && !b.near) fail(key + ".L", "near-only runs need a near-field setup");
        if (b.near && b.near->params.form == young_laplace::RhsForm::ElectricField && !efield) {
            fail("efield", "section required by " + key + ".form = efield");
        }
    }
    if (mode == Mode::CoupledEfield && !efield) fail("efield", "section required by run.mode = coupled-efield");
    if (mode == Mode::CdReference) {
        if (!cylindrical) fail("cylindrical", "section required by run.mode = cd-reference");
        if (!(grid->ax > 0.0)) fail("grid.x0", "must be > 0 (radial nodes off the axis) for cd-reference");
        if (cylindrical->D_L < 0.0) fail("cylindrical.D_L", "must be >= 0");
        if (cylindrical->D_t < 0.0) fail("cylindrical.D_t", "must be >= 0");
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, kModule, path.string() + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[run]\n";
    os << "name = " << cfg.name << "\n";
    os << "mode = " << to_string(cfg.mode) << "\n";
    os << "output_dir = " << cfg.output_dir << "\n";
    if (!cfg.times.empty()) {
        os << "times = ";
        for (std::size_t k = 0; k < cfg.times.size(); ++k) os << (k ? ", " : "") << fmt(cfg.times[k]);
        os << "\n";
    }
    os << "refresh_every = " << cfg.refresh_every << "\n";
    os << "normal-term-sign = " << (cfg.transport.sign == levelset::NormalTermSign::Pde ? "pde" : "literal") << "\n";
    const bool s54 = cfg.efield && cfg.efield->form == young_laplace::EFieldForm::Section54;
    os << "efield-form = " << (s54 ? "section54" : "canonical") << "\n";
    os << "init-mode = " << (cfg.init_mode == levelset::InitMode::Union ? "union" : "piecewise") << "\n";

    if (cfg.grid) {
        const auto& g = *cfg.grid;
        os << "\n[grid]\nnx = " << g.nx << "\nny = " << g.ny << "\nx0 = " << fmt(g.ax) << "\ny0 = " << fmt(g.ay)
           << "\nx1 = " << fmt(g.bx) << "\ny1 = " << fmt(g.by) << "\n";
    }
    os << "\n[transport]\nvx = " << fmt(cfg.transport.vx) << "\nvy = " << fmt(cfg.transport.vy)
       << "\nF0 = " << fmt(cfg.transport.F0) << "\n";
    if (cfg.efield) {
        os << "\n[efield]\nE0_sq = " << fmt(cfg.efield->E0_sq) << "\nepsilon = " << fmt(cfg.efield->epsilon) << "\n";
    }
    os << "\n[oscillation]\nk = " << fmt(cfg.oscillation.k) << "\np0 = " << fmt(cfg.oscillation.p0) << "\n";
    if (cfg.cylindrical) {
        os << "\n[cylindrical]\nv = " << fmt(cfg.cylindrical->v) << "\nD_L = " << fmt(cfg.cylindrical->D_L)
           << "\nD_t = " << fmt(cfg.cylindrical->D_t) << "\n";
    }
    for (const auto& b : cfg.bubbles) {
        os << "\n[bubble." << b.id << "]\n";
        os << "x = " << fmt(b.placement.x) << "\ny = " << fmt(b.placement.y) << "\n";
        if (b.ellipse) {
            os << "ellipse_a = " << fmt(b.ellipse->a) << "\nellipse_b = " << fmt(b.ellipse->b) << "\n";
            continue;
        }
        const auto& s = *b.near;
        const auto& p = s.params;
        os << "form = " << form_name(p.form) << "\n";
        os << "a = " << fmt(p.a) << "\n";
        os << "dp_over_alpha = " << fmt(p.delta_p_over_alpha) << "\n";
        os << "beta = " << fmt(p.beta) << "\n";
        os << "rho = " << fmt(p.rho) << "\ng = " << fmt(p.g) << "\nalpha = " << fmt(p.alpha) << "\n";
        os << "sigma = " << fmt(p.sigma) << "\nR_t = " << fmt(p.R_t) << "\n";
        os << "L = " << fmt(s.L) << "\nds = " << fmt(s.ds) << "\n";
        os << "angle = " << (s.angle.where == young_laplace::AngleCondition::Where::Start ? "start" : "end") << "\n";
        os << "theta = " << fmt(s.angle.theta) << "\n";
    }
    return os.str();
}

}  // namespace bubblefield::config
