#include "fluxtune/config.hpp"

#include "fluxtune/constants.hpp"
#include "fluxtune/table.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace fluxtune {

namespace {

using nlohmann::ordered_json;

/// Wraps a JSON object for strict-schema access: every key must be consumed
/// exactly once, and leftovers are reported with their path.
class StrictObject {
public:
    StrictObject(const ordered_json& obj, std::string path)
        : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object()) {
            throw ConfigError("config: '" + path_ + "' must be an object");
        }
    }

    bool has(const std::string& key)
    {
        return obj_.contains(key);
    }

    const ordered_json* take(const std::string& key)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    double number(const std::string& key, double fallback)
    {
        const ordered_json* v = take(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_number()) {
            throw ConfigError("config: '" + member(key) +
                              "' must be a number");
        }
        return v->get<double>();
    }

    int integer(const std::string& key, int fallback)
    {
        const ordered_json* v = take(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_number_integer()) {
            throw ConfigError("config: '" + member(key) +
                              "' must be an integer");
        }
        return v->get<int>();
    }

    std::string text(const std::string& key, const std::string& fallback)
    {
        const ordered_json* v = take(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_string()) {
            throw ConfigError("config: '" + member(key) +
                              "' must be a string");
        }
        return v->get<std::string>();
    }

    std::string member(const std::string& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

    /// Rejects any key that was never consumed.
    void finish() const
    {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (seen_.count(it.key()) == 0) {
                throw ConfigError("config: unknown key '" +
                                  member(it.key()) + "'");
            }
        }
    }

private:
    const ordered_json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

DeviceParams parse_device(const ordered_json& doc)
{
    if (!doc.contains("device")) {
        throw ConfigError(
            "config: missing required 'device' object (required fields: "
            "device.ej_ghz, device.ec_ghz, device.l0_nh, device.lr_nh, "
            "device.cavity_ghz)");
    }
    StrictObject dev(doc.at("device"), "device");

    std::vector<std::string> missing;
    auto required = [&](const char* key) {
        if (!dev.has(key)) {
            missing.push_back(dev.member(key));
        }
        return dev.number(key, 0.0);
    };

    DeviceParams p;
    p.ej_ghz = required("ej_ghz");
    p.ec_ghz = required("ec_ghz");
    p.l0_nH = required("l0_nh");
    p.lr_nH = required("lr_nh");
    p.cavity_ghz = required("cavity_ghz");
    if (!missing.empty()) {
        std::ostringstream os;
        os << "config: missing required device fields:";
        for (const auto& f : missing) {
            os << " " << f;
        }
        throw ConfigError(os.str());
    }

    DeviceParams defaults;
    p.m1_phi0_per_A = dev.number("m1_phi0_per_a", defaults.m1_phi0_per_A);
    p.m2_phi0_per_A = dev.number("m2_phi0_per_a", defaults.m2_phi0_per_A);
    p.m3_phi0_per_A = dev.number("m3_phi0_per_a", defaults.m3_phi0_per_A);
    p.zr_ohm = dev.number("zr_ohm", defaults.zr_ohm);
    p.aphi_phi0 = dev.number("aphi_phi0", defaults.aphi_phi0);
    p.aic_rel = dev.number("aic_rel", defaults.aic_rel);
    p.ac_e = dev.number("ac_e", defaults.ac_e);
    if (dev.has("ls_nh")) {
        p.ls_nH = dev.number("ls_nh", 0.0);
    }
    dev.finish();
    return p;
}

GridSpec parse_grid(const ordered_json& node)
{
    StrictObject grid(node, "f_grid");
    GridSpec g;
    g.start_pi = grid.number("start_pi", g.start_pi);
    g.stop_pi = grid.number("stop_pi", g.stop_pi);
    g.points = grid.integer("points", g.points);
    grid.finish();
    if (!(g.start_pi > 0.0 && g.stop_pi < 1.0 && g.start_pi < g.stop_pi)) {
        throw ConfigError(
            "config: f_grid must satisfy 0 < start_pi < stop_pi < 1 "
            "(the splitting target is unreachable at f = pi)");
    }
    if (g.points < 2) {
        throw ConfigError("config: f_grid.points must be >= 2");
    }
    return g;
}

template <typename T>
T parse_choice(StrictObject& top, const std::string& key,
               std::initializer_list<std::pair<const char*, T>> choices,
               T fallback)
{
    const std::string got = top.text(key, "");
    if (got.empty()) {
        return fallback;
    }
    std::string allowed;
    for (const auto& [name, value] : choices) {
        if (got == name) {
            return value;
        }
        allowed += allowed.empty() ? name : std::string(" | ") + name;
    }
    throw ConfigError("config: '" + key + "' must be one of " + allowed +
                      ", got '" + got + "'");
}

} // namespace

std::vector<double> RunConfig::grid_radians() const
{
    std::vector<double> out(static_cast<std::size_t>(f_grid.points));
    const double a = f_grid.start_pi * constants::pi;
    const double b = f_grid.stop_pi * constants::pi;
    for (int i = 0; i < f_grid.points; ++i) {
        out[static_cast<std::size_t>(i)] =
            a + (b - a) * i / (f_grid.points - 1);
    }
    return out;
}

RunConfig parse_config_text(const std::string& text)
{
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }

    StrictObject top(doc, "");
    RunConfig c;
    top.take("device");
    c.device = parse_device(doc);
    c.target_delta_e_ghz =
        top.number("target_delta_e_ghz", c.device.cavity_ghz);
    if (!(c.target_delta_e_ghz > 0.0)) {
        throw ConfigError("config: target_delta_e_ghz must be > 0");
    }
    if (const ordered_json* node = top.take("f_grid")) {
        c.f_grid = parse_grid(*node);
    }
    if (const ordered_json* node = top.take("basis")) {
        StrictObject basis(*node, "basis");
        c.n_fock = basis.integer("n_fock", c.n_fock);
        c.n_charge = basis.integer("n_charge", c.n_charge);
        basis.finish();
        if (c.n_fock < 2 || c.n_charge < 1) {
            throw ConfigError(
                "config: basis requires n_fock >= 2 and n_charge >= 1");
        }
    }
    c.engine = parse_choice(top, "engine",
                            {{"exact", Engine::exact},
                             {"perturbative", Engine::perturbative}},
                            c.engine);
    c.variant = parse_choice(top, "variant",
                             {{"full", perturb::Variant::full},
                              {"simplified", perturb::Variant::simplified}},
                             c.variant);
    c.form = parse_choice(top, "form",
                          {{"exact", AtomForm::exact},
                           {"linearized", AtomForm::linearized}},
                          c.form);
    c.solve_tol_ghz = top.number("solve_tol_ghz", c.solve_tol_ghz);
    if (!(c.solve_tol_ghz > 0.0)) {
        throw ConfigError("config: solve_tol_ghz must be > 0");
    }
    if (const ordered_json* node = top.take("validation")) {
        StrictObject val(*node, "validation");
        c.validation_margin = val.number("margin", c.validation_margin);
        c.lambda_max = val.number("lambda_max", c.lambda_max);
        val.finish();
        if (!(c.validation_margin > 0.0) || !(c.lambda_max > 0.0)) {
            throw ConfigError(
                "config: validation.margin and validation.lambda_max must "
                "be > 0");
        }
    }
    top.finish();
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::string text;
    if (path.empty() || path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        text = os.str();
    } else {
        std::ifstream is(path, std::ios::binary);
        if (!is) {
            throw ConfigError("config: cannot open '" + path + "'");
        }
        std::ostringstream os;
        os << is.rdbuf();
        text = os.str();
    }
    return parse_config_text(text);
}

std::string dump_config(const RunConfig& c)
{
    ordered_json doc;
    auto& dev = doc["device"];
    dev["ej_ghz"] = c.device.ej_ghz;
    dev["ec_ghz"] = c.device.ec_ghz;
    dev["l0_nh"] = c.device.l0_nH;
    dev["lr_nh"] = c.device.lr_nH;
    dev["cavity_ghz"] = c.device.cavity_ghz;
    dev["m1_phi0_per_a"] = c.device.m1_phi0_per_A;
    dev["m2_phi0_per_a"] = c.device.m2_phi0_per_A;
    dev["m3_phi0_per_a"] = c.device.m3_phi0_per_A;
    dev["zr_ohm"] = c.device.zr_ohm;
    dev["aphi_phi0"] = c.device.aphi_phi0;
    dev["aic_rel"] = c.device.aic_rel;
    dev["ac_e"] = c.device.ac_e;
    if (c.device.ls_nH) {
        dev["ls_nh"] = *c.device.ls_nH;
    }
    doc["target_delta_e_ghz"] = c.target_delta_e_ghz;
    doc["f_grid"] = {{"start_pi", c.f_grid.start_pi},
                     {"stop_pi", c.f_grid.stop_pi},
                     {"points", c.f_grid.points}};
    doc["basis"] = {{"n_fock", c.n_fock}, {"n_charge", c.n_charge}};
    doc["engine"] = c.engine == Engine::exact ? "exact" : "perturbative";
    doc["variant"] =
        c.variant == perturb::Variant::full ? "full" : "simplified";
    doc["form"] = c.form == AtomForm::exact ? "exact" : "linearized";
    doc["solve_tol_ghz"] = c.solve_tol_ghz;
    doc["validation"] = {{"margin", c.validation_margin},
                         {"lambda_max", c.lambda_max}};
    return doc.dump(2) + "\n";
}

} // namespace fluxtune
