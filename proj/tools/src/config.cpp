#include "dsep/cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <numbers>
#include <string_view>

#include "dsep/error.hpp"

namespace dsep::cli {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::ParseError, message); }

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where + " must be an object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (std::string_view a : allowed) known = known || key == a;
        if (!known) fail("unknown key '" + key + "' in " + where);
    }
}

double number(const json& j, const std::string& key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_number()) fail(where + "." + key + " must be a number");
    return v.get<double>();
}

std::optional<double> optional_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    return number(j, key, where);
}

std::string text(const json& j, const std::string& key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_string()) fail(where + "." + key + " must be a string");
    return v.get<std::string>();
}

void required(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) fail("missing key '" + key + "' in " + where);
}

CircuitScenario parse_scenario(const json& j) {
    const std::string where = "scenario";
    require_object(j, where);
    reject_unknown(j, where,
                   {"connection", "fault", "load", "vll_rms", "f0", "rs", "ls", "rc", "lc", "rg", "t_end", "t_fault",
                    "dt_sim", "dt_sample"});
    required(j, "connection", where);
    required(j, "load", where);

    CircuitScenario s;
    const std::string conn = text(j, "connection", where);
    const auto parsed_conn = parse_connection(conn);
    if (!parsed_conn) fail("unknown connection '" + conn + "'");
    s.conn = *parsed_conn;
    if (j.contains("fault")) {
        const std::string fault = text(j, "fault", where);
        const auto parsed_fault = parse_fault(fault);
        if (!parsed_fault) fail("unknown fault '" + fault + "'");
        s.fault = *parsed_fault;
    }

    const auto set = [&](const char* key, double& field) {
        if (auto v = optional_number(j, key, where)) field = *v;
    };
    set("vll_rms", s.vll_rms);
    set("f0", s.f0);
    set("rs", s.rs);
    set("ls", s.ls);
    set("rc", s.rc);
    set("lc", s.lc);
    set("rg", s.rg);
    set("t_end", s.t_end);
    set("t_fault", s.t_fault);
    set("dt_sim", s.dt_sim);
    set("dt_sample", s.dt_sample);

    const json& load = j.at("load");
    require_object(load, "scenario.load");
    reject_unknown(load, "scenario.load", {"r", "l", "x", "rf"});
    required(load, "r", "scenario.load");
    s.load.r = number(load, "r", "scenario.load");
    if (load.contains("l") == load.contains("x")) fail("scenario.load needs exactly one of 'l' and 'x'");
    if (load.contains("l"))
        s.load.l = number(load, "l", "scenario.load");
    else
        s.load.l = number(load, "x", "scenario.load") / (2.0 * std::numbers::pi * s.f0);
    s.load.rf = optional_number(load, "rf", "scenario.load");
    return s;
}

}  // namespace

models::ModelId ExperimentConfig::truth() const {
    models::ModelId id{family, scenario.conn, scenario.fault, false};
    if (family == models::Family::Phasor && scenario.conn == ConnectionKind::GroundedWye &&
        scenario.fault.type() == FaultKind::Type::LineGround) {
        id.fault = FaultKind::line_ground(Phase::A);
        id.unbalanced = true;
    }
    return id;
}

ExperimentConfig parse_config(const json& doc) {
    require_object(doc, "config");
    reject_unknown(doc, "config", {"name", "description", "family", "scenario", "noise", "window", "output"});
    required(doc, "name", "config");
    required(doc, "family", "config");
    required(doc, "scenario", "config");

    ExperimentConfig c;
    c.name = text(doc, "name", "config");
    if (doc.contains("description")) c.description = text(doc, "description", "config");
    const std::string family = text(doc, "family", "config");
    const auto parsed_family = models::parse_family(family);
    if (!parsed_family) fail("unknown family '" + family + "'");
    c.family = *parsed_family;
    c.scenario = parse_scenario(doc.at("scenario"));

    if (doc.contains("noise")) {
        const json& n = doc.at("noise");
        require_object(n, "noise");
        reject_unknown(n, "noise", {"fraction", "seed"});
        if (auto f = optional_number(n, "fraction", "noise")) c.noise.fraction = *f;
        if (n.contains("seed")) {
            if (!n.at("seed").is_number_unsigned()) fail("noise.seed must be a non-negative integer");
            c.noise.seed = n.at("seed").get<std::uint64_t>();
        }
        if (!(c.noise.fraction >= 0.0)) fail("noise.fraction must be >= 0");
    }
    if (doc.contains("window")) {
        const json& w = doc.at("window");
        require_object(w, "window");
        reject_unknown(w, "window", {"start", "cycles"});
        c.window.start = optional_number(w, "start", "window");
        if (w.contains("cycles")) {
            if (!w.at("cycles").is_number_integer() || w.at("cycles").get<long>() < 1)
                fail("window.cycles must be a positive integer");
            c.window.cycles = w.at("cycles").get<int>();
        }
    }
    if (doc.contains("output")) {
        const json& o = doc.at("output");
        require_object(o, "output");
        reject_unknown(o, "output", {"waveform", "report"});
        if (o.contains("waveform")) c.output.waveform = text(o, "waveform", "output");
        if (o.contains("report")) c.output.report = text(o, "report", "output");
    }

    if (c.family == models::Family::Dynamic) {
        c.scenario.validate();
    } else {
        c.scenario.load.validate();
        if (!(c.scenario.f0 > 0.0) || !(c.scenario.dt_sample > 0.0) || !(c.scenario.vll_rms > 0.0))
            throw Error(ErrorCode::InvalidScenario, "phasor scenario needs f0, dt_sample and vll_rms > 0");
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
    const CircuitScenario& s = c.scenario;
    json load{{"r", s.load.r}};
    if (c.family == models::Family::Phasor)
        load["x"] = s.load.l * 2.0 * std::numbers::pi * s.f0;
    else
        load["l"] = s.load.l;
    if (s.load.rf) load["rf"] = *s.load.rf;

    json scenario{{"connection", std::string(to_string(s.conn))}, {"fault", to_string(s.fault)}, {"load", load},
                  {"vll_rms", s.vll_rms}, {"f0", s.f0}};
    if (c.family == models::Family::Dynamic) {
        scenario["rs"] = s.rs;
        scenario["ls"] = s.ls;
        scenario["rc"] = s.rc;
        scenario["lc"] = s.lc;
        scenario["rg"] = s.rg;
        scenario["t_end"] = s.t_end;
        scenario["t_fault"] = s.t_fault;
        scenario["dt_sim"] = s.dt_sim;
    }
    scenario["dt_sample"] = s.dt_sample;

    json doc{{"name", c.name}};
    if (!c.description.empty()) doc["description"] = c.description;
    doc["family"] = std::string(models::to_string(c.family));
    doc["scenario"] = scenario;
    doc["noise"] = json{{"fraction", c.noise.fraction}, {"seed", c.noise.seed}};
    json window = json::object();
    if (c.window.start) window["start"] = *c.window.start;
    if (c.window.cycles) window["cycles"] = *c.window.cycles;
    if (!window.empty()) doc["window"] = window;
    json output = json::object();
    if (c.output.waveform) output["waveform"] = *c.output.waveform;
    if (c.output.report) output["report"] = *c.output.report;
    if (!output.empty()) doc["output"] = output;
    return doc;
}

}  // namespace dsep::cli
