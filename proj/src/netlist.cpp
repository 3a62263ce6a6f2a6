#include "smnet/netlist.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace smnet {

int Netlist::add_node(const std::string& name) {
    if (name == "0" || name == "gnd") {
        ground_seen_ = true;
        return -1;
    }
    for (std::size_t i = 0; i < node_names_.size(); ++i) {
        if (node_names_[i] == name) return static_cast<int>(i);
    }
    node_names_.push_back(name);
    return static_cast<int>(node_names_.size()) - 1;
}

int Netlist::node(const std::string& name) const {
    if (name == "0" || name == "gnd") return -1;
    for (std::size_t i = 0; i < node_names_.size(); ++i) {
        if (node_names_[i] == name) return static_cast<int>(i);
    }
    throw std::invalid_argument("unknown node: " + name);
}

const std::string& Netlist::node_name(int index) const {
    static const std::string ground = "0";
    if (index < 0) return ground;
    return node_names_.at(static_cast<std::size_t>(index));
}

int Netlist::add_element(Element e, const std::string& pos, const std::string& neg) {
    e.pos = add_node(pos);
    e.neg = add_node(neg);
    elements_.push_back(std::move(e));
    return static_cast<int>(elements_.size()) - 1;
}

int Netlist::add_current_source(const std::string& name, const std::string& pos,
                                const std::string& neg, double amps) {
    Element e;
    e.kind = ElementKind::CurrentSource;
    e.name = name;
    e.value = amps;
    return add_element(std::move(e), pos, neg);
}

int Netlist::add_current_source(const std::string& name, const std::string& pos,
                                const std::string& neg, DriveFn drive) {
    Element e;
    e.kind = ElementKind::CurrentSource;
    e.name = name;
    e.drive = std::move(drive);
    return add_element(std::move(e), pos, neg);
}

int Netlist::add_resistor(const std::string& name, const std::string& pos, const std::string& neg,
                          double ohms) {
    if (!(ohms > 0.0)) throw std::invalid_argument("resistor " + name + ": resistance must be positive");
    Element e;
    e.kind = ElementKind::Resistor;
    e.name = name;
    e.value = ohms;
    return add_element(std::move(e), pos, neg);
}

int Netlist::add_inductor(const std::string& name, const std::string& pos, const std::string& neg,
                          double henry) {
    if (!(henry > 0.0)) throw std::invalid_argument("inductor " + name + ": inductance must be positive");
    Element e;
    e.kind = ElementKind::Inductor;
    e.name = name;
    e.value = henry;
    return add_element(std::move(e), pos, neg);
}

int Netlist::add_snw_switch(const std::string& name, const std::string& pos, const std::string& neg,
                            const SnwParams& params, SnwPhase initial) {
    params.validate();
    Element e;
    e.kind = ElementKind::SnwSwitch;
    e.name = name;
    e.snw = params;
    e.snw_phase = initial;
    return add_element(std::move(e), pos, neg);
}

int Netlist::add_sm_resistor(const std::string& name, const std::string& pos, const std::string& neg,
                             const SmParams& params, SmLevel level) {
    params.validate();
    Element e;
    e.kind = ElementKind::SmResistor;
    e.name = name;
    e.sm = params;
    e.sm_level = level;
    return add_element(std::move(e), pos, neg);
}

int Netlist::add_htron_switch(const std::string& name, const std::string& pos, const std::string& neg,
                              const HtronParams& params, const std::string& control_element,
                              double r_normal) {
    params.validate();
    if (!(r_normal > 0.0))
        throw std::invalid_argument("htron " + name + ": normal resistance must be positive");
    Element e;
    e.kind = ElementKind::HtronSwitch;
    e.name = name;
    e.htron = params;
    e.htron_r_normal = r_normal;
    e.control = control_element;
    return add_element(std::move(e), pos, neg);
}

int Netlist::element_index(const std::string& name) const {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (elements_[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

void Netlist::validate() const {
    if (elements_.empty()) throw std::invalid_argument("netlist has no elements");
    if (!ground_seen_) throw std::invalid_argument("netlist has no ground node");
    bool has_source = false;
    std::set<std::string> names;
    for (const auto& e : elements_) {
        if (e.name.empty()) throw std::invalid_argument("element with empty name");
        if (!names.insert(e.name).second)
            throw std::invalid_argument("duplicate element name: " + e.name);
        if (e.pos == e.neg)
            throw std::invalid_argument("element " + e.name + " has both terminals on the same node");
        if (e.kind == ElementKind::CurrentSource) has_source = true;
        if (e.kind == ElementKind::HtronSwitch) {
            const int ctl = element_index(e.control);
            if (ctl < 0)
                throw std::invalid_argument("htron " + e.name + ": unknown control element '" + e.control + "'");
            if (elements_[static_cast<std::size_t>(ctl)].kind == ElementKind::CurrentSource)
                throw std::invalid_argument("htron " + e.name + ": control must be a branch element");
        }
    }
    if (!has_source) throw std::invalid_argument("netlist has no source");
}

namespace {

SmLevel parse_level(const std::string& s) {
    if (s == "LRS") return SmLevel::LRS;
    if (s == "HRS") return SmLevel::HRS;
    throw std::invalid_argument("bad SM level: " + s);
}

}  // namespace

// JSON schema:
//   {"elements": [
//     {"kind": "current_source", "name": "Iin", "pos": "m", "neg": "0", "value": 35e-6},
//     {"kind": "current_source", "name": "Ip", "pos": "m", "neg": "0",
//      "pulse": {"amplitude": 1e-6, "delay": 0, "width": 1e-9, "period": 10e-9}},
//     {"kind": "resistor", "name": "R1", "pos": "a", "neg": "0", "value": 50.0},
//     {"kind": "inductor", "name": "L1", "pos": "a", "neg": "b", "value": 10e-9},
//     {"kind": "snw_switch", "name": "S1", "pos": "m", "neg": "0",
//      "i_c": 30e-6, "i_r": 20e-6, "r_nw": 5e3, "l_nw": 10e-9},
//     {"kind": "sm_resistor", "name": "N1", "pos": "m", "neg": "0",
//      "r_lrs": 14.4e-3, "r_hrs": 98e-3, "level": "LRS"},
//     {"kind": "htron_switch", "name": "H1", "pos": "p", "neg": "0",
//      "i_heater_th": 50e-6, "r_normal": 5e3, "control": "Rheat"}
//   ]}
// Period 0 means a single pulse.
Netlist netlist_from_json(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text);
    Netlist nl;
    if (!doc.contains("elements") || !doc["elements"].is_array())
        throw std::invalid_argument("netlist json: missing 'elements' array");
    for (const auto& j : doc["elements"]) {
        const std::string kind = j.at("kind").get<std::string>();
        const std::string name = j.at("name").get<std::string>();
        const std::string pos = j.at("pos").get<std::string>();
        const std::string neg = j.at("neg").get<std::string>();
        if (kind == "current_source") {
            if (j.contains("pulse")) {
                const auto& p = j["pulse"];
                const double amp = p.at("amplitude").get<double>();
                const double delay = p.value("delay", 0.0);
                const double width = p.at("width").get<double>();
                const double period = p.value("period", 0.0);
                nl.add_current_source(name, pos, neg, [amp, delay, width, period](double t) {
                    if (t < delay) return 0.0;
                    const double local = period > 0.0 ? std::fmod(t - delay, period) : t - delay;
                    return local < width ? amp : 0.0;
                });
            } else {
                nl.add_current_source(name, pos, neg, j.at("value").get<double>());
            }
        } else if (kind == "resistor") {
            nl.add_resistor(name, pos, neg, j.at("value").get<double>());
        } else if (kind == "inductor") {
            nl.add_inductor(name, pos, neg, j.at("value").get<double>());
        } else if (kind == "snw_switch") {
            SnwParams sp;
            sp.i_c = j.value("i_c", sp.i_c);
            sp.i_r = j.value("i_r", sp.i_r);
            sp.r_nw = j.value("r_nw", sp.r_nw);
            sp.l_nw = j.value("l_nw", sp.l_nw);
            nl.add_snw_switch(name, pos, neg, sp);
        } else if (kind == "sm_resistor") {
            SmParams mp;
            mp.r_lrs = j.value("r_lrs", mp.r_lrs);
            mp.r_hrs = j.value("r_hrs", mp.r_hrs);
            nl.add_sm_resistor(name, pos, neg, mp, parse_level(j.value("level", "LRS")));
        } else if (kind == "htron_switch") {
            HtronParams hp;
            hp.i_heater_th = j.value("i_heater_th", hp.i_heater_th);
            nl.add_htron_switch(name, pos, neg, hp, j.at("control").get<std::string>(),
                                j.value("r_normal", 5e3));
        } else {
            throw std::invalid_argument("netlist json: unknown element kind '" + kind + "'");
        }
    }
    nl.validate();
    return nl;
}

}  // namespace smnet
