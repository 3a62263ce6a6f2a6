#pragma once

#include <functional>
#include <string>
#include <vector>

#include "smnet/devices.hpp"

namespace smnet {

// ---------------------------------------------------------------------------
// Declarative circuit description consumed by the transient engine.
//
// All elements are two-terminal branches between named nodes; "0" is ground.
// Current source convention: `value` amps are delivered into the `pos` node
// (and drawn from `neg`).
// ---------------------------------------------------------------------------

enum class ElementKind { CurrentSource, Resistor, Inductor, SnwSwitch, SmResistor, HtronSwitch };

// Optional time-varying drive for a current source. Evaluated at the end of
// each step; must be a pure function of time.
using DriveFn = std::function<double(double t)>;

struct Element {
    ElementKind kind;
    std::string name;
    int pos = -1;  // node index, -1 = ground
    int neg = -1;

    double value = 0.0;  // R for Resistor, L for Inductor, I for CurrentSource
    DriveFn drive;       // CurrentSource only; overrides `value` when set

    SnwParams snw;                        // SnwSwitch
    SnwPhase snw_phase = SnwPhase::Superconducting;
    SmParams sm;                          // SmResistor
    SmLevel sm_level = SmLevel::LRS;
    HtronParams htron;                    // HtronSwitch
    double htron_r_normal = 5e3;          // channel resistance when suppressed
    std::string control;                  // HtronSwitch: element whose branch current heats
};

class Netlist {
public:
    int add_node(const std::string& name);
    int node(const std::string& name) const;  // -1 for ground, throws if unknown
    const std::string& node_name(int index) const;
    int node_count() const { return static_cast<int>(node_names_.size()); }

    int add_current_source(const std::string& name, const std::string& pos, const std::string& neg,
                           double amps);
    int add_current_source(const std::string& name, const std::string& pos, const std::string& neg,
                           DriveFn drive);
    int add_resistor(const std::string& name, const std::string& pos, const std::string& neg,
                     double ohms);
    int add_inductor(const std::string& name, const std::string& pos, const std::string& neg,
                     double henry);
    int add_snw_switch(const std::string& name, const std::string& pos, const std::string& neg,
                       const SnwParams& params,
                       SnwPhase initial = SnwPhase::Superconducting);
    int add_sm_resistor(const std::string& name, const std::string& pos, const std::string& neg,
                        const SmParams& params, SmLevel level);
    int add_htron_switch(const std::string& name, const std::string& pos, const std::string& neg,
                         const HtronParams& params, const std::string& control_element,
                         double r_normal = 5e3);

    const std::vector<Element>& elements() const { return elements_; }
    Element& element(int index) { return elements_.at(static_cast<std::size_t>(index)); }
    int element_index(const std::string& name) const;  // -1 if not found

    // Structural checks: terminals valid, ground referenced, at least one
    // source, htron controls resolve. Throws std::invalid_argument.
    void validate() const;

private:
    int add_element(Element e, const std::string& pos, const std::string& neg);

    std::vector<std::string> node_names_;
    std::vector<Element> elements_;
    bool ground_seen_ = false;
};

// Structured-text netlist description (JSON; see docs in netlist.cpp).
Netlist netlist_from_json(const std::string& json_text);

}  // namespace smnet
