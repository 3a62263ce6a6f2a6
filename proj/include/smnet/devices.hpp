#pragma once

#include <stdexcept>

namespace smnet {

// ---------------------------------------------------------------------------
// Behavioral device laws for the three superconducting device classes.
// Values are SI (A, V, s, H, ohm) throughout.
// ---------------------------------------------------------------------------

// Superconducting nanowire: a hysteretic hotspot switch. Above i_c the wire
// develops a normal-resistance hotspot (r_nw); it recovers once the branch
// current falls back to i_r. l_nw is the kinetic inductance of the wire.
struct SnwParams {
    double i_c = 30e-6;
    double i_r = 20e-6;
    double r_nw = 5e3;
    double l_nw = 10e-9;

    void validate() const {
        if (!(i_c > 0.0 && i_r > 0.0 && r_nw > 0.0 && l_nw > 0.0))
            throw std::invalid_argument("SnwParams: all parameters must be positive");
        if (!(i_r < i_c))
            throw std::invalid_argument("SnwParams: retrapping current must be below critical current");
    }
};

enum class SnwPhase { Superconducting, Normal };

struct SnwState {
    SnwPhase phase = SnwPhase::Superconducting;
    double branch_current = 0.0;
};

// Superconducting memristor: non-volatile two-state resistor. gamma0_deg is
// the compact-model phase constant reported alongside the resistance levels;
// the two-state abstraction carries it as metadata only.
struct SmParams {
    double r_lrs = 14.4e-3;
    double r_hrs = 98e-3;
    double gamma0_deg = 60.0;

    void validate() const {
        if (!(r_lrs > 0.0 && r_hrs > 0.0))
            throw std::invalid_argument("SmParams: resistances must be positive");
        if (!(r_lrs < r_hrs))
            throw std::invalid_argument("SmParams: r_lrs must be strictly below r_hrs");
    }
};

enum class SmLevel { LRS, HRS };

struct SmState {
    SmLevel level = SmLevel::LRS;
};

// Heater cryotron: heater current at or above threshold suppresses
// superconductivity in the channel.
struct HtronParams {
    double i_heater_th = 50e-6;

    void validate() const {
        if (!(i_heater_th > 0.0))
            throw std::invalid_argument("HtronParams: heater threshold must be positive");
    }
};

enum class HtronChannel { SuperconductingCapable, Suppressed };

double sm_resistance(const SmState& state, const SmParams& params);

// Hotspot switch rule: Superconducting -> Normal iff |i| >= i_c,
// Normal -> Superconducting iff |i| <= i_r, unchanged in between.
SnwState snw_transition(const SnwState& state, double i_through, const SnwParams& params);

HtronChannel htron_channel_state(double i_heater, const HtronParams& params);

inline const char* to_string(SmLevel level) { return level == SmLevel::LRS ? "LRS" : "HRS"; }
inline const char* to_string(SnwPhase phase) {
    return phase == SnwPhase::Superconducting ? "Superconducting" : "Normal";
}

}  // namespace smnet
