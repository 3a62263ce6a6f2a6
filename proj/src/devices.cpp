#include "smnet/devices.hpp"

#include <cmath>

namespace smnet {

double sm_resistance(const SmState& state, const SmParams& params) {
    return state.level == SmLevel::LRS ? params.r_lrs : params.r_hrs;
}

SnwState snw_transition(const SnwState& state, double i_through, const SnwParams& params) {
    SnwState next = state;
    next.branch_current = i_through;
    const double mag = std::abs(i_through);
    if (state.phase == SnwPhase::Superconducting) {
        if (mag >= params.i_c) next.phase = SnwPhase::Normal;
    } else {
        if (mag <= params.i_r) next.phase = SnwPhase::Superconducting;
    }
    return next;
}

HtronChannel htron_channel_state(double i_heater, const HtronParams& params) {
    return std::abs(i_heater) >= params.i_heater_th ? HtronChannel::Suppressed
                                                    : HtronChannel::SuperconductingCapable;
}

}  // namespace smnet
