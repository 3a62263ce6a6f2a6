#pragma once

#include <string>
#include <utility>
#include <vector>

#include "smnet/netlist.hpp"

namespace smnet {

// Thrown on numerical failures: singular nodal matrix ("ill-posed netlist",
// names the offending node set) or non-finite values ("numerical blow-up",
// carries the step index).
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sampled node voltages / branch currents, one column per requested signal.
// Sample k holds the solution at t = (k + 1) * dt.
struct Waveform {
    double dt = 0.0;
    std::vector<std::string> names;            // "v:<node>" or "i:<element>"
    std::vector<std::vector<double>> samples;  // names.size() columns, equal length

    std::size_t size() const { return samples.empty() ? 0 : samples[0].size(); }
    const std::vector<double>& signal(const std::string& name) const;
    bool has_signal(const std::string& name) const;

    // CSV with a leading time column, one row per sample.
    std::string to_csv() const;
};

struct SpikeTrain {
    std::vector<double> times;  // strictly increasing
    int count() const { return static_cast<int>(times.size()); }
};

struct TransientOptions {
    // Signals to record; empty records every node voltage.
    std::vector<std::string> record;
    // Per-source drive overrides applied on top of the netlist description.
    std::vector<std::pair<std::string, DriveFn>> drives;
};

// Fixed-timestep implicit (backward-Euler companion) transient solve.
// Inductive branches use companion conductances; switch resistances are
// re-evaluated each step from that step's solved branch currents. The
// netlist itself is not mutated, so identical inputs give identical output.
Waveform run_transient(const Netlist& netlist, double duration, double dt,
                       const TransientOptions& options = {});

// One spike per upward threshold crossing; crossings within `refractory`
// seconds of an accepted spike are ignored.
SpikeTrain detect_spikes(const Waveform& waveform, const std::string& signal, double v_threshold,
                         double refractory);

// Equivalent DC current of `count` charge packets spread over `window`.
double integrate_spike_current(const SpikeTrain& spikes, double packet_charge, double window);

// Mean of a recorded signal over the whole waveform (used for delivered-
// current measurements in characterization).
double signal_mean(const Waveform& waveform, const std::string& signal);

}  // namespace smnet
