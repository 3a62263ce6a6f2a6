#include "smnet/transient.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>

namespace smnet {

namespace {

// Kinetic inductance assigned to switch branches so a superconducting switch
// is a true zero-resistance (inductive) path and its branch current is a
// well-defined state variable. Small against every cell inductance.
constexpr double kSwitchInductance = 10e-12;

constexpr double kResidualTolerance = 1e-9;

struct DenseLu {
    int n = 0;
    std::vector<double> a;    // row-major LU factors
    std::vector<int> perm;    // row permutation

    // Factори with partial pivoting. Returns the elimination column of the
    // first near-zero pivot, or -1 on success.
    int factor(const std::vector<double>& matrix, int dim) {
        n = dim;
        a = matrix;
        perm.resize(static_cast<std::size_t>(n));
        double max_entry = 0.0;
        for (double v : a) max_entry = std::max(max_entry, std::abs(v));
        const double tol = std::max(max_entry, 1.0) * 1e-13;
        for (int k = 0; k < n; ++k) {
            int piv = k;
            double best = std::abs(a[static_cast<std::size_t>(k * n + k)]);
            for (int r = k + 1; r < n; ++r) {
                const double cand = std::abs(a[static_cast<std::size_t>(r * n + k)]);
                if (cand > best) {
                    best = cand;
                    piv = r;
                }
            }
            if (best <= tol) return k;
            perm[static_cast<std::size_t>(k)] = piv;
            if (piv != k) {
                for (int c = 0; c < n; ++c)
                    std::swap(a[static_cast<std::size_t>(k * n + c)], a[static_cast<std::size_t>(piv * n + c)]);
            }
            const double inv_piv = 1.0 / a[static_cast<std::size_t>(k * n + k)];
            for (int r = k + 1; r < n; ++r) {
                const double f = a[static_cast<std::size_t>(r * n + k)] * inv_piv;
                a[static_cast<std::size_t>(r * n + k)] = f;
                if (f != 0.0) {
                    for (int c = k + 1; c < n; ++c)
                        a[static_cast<std::size_t>(r * n + c)] -= f * a[static_cast<std::size_t>(k * n + c)];
                }
            }
        }
        return -1;
    }

    void solve(std::vector<double>& x) const {
        for (int k = 0; k < n; ++k) {
            const int piv = perm[static_cast<std::size_t>(k)];
            if (piv != k) std::swap(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(piv)]);
            const double xk = x[static_cast<std::size_t>(k)];
            if (xk != 0.0) {
                for (int r = k + 1; r < n; ++r)
                    x[static_cast<std::size_t>(r)] -= a[static_cast<std::size_t>(r * n + k)] * xk;
            }
        }
        for (int k = n - 1; k >= 0; --k) {
            double s = x[static_cast<std::size_t>(k)];
            for (int c = k + 1; c < n; ++c)
                s -= a[static_cast<std::size_t>(k * n + c)] * x[static_cast<std::size_t>(c)];
            x[static_cast<std::size_t>(k)] = s / a[static_cast<std::size_t>(k * n + k)];
        }
    }
};

struct Branch {
    int pos;
    int neg;
    double g = 0.0;          // companion conductance for the current state
    double rcoef = 0.0;      // history coefficient: i = g*v + rcoef*i_prev
    double current = 0.0;    // branch current state
    bool has_history = false;
};

enum class SignalKind { NodeVoltage, BranchCurrent };

struct Probe {
    SignalKind kind;
    int index;  // node index or element index
};

}  // namespace

const std::vector<double>& Waveform::signal(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return samples[i];
    }
    throw std::invalid_argument("unknown signal id: " + name);
}

bool Waveform::has_signal(const std::string& name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::string Waveform::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "time";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    const std::size_t rows = size();
    for (std::size_t k = 0; k < rows; ++k) {
        out << (static_cast<double>(k + 1) * dt);
        for (const auto& col : samples) out << ',' << col[k];
        out << '\n';
    }
    return out.str();
}

Waveform run_transient(const Netlist& netlist, double duration, double dt,
                       const TransientOptions& options) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(duration >= dt)) throw std::invalid_argument("duration must cover at least one step");
    netlist.validate();

    const auto& elements = netlist.elements();
    const int n_nodes = netlist.node_count();
    const std::size_t n_elems = elements.size();
    const std::size_t n_steps = static_cast<std::size_t>(std::floor(duration / dt + 0.5));

    // Per-run mutable device state (the netlist stays untouched).
    std::vector<Branch> branches(n_elems);
    std::vector<SnwPhase> snw_phase(n_elems, SnwPhase::Superconducting);
    std::vector<bool> htron_hot(n_elems, false);
    std::vector<int> htron_control(n_elems, -1);
    std::vector<DriveFn> drives(n_elems);
    std::vector<int> switch_elems;  // elements whose state selects the matrix

    for (std::size_t i = 0; i < n_elems; ++i) {
        const Element& e = elements[i];
        branches[i].pos = e.pos;
        branches[i].neg = e.neg;
        if (e.kind == ElementKind::SnwSwitch) {
            snw_phase[i] = e.snw_phase;
            switch_elems.push_back(static_cast<int>(i));
        } else if (e.kind == ElementKind::HtronSwitch) {
            htron_control[i] = netlist.element_index(e.control);
            switch_elems.push_back(static_cast<int>(i));
        }
        if (e.kind == ElementKind::CurrentSource && e.drive) drives[i] = e.drive;
    }
    for (const auto& [name, fn] : options.drives) {
        const int idx = netlist.element_index(name);
        if (idx < 0 || elements[static_cast<std::size_t>(idx)].kind != ElementKind::CurrentSource)
            throw std::invalid_argument("drive override targets unknown source: " + name);
        drives[static_cast<std::size_t>(idx)] = fn;
    }

    // Companion coefficients for the current switch states.
    auto refresh_coefficients = [&]() {
        for (std::size_t i = 0; i < n_elems; ++i) {
            const Element& e = elements[i];
            Branch& b = branches[i];
            switch (e.kind) {
                case ElementKind::CurrentSource:
                    b.g = 0.0;
                    b.rcoef = 0.0;
                    b.has_history = false;
                    break;
                case ElementKind::Resistor:
                    b.g = 1.0 / e.value;
                    b.rcoef = 0.0;
                    b.has_history = false;
                    break;
                case ElementKind::SmResistor:
                    b.g = 1.0 / sm_resistance(SmState{e.sm_level}, e.sm);
                    b.rcoef = 0.0;
                    b.has_history = false;
                    break;
                case ElementKind::Inductor: {
                    b.g = dt / e.value;
                    b.rcoef = 1.0;
                    b.has_history = true;
                    break;
                }
                case ElementKind::SnwSwitch: {
                    const double r = snw_phase[i] == SnwPhase::Normal ? e.snw.r_nw : 0.0;
                    const double gl = dt / kSwitchInductance;
                    b.rcoef = 1.0 / (1.0 + r * gl);
                    b.g = gl * b.rcoef;
                    b.has_history = true;
                    break;
                }
                case ElementKind::HtronSwitch: {
                    const double r = htron_hot[i] ? e.htron_r_normal : 0.0;
                    const double gl = dt / kSwitchInductance;
                    b.rcoef = 1.0 / (1.0 + r * gl);
                    b.g = gl * b.rcoef;
                    b.has_history = true;
                    break;
                }
            }
        }
    };

    const std::size_t dim = static_cast<std::size_t>(n_nodes);
    std::vector<double> matrix(dim * dim, 0.0);
    auto assemble_matrix = [&]() {
        std::fill(matrix.begin(), matrix.end(), 0.0);
        for (std::size_t i = 0; i < n_elems; ++i) {
            const Branch& b = branches[i];
            if (b.g == 0.0) continue;
            if (b.pos >= 0) matrix[static_cast<std::size_t>(b.pos) * dim + static_cast<std::size_t>(b.pos)] += b.g;
            if (b.neg >= 0) matrix[static_cast<std::size_t>(b.neg) * dim + static_cast<std::size_t>(b.neg)] += b.g;
            if (b.pos >= 0 && b.neg >= 0) {
                matrix[static_cast<std::size_t>(b.pos) * dim + static_cast<std::size_t>(b.neg)] -= b.g;
                matrix[static_cast<std::size_t>(b.neg) * dim + static_cast<std::size_t>(b.pos)] -= b.g;
            }
        }
    };

    auto state_key = [&]() {
        std::uint64_t key = 0;
        for (int idx : switch_elems) {
            key <<= 1;
            const std::size_t i = static_cast<std::size_t>(idx);
            const bool hot = elements[i].kind == ElementKind::SnwSwitch
                                 ? snw_phase[i] == SnwPhase::Normal
                                 : htron_hot[i];
            key |= hot ? 1u : 0u;
        }
        return key;
    };

    struct FactoredState {
        DenseLu lu;
        std::vector<double> matrix;
    };
    std::map<std::uint64_t, FactoredState> factor_cache;

    // Branch coefficients must match the current switch states whenever this
    // is called; the factorization itself is reused across revisits.
    auto factor_for_state = [&](std::uint64_t key) -> FactoredState& {
        refresh_coefficients();
        auto it = factor_cache.find(key);
        if (it != factor_cache.end()) return it->second;
        assemble_matrix();
        FactoredState fs;
        fs.matrix = matrix;
        const int bad = fs.lu.factor(matrix, n_nodes);
        if (bad >= 0) {
            // Elimination stalled: report nodes with no resistive/inductive tie.
            std::string nodes;
            for (int nn = 0; nn < n_nodes; ++nn) {
                double diag = matrix[static_cast<std::size_t>(nn) * dim + static_cast<std::size_t>(nn)];
                if (std::abs(diag) < 1e-13) {
                    if (!nodes.empty()) nodes += ", ";
                    nodes += netlist.node_name(nn);
                }
            }
            if (nodes.empty()) nodes = netlist.node_name(bad);
            throw SimulationError("ill-posed netlist: singular nodal matrix (node set: " + nodes + ")");
        }
        return factor_cache.emplace(key, std::move(fs)).first->second;
    };

    // Probes.
    std::vector<std::string> record = options.record;
    if (record.empty()) {
        for (int nn = 0; nn < n_nodes; ++nn) record.push_back("v:" + netlist.node_name(nn));
    }
    std::vector<Probe> probes;
    probes.reserve(record.size());
    for (const auto& name : record) {
        if (name.rfind("v:", 0) == 0) {
            probes.push_back({SignalKind::NodeVoltage, netlist.node(name.substr(2))});
        } else if (name.rfind("i:", 0) == 0) {
            const int idx = netlist.element_index(name.substr(2));
            if (idx < 0) throw std::invalid_argument("unknown signal id: " + name);
            probes.push_back({SignalKind::BranchCurrent, idx});
        } else {
            throw std::invalid_argument("bad signal id (want v:<node> or i:<element>): " + name);
        }
    }

    Waveform wf;
    wf.dt = dt;
    wf.names = record;
    wf.samples.assign(record.size(), {});
    for (auto& col : wf.samples) col.reserve(n_steps);

    std::vector<double> rhs(dim, 0.0);
    std::vector<double> voltage(dim, 0.0);
    std::vector<double> history(n_elems, 0.0);

    std::uint64_t key = state_key();
    FactoredState* fs = &factor_for_state(key);

    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = static_cast<double>(step + 1) * dt;

        std::fill(rhs.begin(), rhs.end(), 0.0);
        double source_scale = 0.0;
        for (std::size_t i = 0; i < n_elems; ++i) {
            const Element& e = elements[i];
            Branch& b = branches[i];
            if (e.kind == ElementKind::CurrentSource) {
                const double amps = drives[i] ? drives[i](t) : e.value;
                source_scale = std::max(source_scale, std::abs(amps));
                if (b.pos >= 0) rhs[static_cast<std::size_t>(b.pos)] += amps;
                if (b.neg >= 0) rhs[static_cast<std::size_t>(b.neg)] -= amps;
            } else if (b.has_history) {
                const double h = b.rcoef * b.current;
                history[i] = h;
                if (b.pos >= 0) rhs[static_cast<std::size_t>(b.pos)] -= h;
                if (b.neg >= 0) rhs[static_cast<std::size_t>(b.neg)] += h;
            } else {
                history[i] = 0.0;
            }
        }

        voltage = rhs;
        fs->lu.solve(voltage);

        for (double v : voltage) {
            if (!std::isfinite(v))
                throw SimulationError("numerical blow-up at step " + std::to_string(step));
        }

        // Kirchhoff residual against the unfactored matrix.
        {
            const double scale = std::max(source_scale, 1e-12);
            double worst = 0.0;
            for (std::size_t r = 0; r < dim; ++r) {
                double acc = 0.0;
                const double* row = fs->matrix.data() + r * dim;
                for (std::size_t c = 0; c < dim; ++c) acc += row[c] * voltage[c];
                worst = std::max(worst, std::abs(acc - rhs[r]));
            }
            if (worst > kResidualTolerance * scale)
                throw SimulationError("numerical blow-up at step " + std::to_string(step) +
                                      ": nodal residual " + std::to_string(worst));
        }

        // Branch currents, then switch transitions from this step's currents.
        for (std::size_t i = 0; i < n_elems; ++i) {
            Branch& b = branches[i];
            if (elements[i].kind == ElementKind::CurrentSource) {
                b.current = drives[i] ? drives[i](t) : elements[i].value;
                continue;
            }
            const double va = b.pos >= 0 ? voltage[static_cast<std::size_t>(b.pos)] : 0.0;
            const double vb = b.neg >= 0 ? voltage[static_cast<std::size_t>(b.neg)] : 0.0;
            b.current = b.g * (va - vb) + history[i];
        }
        bool state_changed = false;
        for (int idx : switch_elems) {
            const std::size_t i = static_cast<std::size_t>(idx);
            const Element& e = elements[i];
            if (e.kind == ElementKind::SnwSwitch) {
                const SnwState next =
                    snw_transition(SnwState{snw_phase[i], 0.0}, branches[i].current, e.snw);
                if (next.phase != snw_phase[i]) {
                    snw_phase[i] = next.phase;
                    state_changed = true;
                }
            } else {
                const int ctl = htron_control[i];
                const double heat = ctl >= 0 ? branches[static_cast<std::size_t>(ctl)].current : 0.0;
                const bool hot = htron_channel_state(heat, e.htron) == HtronChannel::Suppressed;
                if (hot != htron_hot[i]) {
                    htron_hot[i] = hot;
                    state_changed = true;
                }
            }
        }

        for (std::size_t p = 0; p < probes.size(); ++p) {
            const Probe& pr = probes[p];
            double v = 0.0;
            if (pr.kind == SignalKind::NodeVoltage) {
                v = pr.index >= 0 ? voltage[static_cast<std::size_t>(pr.index)] : 0.0;
            } else {
                v = branches[static_cast<std::size_t>(pr.index)].current;
            }
            wf.samples[p].push_back(v);
        }

        if (state_changed) {
            key = state_key();
            fs = &factor_for_state(key);
        }
    }

    return wf;
}

SpikeTrain detect_spikes(const Waveform& waveform, const std::string& signal, double v_threshold,
                         double refractory) {
    if (!(v_threshold > 0.0)) throw std::invalid_argument("spike threshold must be positive");
    if (refractory < 0.0) throw std::invalid_argument("refractory must be non-negative");
    const auto& sig = waveform.signal(signal);
    SpikeTrain train;
    double prev = 0.0;
    double last_spike = -1e300;
    for (std::size_t k = 0; k < sig.size(); ++k) {
        const double cur = sig[k];
        if (prev < v_threshold && cur >= v_threshold) {
            const double t = static_cast<double>(k + 1) * waveform.dt;
            if (t - last_spike >= refractory) {
                train.times.push_back(t);
                last_spike = t;
            }
        }
        prev = cur;
    }
    return train;
}

double integrate_spike_current(const SpikeTrain& spikes, double packet_charge, double window) {
    if (!(window > 0.0)) throw std::invalid_argument("window must be positive");
    return static_cast<double>(spikes.count()) * packet_charge / window;
}

double signal_mean(const Waveform& waveform, const std::string& signal) {
    const auto& sig = waveform.signal(signal);
    if (sig.empty()) return 0.0;
    double acc = 0.0;
    for (double v : sig) acc += v;
    return acc / static_cast<double>(sig.size());
}

}  // namespace smnet
