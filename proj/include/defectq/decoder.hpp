#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "defectq/lattice.hpp"
#include "defectq/noise.hpp"
#include "defectq/schedule.hpp"

namespace defectq {

// One Monte Carlo sweep of the whole circuit: residual error per device
// plus the stabilizer measurement record.
struct TrialState {
    std::vector<uint8_t> res_x, res_z;          // residual Pauli per device
    std::vector<std::vector<int8_t>> syndrome;  // per stab: +1/-1 per measurement
};

TrialState run_trial(const WholeCircuit& w, int n_sites, const ErrorModel& m, Rng& rng);

// Noise-free sweep support: run the circuit ideally and inject one Pauli
// right after the given gate (bits on the gate's one or two devices).
TrialState run_trial_injected(const WholeCircuit& w, int n_sites, size_t gate_index,
                              bool x0, bool z0, bool x1, bool z1);

// Space-time decoding graph. Vertices are individual stabilizer
// measurements; an edge carries the probability that a single error
// location flips exactly its two endpoints (or one endpoint and the
// boundary), and the data correction it implies.
struct NestEdge {
    int u = -1, v = -1; // vertex ids; -1 is the boundary
    double prob = 0;
    double weight = 0;
    std::vector<int> correction; // home data sites whose frame bit flips
};

struct Nest {
    StabKind side = StabKind::Z; // Z-side vertices detect X residuals
    int n_vertices = 0;
    std::vector<int> stab_of, index_of; // vertex -> (stab, measurement index)
    std::vector<int> offset;            // per stab: first vertex id, -1 if other side
    std::vector<NestEdge> edges;
    std::vector<std::vector<int>> adj; // vertex -> incident edge ids
    int vertex(int stab, int k) const { return offset[stab] + k; }
};

Nest build_nest(const Lattice& l, const std::vector<StabilizerCircuit>& circs,
                const WholeCircuit& w, const ErrorModel& m, StabKind side);

struct DetectionEvent {
    int stab;
    int meas_index;
};
// consecutive-measurement differences; the first measurement is compared
// against the ideal +1
std::vector<DetectionEvent> extract_events(const TrialState& t, StabKind side,
                                           const std::vector<StabilizerCircuit>& circs);

struct Matching {
    std::vector<std::pair<int, int>> pairs; // event-index pairs
    std::vector<int> to_boundary;           // event indexes matched to boundary
    double total_weight = 0;
};

// exact minimum-weight perfect matching over events plus per-event virtual
// boundary copies (interconnected at zero weight)
Matching mwpm(const std::vector<int>& event_vertices, const Nest& nest);

// test oracle: exhaustive minimum over all pairings
Matching mwpm_brute_force(const std::vector<int>& event_vertices, const Nest& nest);

// Full decoding context for one lattice.
struct DecoderContext {
    Lattice lattice;
    StabilizerLayout layout;
    std::vector<StabilizerCircuit> circuits;
    WholeCircuit whole;
    ErrorModel model;
    Nest nest_x; // over Z stabilizers, corrects X residuals
    Nest nest_z;
    LogicalOps logicals;
};

DecoderContext build_context(const Lattice& l, double p, int cycles);

// Sliding-window decode of a finished trial: matches each side's events,
// converts matched paths to corrections, retires rounds while retaining
// events whose pair is still live, and returns the accumulated frame.
PauliFrame decode_trial(const DecoderContext& ctx, const TrialState& t);

struct LogicalVerdict {
    bool x_error = false, z_error = false;
};
// perfect extraction, final correction, then the logical-operator test
LogicalVerdict assess_logical(const DecoderContext& ctx, const TrialState& t,
                              const PauliFrame& frame);

struct RateResult {
    long trials = 0;
    long x_errors = 0, z_errors = 0, either = 0;
    double cycles_per_trial = 0;
    double x_rate_per_cycle() const { return rate_per(1.0, x_errors); }
    // The reported curves normalize per decoding window of d rounds, the
    // same quantity the reference simulations plot.
    double x_rate_per_window(int d) const { return rate_per(double(d), x_errors); }
    double z_rate_per_cycle() const { return rate_per(1.0, z_errors); }

    double rate_per(double span, long errs) const {
        if (!trials || cycles_per_trial == 0) return 0;
        double p_trial = double(errs) / trials;
        // decorrelate the per-trial flip probability down to `span` cycles
        double inner = 1.0 - 2.0 * std::min(p_trial, 0.499999);
        return 0.5 * (1.0 - std::pow(inner, span / cycles_per_trial));
    }
};

RateResult logical_error_rate(const DecoderContext& ctx, long trials, uint64_t seed);
RateResult logical_error_rate_serial(const DecoderContext& ctx, long trials, uint64_t seed);

std::string nest_to_json(const Nest& nest);

} // namespace defectq
