#pragma once

#include <algorithm>
#include <vector>

#include "defectq/pauli.hpp"

namespace defectq {

struct GateEvent {
    CliffordGate gate;
    int slot = 0; // time-step index, >= 0
};

inline int circuit_depth(const std::vector<GateEvent>& events) {
    int hi = -1;
    for (const auto& e : events) hi = std::max(hi, e.slot);
    return hi + 1;
}

inline std::vector<int> circuit_qubits(const std::vector<GateEvent>& events) {
    std::vector<int> qs;
    for (const auto& e : events) {
        qs.push_back(e.gate.q0);
        if (e.gate.two_qubit()) qs.push_back(e.gate.q1);
    }
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    return qs;
}

// Space-time product: distinct qubits touched times depth.
inline long long circuit_kq(const std::vector<GateEvent>& events) {
    if (events.empty()) return 0;
    return (long long)circuit_qubits(events).size() * circuit_depth(events);
}

inline std::vector<GateEvent> sorted_by_slot(std::vector<GateEvent> events) {
    std::stable_sort(events.begin(), events.end(),
                     [](const GateEvent& a, const GateEvent& b) { return a.slot < b.slot; });
    return events;
}

} // namespace defectq
