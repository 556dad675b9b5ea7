#include "defectq/schedule.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace defectq {

namespace {

struct Span {
    int lo, hi;
    int circ, inst;
};

struct Booking {
    // per device: occupied slots and committed instance spans
    std::map<int, std::map<int, std::pair<int, int>>> occupied; // device -> slot -> (circ,inst)
    std::map<int, std::vector<Span>> spans;
    std::map<std::pair<int, int>, int> instance_end; // (circ,inst) -> last slot

    const Span* span_hit(int device, int slot) const {
        auto it = spans.find(device);
        if (it == spans.end()) return nullptr;
        for (const auto& s : it->second)
            if (slot >= s.lo && slot <= s.hi) return &s;
        return nullptr;
    }
    // rescheduling happens after the blocking stabilizer finishes
    int blocker_finish(const Span& s) const { return instance_end.at({s.circ, s.inst}); }
};

struct Tentative {
    std::vector<int> slots; // per event
    int start = 0, end = 0; // [first slot, last slot]
};

// shared data members between circuit pairs, for the commutation-order rule
struct SharedAccess {
    std::vector<std::pair<int, std::vector<int>>> partners; // circ index -> shared sites
};

int gather_slot(const StabilizerCircuit& c, const Tentative& t, int site) {
    for (size_t k = 0; k < c.events.size(); k++) {
        const auto& g = c.events[k].gate;
        if (g.kind != GateKind::Cnot) continue;
        int data = c.kind == StabKind::Z ? g.q0 : g.q1;
        if (data == site) return t.slots[k];
    }
    return -1;
}

} // namespace

WholeCircuit schedule(const std::vector<StabilizerCircuit>& circuits, int max_steps,
                      const Lattice& l) {
    std::vector<bool> anc(l.sites(), false);
    for (int i = 0; i < l.sites(); i++) anc[i] = !l.data_site(i);
    return schedule(circuits, max_steps, anc);
}

WholeCircuit schedule(const std::vector<StabilizerCircuit>& circuits, int max_steps,
                      const std::vector<bool>& ancilla_role) {
    if (circuits.empty()) throw HorizonError("no circuits to schedule");
    const int n = int(circuits.size());

    // priority: deepest first, top-left (lowest site index) breaking ties
    std::vector<int> order(n);
    for (int i = 0; i < n; i++) order[i] = i;
    auto min_site = [&](int i) {
        int m = INT32_MAX;
        for (const auto& e : circuits[i].events) {
            m = std::min(m, e.gate.q0);
            if (e.gate.two_qubit()) m = std::min(m, e.gate.q1);
        }
        return m;
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (circuits[a].depth != circuits[b].depth) return circuits[a].depth > circuits[b].depth;
        return min_site(a) < min_site(b);
    });

    // precompute commutation-order partners (shared >= 2 data members)
    std::vector<SharedAccess> shared(n);
    for (int i = 0; i < n; i++)
        for (int j = i + 1; j < n; j++) {
            std::vector<int> common;
            std::set_intersection(circuits[i].members.begin(), circuits[i].members.end(),
                                  circuits[j].members.begin(), circuits[j].members.end(),
                                  std::back_inserter(common));
            if (common.size() >= 2) {
                shared[i].partners.push_back({j, common});
                shared[j].partners.push_back({i, common});
            }
        }

    Booking book;
    WholeCircuit out;
    out.measure_slots.assign(n, {});
    std::vector<int> next_start(n, 0), ceil_of(n, 0), instances(n, 0);
    // committed gather slots per (circ, instance)
    std::vector<std::vector<std::map<int, int>>> gathers(n);

    auto try_place = [&](int ci, int start, Tentative& t) -> int {
        // returns -1 on success, else the slot to restart from
        const auto& c = circuits[ci];
        t.slots.assign(c.events.size(), 0);
        std::map<int, int> dev_next;
        std::map<int, int> my_first;
        for (size_t k = 0; k < c.events.size(); k++) {
            const auto& g = c.events[k].gate;
            int devs[2] = {g.q0, g.two_qubit() ? g.q1 : -1};
            // keep the composed slot pattern; waiting only under conflicts
            int slot = start + c.events[k].slot;
            for (int d : devs)
                if (d >= 0 && dev_next.count(d)) slot = std::max(slot, dev_next[d]);
            // resolve conflicts
            for (;;) {
                bool clash = false;
                for (int d : devs) {
                    if (d < 0) continue;
                    if (const Span* s = book.span_hit(d, slot)) {
                        // waiting cannot cross another instance's span
                        return book.blocker_finish(*s) + 1;
                    }
                    auto oc = book.occupied.find(d);
                    if (oc != book.occupied.end()) {
                        auto hit = oc->second.find(slot);
                        if (hit != oc->second.end()) {
                            // waiting does not work for syndrome qubits:
                            // the whole stabilizer is rescheduled instead
                            if (ancilla_role[d])
                                return book.instance_end.at(hit->second) + 1;
                            clash = true;
                        }
                    }
                }
                if (!clash) break;
                slot++; // identity insertion: wait for the data qubit
            }
            // stretching our own device span across a foreign gate is the
            // syndrome-qubit conflict: reschedule after the blocker
            for (int d : devs) {
                if (d < 0 || !my_first.count(d)) continue;
                auto oc = book.occupied.find(d);
                if (oc == book.occupied.end()) continue;
                auto it = oc->second.lower_bound(my_first[d]);
                if (it != oc->second.end() && it->first < slot) {
                    int blocker_end = it->first;
                    if (const Span* s = book.span_hit(d, it->first))
                        blocker_end = book.blocker_finish(*s);
                    return blocker_end + 1;
                }
            }
            t.slots[k] = slot;
            for (int d : devs)
                if (d >= 0) {
                    dev_next[d] = slot + 1;
                    if (!my_first.count(d)) my_first[d] = slot;
                }
        }
        t.start = *std::min_element(t.slots.begin(), t.slots.end());
        t.end = *std::max_element(t.slots.begin(), t.slots.end());

        // commutation-order rule: stabilizers sharing two or more data
        // qubits must access them in the same relative order
        for (const auto& [pj, sites] : shared[ci].partners) {
            for (size_t inst = 0; inst < gathers[pj].size(); inst++) {
                int dir = 0;
                int restart = -1;
                for (int q : sites) {
                    auto it = gathers[pj][inst].find(q);
                    if (it == gathers[pj][inst].end()) continue;
                    int mine = gather_slot(circuits[ci], t, q);
                    if (mine < 0) continue;
                    int d = mine < it->second ? -1 : +1;
                    restart = std::max(restart, it->second + 1);
                    if (dir == 0)
                        dir = d;
                    else if (dir != d)
                        return restart;
                }
            }
        }
        return -1;
    };

    auto place = [&](int ci) {
        const auto& c = circuits[ci];
        int start = next_start[ci];
        Tentative t;
        for (int guard = 0; guard < 100000; guard++) {
            int restart = try_place(ci, start, t);
            if (restart < 0) {
                // commit
                int inst = instances[ci]++;
                gathers[ci].push_back({});
                for (size_t k = 0; k < c.events.size(); k++) {
                    const auto& g = c.events[k].gate;
                    out.gates.push_back({g, t.slots[k], ci, inst});
                    book.occupied[g.q0][t.slots[k]] = {ci, inst};
                    if (g.two_qubit()) book.occupied[g.q1][t.slots[k]] = {ci, inst};
                    if (g.kind == GateKind::MeasureZ) out.measure_slots[ci].push_back(t.slots[k]);
                    if (g.kind == GateKind::Cnot) {
                        int data = c.kind == StabKind::Z ? g.q0 : g.q1;
                        bool is_member = std::binary_search(c.members.begin(), c.members.end(), data);
                        if (is_member) gathers[ci].back()[data] = t.slots[k];
                    }
                }
                // record device spans of this instance
                std::map<int, std::pair<int, int>> lohi;
                for (size_t k = 0; k < c.events.size(); k++) {
                    const auto& g = c.events[k].gate;
                    for (int d : {g.q0, g.two_qubit() ? g.q1 : -1}) {
                        if (d < 0) continue;
                        auto [it, fresh] = lohi.try_emplace(d, t.slots[k], t.slots[k]);
                        if (!fresh) {
                            it->second.first = std::min(it->second.first, t.slots[k]);
                            it->second.second = std::max(it->second.second, t.slots[k]);
                        }
                    }
                }
                for (const auto& [d, lh] : lohi)
                    book.spans[d].push_back({lh.first, lh.second, ci, inst});
                book.instance_end[{ci, inst}] = t.end;
                next_start[ci] = t.end + 1;
                ceil_of[ci] = t.end + 1;
                return t.end + 1;
            }
            start = std::max(start + 1, restart);
        }
        throw HorizonError("scheduler failed to converge");
    };

    int deepest = order[0];
    std::vector<int> rest(order.begin() + 1, order.end());
    int whole_ceil = 0;
    bool first_pass = true;
    while (whole_ceil <= max_steps) {
        whole_ceil = place(deepest);
        for (int s : rest) place(s);
        (void)first_pass;
        for (;;) {
            bool pending = false;
            for (int s : rest)
                if (ceil_of[s] <= whole_ceil) {
                    place(s);
                    pending = true;
                }
            if (!pending) break;
        }
    }

    std::stable_sort(out.gates.begin(), out.gates.end(),
                     [](const ScheduledGate& a, const ScheduledGate& b) { return a.slot < b.slot; });
    for (const auto& g : out.gates) {
        out.horizon = std::max(out.horizon, g.slot + 1);
        out.n_sites = std::max({out.n_sites, g.gate.q0 + 1, g.gate.two_qubit() ? g.gate.q1 + 1 : 0});
    }
    for (auto& m : out.measure_slots) std::sort(m.begin(), m.end());

    // error-correction cycle boundaries: every stabilizer measured at least
    // once since the previous boundary
    int t_prev = -1;
    for (;;) {
        int boundary = -1;
        for (int i = 0; i < n; i++) {
            auto it = std::upper_bound(out.measure_slots[i].begin(), out.measure_slots[i].end(),
                                       t_prev);
            if (it == out.measure_slots[i].end()) {
                boundary = -2;
                break;
            }
            boundary = std::max(boundary, *it);
        }
        if (boundary < 0) break;
        out.cycle_boundaries.push_back(boundary);
        t_prev = boundary;
    }
    return out;
}

double WholeCircuit::average_cycle(int stab_index) const {
    const auto& m = measure_slots[stab_index];
    if (m.size() < 2) throw HorizonError("fewer than two measurements in horizon");
    double sum = 0;
    for (size_t i = 1; i < m.size(); i++) sum += m[i] - m[i - 1];
    return sum / double(m.size() - 1);
}

double WholeCircuit::average_ec_cycle() const {
    if (cycle_boundaries.size() < 2) throw HorizonError("not enough correction cycles");
    double sum = 0;
    for (size_t i = 1; i < cycle_boundaries.size(); i++)
        sum += cycle_boundaries[i] - cycle_boundaries[i - 1];
    return sum / double(cycle_boundaries.size() - 1);
}

std::string whole_circuit_to_json(const WholeCircuit& w) {
    nlohmann::json j;
    j["horizon"] = w.horizon;
    nlohmann::json events = nlohmann::json::array();
    for (const auto& g : w.gates) {
        const char* name = "";
        switch (g.gate.kind) {
            case GateKind::InitZ: name = "INIT"; break;
            case GateKind::H: name = "H"; break;
            case GateKind::Cnot: name = "CNOT"; break;
            case GateKind::Swap: name = "SWAP"; break;
            case GateKind::MeasureZ: name = "MEASURE"; break;
            case GateKind::Identity: name = "I"; break;
        }
        nlohmann::json qubits = nlohmann::json::array();
        qubits.push_back(g.gate.q0);
        if (g.gate.two_qubit()) qubits.push_back(g.gate.q1);
        events.push_back(
            {{"slot", g.slot}, {"gate", name}, {"qubits", qubits}, {"stabilizer_id", g.stab_index}});
    }
    j["events"] = events;
    return j.dump();
}

} // namespace defectq
