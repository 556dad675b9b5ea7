#include "defectq/circuit.hpp"
#include "doctest.h"
#include "replay_util.hpp"

using namespace defectq;

namespace {

const StabilizerSpec* find_spec(const StabilizerLayout& layout, StabKind k, size_t members) {
    for (const auto& s : layout.stabilizers)
        if (s.kind == k && s.members.size() == members) return &s;
    return nullptr;
}

// apply the SWAP structure to a device->variable permutation
bool variables_return_home(const StabilizerCircuit& c, const Lattice& l) {
    std::vector<int> perm(l.sites());
    for (int i = 0; i < l.sites(); i++) perm[i] = i;
    for (const auto& e : sorted_by_slot(c.events))
        if (e.gate.kind == GateKind::Swap) std::swap(perm[e.gate.q0], perm[e.gate.q1]);
    // every data variable is back home; ancilla variables may be parked
    // anywhere since they are disentangled between stabilizations
    for (int i = 0; i < l.sites(); i++)
        if (l.data_site(i) && perm[i] != i) return false;
    return true;
}

} // namespace

TEST_CASE("normal plaquette circuits") {
    auto l = generate_perfect(5);
    auto layout = reconfigure(l);
    const auto* z4 = find_spec(layout, StabKind::Z, 4);
    REQUIRE(z4);
    auto c = compose_stabilizer_circuit(l, layout, *z4);
    CHECK(c.events.size() == 6); // INIT, four gathers, MEASURE
    CHECK(c.depth == 6);
    CHECK(circuit_kq(c) == 5 * 6);
    CHECK(circuit_kdq(c, l) == 4 * 6);
    CHECK(c.ancilla_path.size() == 1);

    const auto* x4 = find_spec(layout, StabKind::X, 4);
    REQUIRE(x4);
    auto cx = compose_stabilizer_circuit(l, layout, *x4);
    CHECK(cx.depth == c.depth + 2); // Hadamard wrapping

    const auto* z3 = find_spec(layout, StabKind::Z, 3);
    REQUIRE(z3);
    auto c3 = compose_stabilizer_circuit(l, layout, *z3);
    CHECK(circuit_kdq(c3, l) == 3 * c3.depth);
}

TEST_CASE("empty circuit has zero kq") {
    StabilizerCircuit c;
    CHECK(circuit_kq(c) == 0);
}

TEST_CASE("superunit circuit around a central fault") {
    auto l = generate_perfect(5);
    l.status[l.idx(4, 4)] = Status::Faulty;
    auto layout = reconfigure(l);
    const auto* super = find_spec(layout, StabKind::Z, 6);
    REQUIRE(super);
    auto c = compose_stabilizer_circuit(l, layout, *super);

    // the travel visits both original ancilla devices across the gap
    CHECK(c.ancilla_path.size() == 2);
    CHECK(std::count(c.ancilla_path.begin(), c.ancilla_path.end(), l.idx(3, 4)) == 1);
    CHECK(std::count(c.ancilla_path.begin(), c.ancilla_path.end(), l.idx(5, 4)) == 1);
    CHECK(c.depth == 14); // one op per step along the route
    CHECK(variables_return_home(c, l));

    const auto* normal = find_spec(layout, StabKind::Z, 4);
    CHECK(circuit_kq(c) > circuit_kq(compose_stabilizer_circuit(l, layout, *normal)));

    // symbolic replay: the circuit measures exactly its declared operator
    WholeCircuit w;
    w.measure_slots.assign(1, {});
    for (const auto& e : sorted_by_slot(c.events)) w.gates.push_back({e.gate, e.slot, 0, 0});
    std::vector<StabilizerCircuit> one = {c};
    std::string why;
    CHECK_MESSAGE(replay::all_measurements_match(l, one, w, &why), why);
}

TEST_CASE("every per-stabilizer circuit measures its declared operator") {
    auto l = generate_perfect(5);
    l.status[l.idx(4, 4)] = Status::Faulty;
    l.status[l.idx(2, 1)] = Status::Faulty; // an ancilla fault as well
    auto layout = reconfigure(l);
    for (const auto& spec : layout.stabilizers) {
        auto c = compose_stabilizer_circuit(l, layout, spec);
        WholeCircuit w;
        w.measure_slots.assign(1, {});
        for (const auto& e : sorted_by_slot(c.events)) w.gates.push_back({e.gate, e.slot, 0, 0});
        std::vector<StabilizerCircuit> one = {c};
        std::string why;
        CHECK_MESSAGE(replay::all_measurements_match(l, one, w, &why), why);
        CHECK(variables_return_home(c, l));
    }
}

TEST_CASE("faulty ancilla is served by a neighboring ancilla") {
    auto l = generate_perfect(5);
    l.status[l.idx(3, 4)] = Status::Faulty; // a Z-stabilizer's own ancilla
    auto layout = reconfigure(l);
    // the stabilizer whose home ancilla broke still has its 4 members
    const StabilizerSpec* spec = nullptr;
    for (const auto& s : layout.stabilizers)
        if (s.kind == StabKind::Z && s.ancillas.empty()) spec = &s;
    REQUIRE(spec);
    CHECK(spec->members.size() == 4);
    auto c = compose_stabilizer_circuit(l, layout, *spec);
    CHECK(c.depth > 6); // must travel
    WholeCircuit w;
    w.measure_slots.assign(1, {});
    for (const auto& e : sorted_by_slot(c.events)) w.gates.push_back({e.gate, e.slot, 0, 0});
    std::vector<StabilizerCircuit> one = {c};
    std::string why;
    CHECK_MESSAGE(replay::all_measurements_match(l, one, w, &why), why);
}

TEST_CASE("held-karp matches exhaustive search") {
    Rng rng(99);
    for (int trial = 0; trial < 60; trial++) {
        int n = 2 + int(rng.next_below(7)); // up to 8 nodes
        std::vector<std::vector<int>> d(n, std::vector<int>(n, 0));
        for (int i = 0; i < n; i++)
            for (int j = i + 1; j < n; j++) d[i][j] = d[j][i] = 1 + int(rng.next_below(20));
        std::vector<int> order;
        CHECK(tsp_held_karp(d, order) == tsp_brute_force(d));
        CHECK(int(order.size()) == n);
    }
}

TEST_CASE("composition is deterministic") {
    auto l = apply_yield(generate_perfect(5), 0.93, 17);
    auto layout = reconfigure(l);
    if (!encodability_check(l, layout).encodable) return;
    for (const auto& spec : layout.stabilizers) {
        auto a = compose_stabilizer_circuit(l, layout, spec);
        auto b = compose_stabilizer_circuit(l, layout, spec);
        REQUIRE(a.events.size() == b.events.size());
        for (size_t i = 0; i < a.events.size(); i++) {
            CHECK(a.events[i].slot == b.events[i].slot);
            CHECK(a.events[i].gate.kind == b.events[i].gate.kind);
            CHECK(a.events[i].gate.q0 == b.events[i].gate.q0);
            CHECK(a.events[i].gate.q1 == b.events[i].gate.q1);
        }
    }
}
