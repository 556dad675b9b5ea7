#include "defectq/lattice.hpp"
#include "defectq/pauli.hpp"
#include "doctest.h"

using namespace defectq;

namespace {

PauliString operator_of(const Lattice& l, const StabilizerSpec& s) {
    PauliString p(l.sites());
    for (int m : s.members) {
        if (s.kind == StabKind::Z)
            p.set_z(m, true);
        else
            p.set_x(m, true);
    }
    return p;
}

} // namespace

TEST_CASE("perfect lattice counts") {
    auto l5 = generate_perfect(5);
    CHECK(l5.sites() == 81);
    CHECK(l5.count(Role::Data, Status::Working) == 41);
    CHECK(l5.count(Role::Ancilla, Status::Working) == 40);

    auto l3 = generate_perfect(3);
    CHECK(l3.sites() == 25);
    CHECK(l3.count(Role::Data, Status::Working) == 13);
    CHECK(l3.count(Role::Ancilla, Status::Working) == 12);

    for (int d : {7, 9, 13, 17})
        CHECK(generate_perfect(d).sites() == (2 * d - 1) * (2 * d - 1));

    CHECK_THROWS(generate_perfect(4));
    CHECK_THROWS(generate_perfect(1));
}

TEST_CASE("perfect lattice reconfiguration") {
    auto l = generate_perfect(5);
    auto layout = reconfigure(l);
    CHECK(layout.of_kind(StabKind::Z).size() == 20);
    CHECK(layout.of_kind(StabKind::X).size() == 20);
    for (const auto& s : layout.stabilizers) CHECK(s.merged_from == 1);

    auto enc = encodability_check(l, layout);
    CHECK(enc.encodable);
    CHECK(enc.reduced_d_x == 5);
    CHECK(enc.reduced_d_z == 5);
}

TEST_CASE("single central fault metrics") {
    auto l = generate_perfect(5);
    l.status[l.idx(4, 4)] = Status::Faulty; // the central data device
    auto layout = reconfigure(l);
    auto zs = layout.of_kind(StabKind::Z);
    CHECK(zs.size() == 19);
    CHECK(layout.stabilizers.size() == 38);

    int biggest = 0, total = 0;
    for (auto* s : zs) {
        biggest = std::max(biggest, int(s->members.size()));
        total += int(s->members.size());
    }
    CHECK(biggest == 6);
    CHECK(total == 70); // average 70/19 = 3.684

    auto enc = encodability_check(l, layout);
    CHECK(enc.encodable);
    CHECK(enc.reduced_d_x == 4);

    // merged superunit shows up once per type
    int merged = 0;
    for (const auto& s : layout.stabilizers)
        if (s.merged_from == 2) merged++;
    CHECK(merged == 2);
}

TEST_CASE("two-plaquette example operators commute") {
    // a merged Z over six qubits and a merged X over six qubits sharing an
    // even number of data qubits always commute
    auto l = generate_perfect(5);
    l.status[l.idx(4, 4)] = Status::Faulty;
    auto layout = reconfigure(l);
    for (const auto& a : layout.stabilizers)
        for (const auto& b : layout.stabilizers)
            CHECK(operator_of(l, a).commutes_with(operator_of(l, b)));
}

TEST_CASE("yield application is reproducible and calibrated") {
    auto base = generate_perfect(5);
    auto a = apply_yield(base, 0.95, 42);
    auto b = apply_yield(base, 0.95, 42);
    CHECK(a.status == b.status);
    CHECK(apply_yield(base, 1.0, 7).count(Role::Data, Status::Faulty) == 0);

    double total = 0;
    for (uint64_t s = 0; s < 30; s++) {
        auto l = apply_yield(base, 0.95, 1000 + s);
        total += l.count(Role::Data, Status::Faulty) + l.count(Role::Ancilla, Status::Faulty);
    }
    double mean = total / 30.0; // expect about 81 * 0.05 = 4.05; paper reports 3.8
    CHECK(mean > 2.5);
    CHECK(mean < 5.7);
}

TEST_CASE("boundary fault removal advances the boundary") {
    auto l = generate_perfect(5);
    l.status[l.idx(0, 4)] = Status::Faulty; // north-row data qubit
    auto layout = reconfigure(l);
    CHECK(layout.removed_z == 1);
    CHECK(layout.of_kind(StabKind::Z).size() == 19);
    // X side merges instead: the fault is interior for X stabilizers
    CHECK(layout.of_kind(StabKind::X).size() == 19);
    auto enc = encodability_check(l, layout);
    CHECK(enc.encodable);
    CHECK(enc.reduced_d_x == 4);
}

TEST_CASE("fault chain spanning west to east kills encodability") {
    auto l = generate_perfect(5);
    // data chain across the middle row: (4,0), (4,2), (4,4), (4,6), (4,8)
    for (int c = 0; c <= 8; c += 2) l.status[l.idx(4, c)] = Status::Faulty;
    auto layout = reconfigure(l);
    auto enc = encodability_check(l, layout);
    CHECK_FALSE(enc.encodable);
}

TEST_CASE("encodable fraction at y=0.95") {
    // paper sees 28-30 of 30 encodable at d=5, y=0.95
    auto base = generate_perfect(5);
    int encodable = 0;
    for (uint64_t s = 0; s < 30; s++) {
        auto l = apply_yield(base, 0.95, 500 + s);
        auto enc = encodability_check(l, reconfigure(l));
        encodable += enc.encodable;
    }
    CHECK(encodable >= 24);
}

TEST_CASE("reconfigured operators stay abelian on random lattices") {
    auto base = generate_perfect(5);
    for (uint64_t s = 0; s < 20; s++) {
        auto l = apply_yield(base, 0.9, 900 + s);
        auto layout = reconfigure(l);
        for (size_t i = 0; i < layout.stabilizers.size(); i++)
            for (size_t j = i + 1; j < layout.stabilizers.size(); j++)
                CHECK(operator_of(l, layout.stabilizers[i])
                          .commutes_with(operator_of(l, layout.stabilizers[j])));
        // membership conservation: every working data qubit in <= 2 per type
        std::vector<int> zcount(l.sites(), 0), xcount(l.sites(), 0);
        for (const auto& st : layout.stabilizers)
            for (int m : st.members) (st.kind == StabKind::Z ? zcount : xcount)[m]++;
        for (int i = 0; i < l.sites(); i++) {
            CHECK(zcount[i] <= 2);
            CHECK(xcount[i] <= 2);
        }
    }
}

TEST_CASE("json round trip") {
    auto l = apply_yield(generate_perfect(5), 0.9, 3);
    auto text = l.to_json();
    auto back = Lattice::from_json(text);
    CHECK(back.distance == l.distance);
    CHECK(back.seed == l.seed);
    CHECK(back.status == l.status);
}

TEST_CASE("logical operators anticommute and commute with stabilizers") {
    for (uint64_t s : {0ull, 11ull, 12ull}) {
        auto l = s == 0 ? generate_perfect(5) : apply_yield(generate_perfect(5), 0.95, s);
        auto layout = reconfigure(l);
        auto enc = encodability_check(l, layout);
        if (!enc.encodable) continue;
        auto ops = logical_operators(l, layout);
        PauliString lx(l.sites()), lz(l.sites());
        for (int q : ops.logical_x) lx.set_x(q, true);
        for (int q : ops.logical_z) lz.set_z(q, true);
        CHECK_FALSE(lx.commutes_with(lz));
        for (const auto& st : layout.stabilizers) {
            CHECK(lx.commutes_with(operator_of(l, st)));
            CHECK(lz.commutes_with(operator_of(l, st)));
        }
        CHECK(int(ops.logical_x.size()) >= enc.reduced_d_x);
        CHECK(int(ops.logical_z.size()) >= enc.reduced_d_z);
    }
}
