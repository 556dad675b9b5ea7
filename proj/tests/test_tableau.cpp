#include "defectq/tableau.hpp"
#include "doctest.h"

using namespace defectq;

namespace {

PauliString rand_pauli(int n, Rng& rng) {
    PauliString p(n);
    for (int q = 0; q < n; q++) {
        p.set_x(q, rng.bernoulli(0.5));
        p.set_z(q, rng.bernoulli(0.5));
    }
    if (rng.bernoulli(0.5)) p.set_phase_pow(2);
    return p;
}

} // namespace

TEST_CASE("determined measurement leaves tableau unchanged") {
    StabilizerTableau t(1);
    t.add_generator("Z");
    auto r = t.measure(PauliString::from_str("Z"));
    CHECK(r.sign == +1);
    CHECK(r.was_determined);
    CHECK(t.generators()[0].str() == "+Z");

    auto rm = t.measure(PauliString::from_str("-Z") * PauliString::from_str("-I"));
    CHECK(rm.was_determined);
}

TEST_CASE("anticommuting measurement replaces a generator; repeat is deterministic") {
    StabilizerTableau t(1);
    t.add_generator("Z");
    auto x = PauliString::from_str("X");
    auto r1 = t.measure(x, +1);
    CHECK_FALSE(r1.was_determined);
    CHECK(r1.sign == +1);
    auto r2 = t.measure(x, +1);
    CHECK(r2.was_determined);
    CHECK(r2.sign == +1);

    // forced -1 branch
    StabilizerTableau t2(1);
    t2.add_generator("Z");
    auto r3 = t2.measure(x, -1);
    CHECK(r3.sign == -1);
    auto r4 = t2.measure(x);
    CHECK(r4.was_determined);
    CHECK(r4.sign == -1);
}

TEST_CASE("membership with signs") {
    StabilizerTableau t(3);
    t.add_generator("ZZI");
    t.add_generator("IZZ");
    CHECK(t.contains(PauliString::from_str("ZIZ")));
    CHECK_FALSE(t.contains(PauliString::from_str("-ZIZ")));
    CHECK(t.contains_up_to_sign(PauliString::from_str("-ZIZ")));
    CHECK_FALSE(t.contains(PauliString::from_str("XII")));
    CHECK_FALSE(t.contains_up_to_sign(PauliString::from_str("XII")));
}

TEST_CASE("measurement repairs anticommuting logicals") {
    StabilizerTableau t(2);
    t.add_generator("ZZ");
    t.add_logical("Z", PauliString::from_str("ZI"));
    t.add_logical("X", PauliString::from_str("XX"));
    t.measure(PauliString::from_str("XI"), +1);
    for (const auto& [label, l] : t.logicals())
        for (const auto& g : t.generators()) CHECK(l.commutes_with(g));
}

TEST_CASE("generators stay commuting and independent under measurement sequences") {
    Rng rng(21);
    for (int trial = 0; trial < 50; trial++) {
        int n = 3 + int(rng.next_below(4));
        StabilizerTableau t(n);
        // start from the |0...0> tableau
        for (int q = 0; q < n; q++) t.add_generator(PauliString::single(n, q, 'Z'));
        REQUIRE(t.mutually_commuting());
        for (int step = 0; step < 12; step++) {
            auto obs = rand_pauli(n, rng);
            if (obs.identity_bits()) continue;
            bool anti = false;
            for (const auto& g : t.generators())
                if (!g.commutes_with(obs)) anti = true;
            if (!anti && !t.contains_up_to_sign(obs)) continue; // undetermined: not a valid trace step
            t.measure(obs, rng.bernoulli(0.5) ? +1 : -1);
            CHECK(t.mutually_commuting());
            CHECK(t.independent());
        }
    }
}

TEST_CASE("apply runs gates over generators and logicals") {
    StabilizerTableau t(2);
    t.add_generator("ZI");
    t.add_generator("IZ");
    t.apply(CliffordGate::h(0));
    t.apply(CliffordGate::cnot(0, 1));
    // H then CNOT on |00> builds a Bell pair
    CHECK(t.contains(PauliString::from_str("XX")));
    CHECK(t.contains(PauliString::from_str("ZZ")));
}
