#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "defectq/pauli.hpp"
#include "defectq/rng.hpp"

namespace defectq {

// Signed stabilizer group plus tracked logical operators. The generator
// list may be smaller than n; untracked degrees of freedom are simply not
// represented (used by the algebra traces, which follow the written
// derivations stabilizer-by-stabilizer).
class StabilizerTableau {
public:
    StabilizerTableau() : n_(0) {}
    explicit StabilizerTableau(int n) : n_(n) {}

    int n() const { return n_; }
    const std::vector<PauliString>& generators() const { return gens_; }
    const std::vector<std::pair<std::string, PauliString>>& logicals() const { return logicals_; }

    void add_generator(const PauliString& g);
    void add_generator(const std::string& s) { add_generator(PauliString::from_str(s)); }
    void add_logical(const std::string& label, const PauliString& p);

    bool mutually_commuting() const;
    // symplectic rank of the generator bit-matrix
    int rank() const;
    bool independent() const { return rank() == int(gens_.size()); }

    // True iff p (sign included) is a product of generators.
    bool contains(const PauliString& p) const;
    // True iff +p or -p is a product of generators.
    bool contains_up_to_sign(const PauliString& p) const;

    struct MeasureResult {
        int sign;            // +1 or -1
        bool was_determined; // commuted with the whole group and was a member
    };

    // Measurement of a Hermitian Pauli observable. If the observable
    // anticommutes with some generator, one such generator is replaced by
    // (sign)*obs and the rest are repaired by multiplication; tracked
    // logicals are repaired the same way. `forced` pins the outcome for
    // deterministic traces; otherwise `rng` decides (or +1 if null).
    MeasureResult measure(const PauliString& obs, std::optional<int> forced = std::nullopt,
                          Rng* rng = nullptr);

    // Applies a unitary gate to every generator and logical.
    void apply(const CliffordGate& g);
    void apply_circuit(const std::vector<CliffordGate>& gates);

    // Applies a Pauli correction: flips the sign of every generator and
    // logical that anticommutes with it.
    void apply_pauli(const PauliString& p);

    // Drops the generator whose bits equal g (sign +), first multiplying it
    // into any other generator sharing support so the remaining rows match
    // the written derivations. Used when a tracked stabilizer becomes a
    // degree of freedom.
    void release_generator(const PauliString& g);

private:
    std::optional<std::vector<int>> solve_bits(const PauliString& target) const;

    int n_;
    std::vector<PauliString> gens_;
    std::vector<std::pair<std::string, PauliString>> logicals_;
};

} // namespace defectq
