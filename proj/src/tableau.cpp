#include "defectq/tableau.hpp"

#include <stdexcept>

namespace defectq {

namespace {

// Rows of (x|z) bits for GF(2) elimination.
std::vector<std::vector<uint64_t>> bit_rows(const std::vector<PauliString>& gens, int n) {
    int words = (n + 63) / 64;
    std::vector<std::vector<uint64_t>> rows;
    rows.reserve(gens.size());
    for (const auto& g : gens) {
        std::vector<uint64_t> row(2 * words, 0);
        for (int w = 0; w < words; w++) {
            row[w] = g.x_words()[w];
            row[words + w] = g.z_words()[w];
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

void StabilizerTableau::add_generator(const PauliString& g) {
    if (g.n() != n_) throw std::invalid_argument("generator length mismatch");
    if (!g.hermitian()) throw std::invalid_argument("generator must have sign +/-1");
    gens_.push_back(g);
}

void StabilizerTableau::add_logical(const std::string& label, const PauliString& p) {
    if (p.n() != n_) throw std::invalid_argument("logical length mismatch");
    logicals_.emplace_back(label, p);
}

bool StabilizerTableau::mutually_commuting() const {
    for (size_t i = 0; i < gens_.size(); i++)
        for (size_t j = i + 1; j < gens_.size(); j++)
            if (!gens_[i].commutes_with(gens_[j])) return false;
    return true;
}

int StabilizerTableau::rank() const {
    auto rows = bit_rows(gens_, n_);
    size_t cols = rows.empty() ? 0 : rows[0].size() * 64;
    int r = 0;
    for (size_t c = 0; c < cols && r < int(rows.size()); c++) {
        size_t w = c >> 6;
        uint64_t mask = uint64_t(1) << (c & 63);
        int pivot = -1;
        for (size_t i = r; i < rows.size(); i++)
            if (rows[i][w] & mask) {
                pivot = int(i);
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[r], rows[pivot]);
        for (size_t i = 0; i < rows.size(); i++) {
            if (int(i) != r && (rows[i][w] & mask))
                for (size_t k = 0; k < rows[i].size(); k++) rows[i][k] ^= rows[r][k];
        }
        r++;
    }
    return r;
}

std::optional<std::vector<int>> StabilizerTableau::solve_bits(const PauliString& target) const {
    auto rows = bit_rows(gens_, n_);
    auto tgt = bit_rows({target}, n_)[0];
    size_t m = rows.size();
    // track combination bitmask per row
    std::vector<std::vector<uint64_t>> comb(m, std::vector<uint64_t>((m + 63) / 64 + 1, 0));
    for (size_t i = 0; i < m; i++) comb[i][i >> 6] = uint64_t(1) << (i & 63);
    std::vector<uint64_t> tgt_comb((m + 63) / 64 + 1, 0);

    size_t cols = rows.empty() ? 0 : rows[0].size() * 64;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < m; c++) {
        size_t w = c >> 6;
        uint64_t mask = uint64_t(1) << (c & 63);
        size_t pivot = SIZE_MAX;
        for (size_t i = r; i < m; i++)
            if (rows[i][w] & mask) {
                pivot = i;
                break;
            }
        if (pivot == SIZE_MAX) continue;
        std::swap(rows[r], rows[pivot]);
        std::swap(comb[r], comb[pivot]);
        for (size_t i = 0; i < m; i++) {
            if (i != r && (rows[i][w] & mask)) {
                for (size_t k = 0; k < rows[i].size(); k++) rows[i][k] ^= rows[r][k];
                for (size_t k = 0; k < comb[i].size(); k++) comb[i][k] ^= comb[r][k];
            }
        }
        if (tgt[w] & mask) {
            for (size_t k = 0; k < tgt.size(); k++) tgt[k] ^= rows[r][k];
            for (size_t k = 0; k < tgt_comb.size(); k++) tgt_comb[k] ^= comb[r][k];
        }
        r++;
    }
    for (uint64_t wv : tgt) // leftover bits: target not in row space
        if (wv) return std::nullopt;
    std::vector<int> subset;
    for (size_t i = 0; i < m; i++)
        if ((tgt_comb[i >> 6] >> (i & 63)) & 1) subset.push_back(int(i));
    return subset;
}

bool StabilizerTableau::contains(const PauliString& p) const {
    auto subset = solve_bits(p);
    if (!subset) return false;
    PauliString prod(n_);
    for (int idx : *subset) prod *= gens_[idx];
    return prod == p;
}

bool StabilizerTableau::contains_up_to_sign(const PauliString& p) const {
    return solve_bits(p).has_value();
}

StabilizerTableau::MeasureResult StabilizerTableau::measure(const PauliString& obs,
                                                            std::optional<int> forced, Rng* rng) {
    if (obs.n() != n_) throw std::invalid_argument("observable length mismatch");
    if (!obs.hermitian()) throw std::invalid_argument("observable must have sign +/-1");

    int pivot = -1;
    for (size_t i = 0; i < gens_.size(); i++) {
        if (!gens_[i].commutes_with(obs)) {
            pivot = int(i);
            break;
        }
    }
    if (pivot < 0) {
        auto subset = solve_bits(obs);
        if (!subset) throw std::logic_error("measurement outcome undetermined by tracked group");
        PauliString prod(n_);
        for (int idx : *subset) prod *= gens_[idx];
        int sign = (prod == obs) ? +1 : -1;
        return {sign, true};
    }

    int sign = forced ? *forced : (rng ? (rng->bernoulli(0.5) ? +1 : -1) : +1);
    if (sign != +1 && sign != -1) throw std::invalid_argument("forced outcome must be +/-1");

    for (size_t i = 0; i < gens_.size(); i++)
        if (int(i) != pivot && !gens_[i].commutes_with(obs)) gens_[i] *= gens_[pivot];
    for (auto& [label, l] : logicals_)
        if (!l.commutes_with(obs)) l *= gens_[pivot];

    PauliString new_gen = obs;
    if (sign < 0) new_gen.set_phase_pow(new_gen.phase_pow() + 2);
    gens_[pivot] = new_gen;
    return {sign, false};
}

void StabilizerTableau::apply_pauli(const PauliString& p) {
    for (auto& gen : gens_)
        if (!gen.commutes_with(p)) gen.set_phase_pow(gen.phase_pow() + 2);
    for (auto& [label, l] : logicals_)
        if (!l.commutes_with(p)) l.set_phase_pow(l.phase_pow() + 2);
}

void StabilizerTableau::release_generator(const PauliString& g) {
    int found = -1;
    for (size_t i = 0; i < gens_.size(); i++)
        if (gens_[i] == g) found = int(i);
    if (found < 0) throw std::logic_error("release_generator: no such generator");
    for (size_t i = 0; i < gens_.size(); i++) {
        if (int(i) == found) continue;
        PauliString reduced = gens_[i] * g;
        if (reduced.weight() < gens_[i].weight()) gens_[i] = reduced;
    }
    gens_.erase(gens_.begin() + found);
}

void StabilizerTableau::apply(const CliffordGate& g) {
    for (auto& gen : gens_) gen.conjugate_inplace(g);
    for (auto& [label, l] : logicals_) l.conjugate_inplace(g);
}

void StabilizerTableau::apply_circuit(const std::vector<CliffordGate>& gates) {
    for (const auto& g : gates) apply(g);
}

} // namespace defectq
