#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "defectq/codes.hpp"
#include "defectq/noise.hpp"

namespace defectq {

// Discrepancy distribution over {I, X, Y, Z} applied to one half of an
// ideal Phi+ pair. Fidelity is P(I).
struct RawPairModel {
    double pi = 1.0, px = 0.0, py = 0.0, pz = 0.0;

    static RawPairModel werner(double f) {
        double e = (1.0 - f) / 3.0;
        return {f, e, e, e};
    }
    // the optical-link input state: 0.85 Phi+ / 0.055 Psi+ / 0.055 Psi- / 0.04 Phi-
    static RawPairModel optical_f085() { return {0.85, 0.055, 0.055, 0.04}; }

    double fidelity() const { return pi; }
};

struct OracleRound {
    double success;      // probability this round's comparison agrees
    double inefficiency; // raw pairs consumed per delivered pair so far
    std::array<double, 4> dist; // I, X, Y, Z after the round (and basis swap)
};

struct OracleResult {
    std::vector<OracleRound> rounds; // rounds[0] = after round 1
    double fidelity;                 // P(I) after the last round
    double inefficiency;
    double merged_error;             // 1 - fidelity
};

// Exact no-gate-error recursion: each round compares the X parity of two
// equal pairs via bilateral CNOT and measurement, keeps the control pair on
// agreement, then exchanges the X and Z axes for the next round.
OracleResult exact_purification_oracle(const RawPairModel& model, int rounds);

enum class Scheme { physical, before, after, after_strict };
enum class Source { optical, local_gates };

struct PurifyConfig {
    Scheme scheme = Scheme::physical;
    const CodeDef* code_a = nullptr; // nullptr = unencoded physical half
    const CodeDef* code_b = nullptr;
    int rounds = 0;
    double p = 1e-3;             // local gate error rate
    RawPairModel raw = RawPairModel::optical_f085();
    Source source = Source::optical;
    long trials = 100000;        // delivered pairs to accumulate
    uint64_t seed = 1;
    long retry_cap = 100000000;  // per delivered pair, guards underflow
};

struct PurifyStats {
    long delivered = 0;
    long x_errors = 0, z_errors = 0, merged_errors = 0;
    long long raw_consumed = 0;

    double x_rate() const { return delivered ? double(x_errors) / delivered : 0; }
    double z_rate() const { return delivered ? double(z_errors) / delivered : 0; }
    double merged_rate() const { return delivered ? double(merged_errors) / delivered : 0; }
    double inefficiency() const { return delivered ? double(raw_consumed) / delivered : 0; }
    PurifyStats& operator+=(const PurifyStats& o) {
        delivered += o.delivered;
        x_errors += o.x_errors;
        z_errors += o.z_errors;
        merged_errors += o.merged_errors;
        raw_consumed += o.raw_consumed;
        return *this;
    }
};

// Closed-form expected gate ledger for one delivered pair.
struct ResourceLedger {
    double raw_pairs = 0;
    double kq = 0;
    double single_qubit_gates = 0;
    double two_qubit_gates = 0;
};

PurifyStats run_purification(const PurifyConfig& cfg);
PurifyStats run_purification_serial(const PurifyConfig& cfg); // reference path

// Ledger for the configured scheme at each round 0..cfg.rounds, using the
// measured per-round success rates for retry weighting. Round-0 entries
// reproduce the printed delivery-pipeline costs exactly.
std::vector<ResourceLedger> ledger_for(const PurifyConfig& cfg,
                                       const std::vector<double>& round_success);

// Per-round survival statistics needed by the ledger (and reports).
struct RoundSuccess {
    std::vector<double> success; // index r: success probability of round r+1
};
RoundSuccess measure_round_success(const PurifyConfig& cfg);

struct CsvRow {
    int round;
    double x_rate, z_rate, merged_rate, inefficiency, kq, single_q, two_q;
};
// Header is byte-exact:
// #purification,X error rate,Z error rate,Merged error rate,Phys Bell Pair Ineff,KQ,#single qubit gate,#two qubit gate
std::string purification_csv(const std::vector<CsvRow>& rows);

// Runs rounds 0..cfg.rounds and assembles the appendix-format table.
std::vector<CsvRow> purification_table(PurifyConfig cfg);

const CodeDef* code_by_name(const std::string& name); // steane/surface3/physical

} // namespace defectq
