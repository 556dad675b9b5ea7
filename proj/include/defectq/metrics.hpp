#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "defectq/circuit.hpp"
#include "defectq/schedule.hpp"

namespace defectq {

// Chip-quality metrics: one record per lattice, one value per column of
// the correlation tables. Averages are arithmetic means.
struct ChipMetrics {
    int n_stabs = 0;
    int faulty_total = 0, faulty_data = 0, faulty_ancilla = 0;
    int reduced_distance = 0;
    int z_stabs = 0;
    int biggest_qubits_z = 0;
    double ave_qubits_z = 0;
    int biggest_dataq_z = 0;
    double ave_dataq_z = 0;
    int deepest_z = 0;
    double ave_depth_z = 0;
    long long biggest_kq_z = 0;
    double ave_kq_z = 0;
    long long biggest_kdq_z = 0;
    double ave_kdq_z = 0;
    double biggest_cycle_z = 0, ave_cycle_z = 0;
    double biggest_cq_z = 0, ave_cq_z = 0;
    double biggest_cdq_z = 0, ave_cdq_z = 0;
    double ave_z_meas_per_step = 0;

    std::map<std::string, double> columns() const;
};

ChipMetrics compute_metrics(const Lattice& l, const StabilizerLayout& layout,
                            const std::vector<StabilizerCircuit>& circs, const WholeCircuit& w);

// Pearson correlation of every metric column against the rate (or its log).
struct CorrelationTable {
    std::vector<std::string> names;
    std::vector<double> correlation; // NaN marks undefined (zero variance)
};
CorrelationTable correlate(const std::vector<ChipMetrics>& chips,
                           const std::vector<double>& rates, bool log_target);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Keeps the best chips after dropping `fraction` of the ORIGINAL generated
// count; unencodable chips (no rate) count among the culled worst.
std::vector<int> cull(int generated, const std::vector<std::pair<int, double>>& rated,
                      double fraction);

double geometric_mean(const std::vector<double>& v);

} // namespace defectq
