#include <cmath>

#include "defectq/purify.hpp"
#include "doctest.h"

using namespace defectq;

namespace {

double binom_sigma(double p, double n) { return std::sqrt(p * (1 - p) / n); }

} // namespace

TEST_CASE("oracle: werner 0.85 closed-form values") {
    auto r = exact_purification_oracle(RawPairModel::werner(0.85), 2);
    CHECK(r.rounds[0].success == doctest::Approx(0.82).epsilon(1e-12));
    // exact recursion: F'' = 10513/10820
    CHECK(r.fidelity == doctest::Approx(10513.0 / 10820.0).epsilon(1e-12));
    CHECK(r.rounds[0].inefficiency == doctest::Approx(2.0 / 0.82).epsilon(1e-12));

    auto perfect = exact_purification_oracle(RawPairModel::werner(1.0), 4);
    CHECK(perfect.fidelity == doctest::Approx(1.0));
    for (const auto& rd : perfect.rounds) CHECK(rd.success == doctest::Approx(1.0));
}

TEST_CASE("oracle: one round keeps the undetected error type") {
    // a single Z-discrepant pair survives an X-comparing round undetected
    RawPairModel m{0.9, 0.0, 0.0, 0.1};
    auto r = exact_purification_oracle(m, 1);
    CHECK(r.rounds[0].success == doctest::Approx(1.0));
    // after the axis exchange the surviving error reads as X
    CHECK(r.rounds[0].dist[1] == doctest::Approx(2 * 0.9 * 0.1).epsilon(1e-12));
    // both-Z inputs cancel: I component picks up 0.9^2 + 0.1^2
    CHECK(r.fidelity == doctest::Approx(0.81 + 0.01).epsilon(1e-12));
}

TEST_CASE("monte carlo at p=0 matches the oracle within 3 sigma") {
    for (int rounds = 1; rounds <= 4; rounds++) {
        PurifyConfig cfg;
        cfg.scheme = Scheme::physical;
        cfg.p = 0.0;
        cfg.rounds = rounds;
        cfg.trials = 200000;
        cfg.seed = 77 + rounds;
        auto stats = run_purification(cfg);
        auto oracle = exact_purification_oracle(cfg.raw, rounds);
        double sigma = binom_sigma(oracle.merged_error, double(cfg.trials));
        CHECK(std::abs(stats.merged_rate() - oracle.merged_error) < 3 * sigma + 1e-9);
        // inefficiency matches 2^n / prod(success) in expectation
        CHECK(stats.inefficiency() ==
              doctest::Approx(oracle.inefficiency).epsilon(0.02));
    }
}

TEST_CASE("raw source distribution") {
    PurifyConfig cfg;
    cfg.scheme = Scheme::physical;
    cfg.rounds = 0;
    cfg.p = 0.0;
    cfg.trials = 200000;
    cfg.seed = 5;
    auto stats = run_purification(cfg);
    // merged = 1 - 0.85, X component = 0.055 + 0.055
    CHECK(std::abs(stats.merged_rate() - 0.15) < 3 * binom_sigma(0.15, cfg.trials));
    CHECK(std::abs(stats.x_rate() - 0.11) < 3 * binom_sigma(0.11, cfg.trials));
    CHECK(std::abs(stats.z_rate() - 0.095) < 3 * binom_sigma(0.095, cfg.trials));
}

TEST_CASE("serial and parallel runs are bit-identical") {
    PurifyConfig cfg;
    cfg.scheme = Scheme::after_strict;
    cfg.code_a = &steane_code();
    cfg.code_b = &surface_d3_code();
    cfg.rounds = 2;
    cfg.p = 1e-3;
    cfg.trials = 2000;
    cfg.seed = 9;
    auto a = run_purification(cfg);
    auto b = run_purification_serial(cfg);
    CHECK(a.delivered == b.delivered);
    CHECK(a.x_errors == b.x_errors);
    CHECK(a.z_errors == b.z_errors);
    CHECK(a.merged_errors == b.merged_errors);
    CHECK(a.raw_consumed == b.raw_consumed);
}

TEST_CASE("local-gate source") {
    PurifyConfig cfg;
    cfg.scheme = Scheme::physical;
    cfg.source = Source::local_gates;
    cfg.rounds = 0;
    cfg.trials = 200000;
    cfg.seed = 11;

    cfg.p = 0.0;
    CHECK(run_purification(cfg).merged_rate() == 0.0);

    cfg.p = 1e-3;
    double m3 = run_purification(cfg).merged_rate();
    CHECK(m3 > 0.00586);
    CHECK(m3 < 0.00886);

    // roughly linear scaling in p
    cfg.p = 1e-4;
    cfg.trials = 400000;
    double m4 = run_purification(cfg).merged_rate();
    CHECK(m4 == doctest::Approx(m3 / 10.0).epsilon(0.35));
}

TEST_CASE("physical baseline rows vs printed table, reduced trials") {
    const double expect_merged[5] = {0.156, 0.106, 0.036, 0.0275, 0.0103};
    const double expect_ineff[5] = {1.0, 2.5, 6.0, 12.6, 26.4};
    for (int r = 0; r <= 4; r++) {
        PurifyConfig cfg;
        cfg.scheme = Scheme::physical;
        cfg.p = 1e-3;
        cfg.rounds = r;
        cfg.trials = 30000;
        cfg.seed = 123;
        auto stats = run_purification(cfg);
        CHECK(std::abs(stats.merged_rate() - expect_merged[r]) < 0.008);
        if (r > 0) {
            CHECK(stats.inefficiency() > expect_ineff[r] * 0.9);
            CHECK(stats.inefficiency() < expect_ineff[r] * 1.1);
        }
    }
}

TEST_CASE("strict post-selection no worse than plain logical purification") {
    PurifyConfig cfg;
    cfg.code_a = &steane_code();
    cfg.code_b = &surface_d3_code();
    cfg.rounds = 2;
    cfg.p = 1e-3;
    cfg.trials = 20000;
    cfg.seed = 31;
    cfg.scheme = Scheme::after;
    auto plain = run_purification(cfg);
    cfg.scheme = Scheme::after_strict;
    auto strict = run_purification(cfg);
    double sigma = binom_sigma(plain.merged_rate(), cfg.trials);
    CHECK(strict.merged_rate() < plain.merged_rate() + 3 * sigma);
    // strict discards more, so it must consume at least as many raw pairs
    CHECK(strict.inefficiency() >= plain.inefficiency());
}

TEST_CASE("ledger base constants and csv header") {
    PurifyConfig cfg;
    cfg.scheme = Scheme::before;
    cfg.code_a = &steane_code();
    cfg.code_b = &surface_d3_code();
    cfg.rounds = 0;
    auto ledgers = ledger_for(cfg, {});
    CHECK(ledgers[0].kq == 5402);
    CHECK(ledgers[0].single_qubit_gates == 4130);
    CHECK(ledgers[0].two_qubit_gates == 636);
    CHECK(steane_code().encoding_kq() == 42);
    CHECK(surface_d3_code().encoding_kq() == 250);

    std::string csv = purification_csv({});
    CHECK(csv ==
          "#purification,X error rate,Z error rate,Merged error rate,"
          "Phys Bell Pair Ineff,KQ,#single qubit gate,#two qubit gate\n");

    // physical ledger reproduces the KQ growth convention: +10 per attempt
    PurifyConfig pc;
    pc.scheme = Scheme::physical;
    auto pl = ledger_for(pc, {});
    CHECK(pl[0].kq == 88);
    CHECK(pl[0].single_qubit_gates == 86);
    CHECK(pl[0].two_qubit_gates == 1);
}

TEST_CASE("werner preset") {
    auto w = RawPairModel::werner(0.85);
    CHECK(w.pi == doctest::Approx(0.85));
    CHECK(w.px == doctest::Approx(0.05));
    CHECK(w.py == doctest::Approx(0.05));
    CHECK(w.pz == doctest::Approx(0.05));
}
