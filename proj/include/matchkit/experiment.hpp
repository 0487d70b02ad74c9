#ifndef MATCHKIT_EXPERIMENT_HPP
#define MATCHKIT_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "matchkit/core.hpp"

namespace matchkit {

inline constexpr const char* kSweepCsvHeader =
    "algorithm,lambda,gamma,trial,alg_value,opt_value,ratio";

struct AlgSpec {
    std::string name;    // lab | paw | balance | greedy | advice | coinflip | advicefill
    double lambda = 0.0; // lab/paw only
    double mix = 0.0;    // coinflip only
};

struct SweepConfig {
    std::string generator = "er"; // er | ut | instance
    int n = 100;
    double p = 0.2;
    std::string instance_path; // generator == "instance"
    bool weighted = false;
    // Advice-aware algorithms get one lambda per consistency target,
    // resolved via the closed-form inverses.
    std::vector<double> consistency_targets = {0.7, 0.8, 0.9, 1.0};
    std::vector<AlgSpec> algorithms; // empty -> resolved default set
    int gamma_points = 10;           // grid on [0,1]
    int trials = 10;
    // Advice-noise replicates averaged into each (gamma, trial) cell; >1
    // reduces the sampling noise of the advice oracle without changing the
    // instance/gamma matrix.
    int noise_reps = 1;
    std::uint64_t seed_base = 1;
    std::string out_dir; // when set, writes instances/advice/csv/config there

    // Fills `algorithms` (balance, greedy, lab x targets, paw x targets)
    // when empty and validates fields.
    void resolve();
    std::string describe() const; // resolved key=value config text
};

struct SweepRow {
    std::string algorithm;
    double lambda = 0.0;
    double gamma = 0.0;
    int trial = 0;
    double alg_value = 0.0;
    double opt_value = 0.0;
    double ratio = 0.0;
    std::string error; // nonempty -> cell failed, numbers are zero
};

std::vector<SweepRow> run_sweep(SweepConfig cfg);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

// Self-contained SVG. style "noise": x = gamma, y = mean ratio per
// (algorithm, lambda) with a min/max band over trials. style "curve":
// closed-form (r, c) tradeoff curves with the coin-flip segments and the
// published n=1000 LP upper-bound points; rows, if any, are scattered as
// (alg_value, opt_value) = (r-hat, c-hat) measurements.
std::string emit_chart(const std::vector<SweepRow>& rows,
                       const std::string& style);

SweepConfig parse_sweep_config(const std::string& text); // key=value lines

} // namespace matchkit

#endif
