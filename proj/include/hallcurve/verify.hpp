#pragma once

#include <string>
#include <vector>

#include "hallcurve/cohp1.hpp"
#include "hallcurve/shuffle.hpp"

namespace hc {

struct SuiteConfig {
    long q = 2;
    int trunc = 8;       // series truncation order
    int window = 3;      // degree window half-width
    int gen_lo = -2;     // generator degree range (main theorem)
    int gen_hi = 2;
    int max_length = 3;  // product length
    int torsion_max = 4;
    bool negative_controls = true;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string witness;  // first mismatch, for failures
    double ms = 0;
};

struct SuiteReport {
    std::string suite;
    std::string convention;  // calibration outcome, when applicable
    std::vector<CheckResult> checks;

    bool all_pass() const;
    std::string to_text() const;
    std::string to_json() const;
};

SuiteReport verify_witt_bihom(const SuiteConfig& cfg);
SuiteReport verify_constant_term(const SuiteConfig& cfg);
SuiteReport verify_eisenstein_feq(const SuiteConfig& cfg);
SuiteReport verify_main_p1(const SuiteConfig& cfg);
SuiteReport verify_green_cross(const SuiteConfig& cfg);
SuiteReport verify_psif_mop(const SuiteConfig& cfg);

// dispatch by name: witt-bihom, constant-term, eisenstein-feq, main-p1,
// green-cross, psif-mop, all
std::vector<SuiteReport> run_suites(const std::string& selector, const SuiteConfig& cfg);

}  // namespace hc
