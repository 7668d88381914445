#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace asymfree::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Options {
    int max_m = 3;    // entry-moment order cap for the exhaustive lemma checks
    int max_k = 6;    // dimension cap for the exhaustive lemma checks
    std::int64_t samples = 20000;
    std::uint64_t seed = 12345;
    int threads = 0;  // 0 = ASYMFREE_THREADS or hardware
};

// The acceptance criteria, one function each. Monte Carlo checks expose a
// deterministic signature so the determinism criterion can rerun them under
// different thread counts and compare bit for bit.
CheckResult c01_row_normalization();
CheckResult c02_lemma2_exhaustive(int max_degree = 4, int max_k = 4);
CheckResult c03_lemma3_exhaustive(int max_m = 3, int max_k = 6, std::uint64_t seed = 12345);
CheckResult c04_lemma5_exhaustive(int max_m = 3, int max_k = 6);
CheckResult c05_lemma4_randomized(std::uint64_t seed = 12345, int instances = 200);
CheckResult c06_theorem1_exact();
CheckResult c07_oracle_equivalence(std::int64_t samples = 20000, std::uint64_t seed = 12345,
                                   int threads = 0);
CheckResult c08_sampler_moments(std::int64_t samples = 40000, std::uint64_t seed = 12345,
                                int threads = 0);
CheckResult c09_decay_rates(std::uint64_t seed = 12345, int threads = 0);
CheckResult c10_bell_numbers();
CheckResult c11_elementary_inequalities(int max_k = 30);
CheckResult c12_freeness_trends(std::uint64_t seed = 12345, int threads = 0);
CheckResult c13_determinism(std::uint64_t seed = 12345);

// Extra module invariants exercised by `verify` beyond the numbered criteria.
CheckResult lemma1_invariance_exact(std::uint64_t seed = 12345);
CheckResult corollary5_arithmetic();

std::vector<CheckResult> lemma_suite(const Options& opt);
std::vector<CheckResult> theorem_suite(const Options& opt);
std::vector<CheckResult> corollary_suite(const Options& opt);
std::vector<CheckResult> all_suites(const Options& opt);

// Runs every numbered acceptance criterion with its stated parameters.
std::vector<CheckResult> acceptance_criteria(int threads = 0);

}  // namespace asymfree::verify
