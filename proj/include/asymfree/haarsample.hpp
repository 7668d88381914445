#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "asymfree/matcore.hpp"

namespace asymfree::haarsample {

// Identifies one reproducible random stream. Identical (master_seed,
// stream_index) always yields the identical sample sequence; substreams are
// hash-derived so batches can be generated in any order or in parallel.
struct SeededStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;

    SeededStream substream(std::uint64_t i) const;
};

// Counter-based generator (Philox-4x64-10). Pure function of (key, counter),
// so a stream can be replayed or split without shared state.
class CounterRng {
  public:
    explicit CounterRng(const SeededStream& stream);

    std::uint64_t next_u64();
    double next_unit();  // uniform in [0, 1), 53-bit
    // Standard normal pair via the polar method.
    void next_gaussian_pair(double& g0, double& g1);
    std::complex<double> next_standard_complex_gaussian();  // re,im ~ N(0, 1/2)

  private:
    void refill();
    std::uint64_t key0_, key1_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 4> buf_{};
    int pos_ = 4;
};

// Haar sample on U(k): Ginibre matrix orthonormalized column by column
// (modified Gram-Schmidt with one reorthogonalization pass). The triangular
// factor's diagonal is the positive column norm, which is exactly the
// phase-fixed factorization whose unitary part is Haar-distributed. A
// degenerate column triggers a redraw of that column.
matcore::UnitaryMatrix sample_unitary(int k, const SeededStream& stream);

// n independent samples via n derived substreams.
std::vector<matcore::UnitaryMatrix> sample_tuple(int k, int n, const SeededStream& stream);

// Empirical translation-invariance check: compares entry-moment tables of the
// matched sample sets {u_i} and {v u_i}.
struct InvarianceReport {
    int k = 0;
    int degree = 1;
    std::int64_t samples = 0;
    double max_dev_degree1 = 0.0;          // over E f_ij
    std::array<int, 2> arg_degree1{};      // (i, j), 1-based
    double max_dev_degree2 = 0.0;          // over E f_ij conj(f_st)
    std::array<int, 4> arg_degree2{};      // (i, j, s, t)
    double max_dev_modsq = 0.0;            // the i=s, j=t subtable E |f_ij|^2
    std::array<int, 2> arg_modsq{};
    double max_deviation() const;
};

InvarianceReport invariance_report(int k, const matcore::UnitaryMatrix& v, int degree,
                                   std::int64_t samples, const SeededStream& stream,
                                   int threads = 0);

}  // namespace asymfree::haarsample
