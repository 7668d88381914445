#include "asymfree/haarsample.hpp"

#include <algorithm>
#include <cmath>

#include "asymfree/parallel.hpp"

namespace asymfree::haarsample {

namespace {

// splitmix64 finalizer; bijective 64-bit mix.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Philox-4x64 round constants (Salmon et al., SC'11).
constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

inline void mul_hi_lo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace

SeededStream SeededStream::substream(std::uint64_t i) const {
    // hash(master_seed, stream_index, i); the master seed stays the key.
    return {master_seed, mix64(mix64(stream_index) ^ (i * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL))};
}

CounterRng::CounterRng(const SeededStream& stream)
    : key0_(stream.master_seed), key1_(stream.stream_index) {}

void CounterRng::refill() {
    std::uint64_t c0 = block_++, c1 = 0, c2 = 0, c3 = 0;
    std::uint64_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mul_hi_lo(kPhiloxM0, c0, hi0, lo0);
        mul_hi_lo(kPhiloxM1, c2, hi1, lo1);
        std::uint64_t n0 = hi1 ^ c1 ^ k0;
        std::uint64_t n1 = lo1;
        std::uint64_t n2 = hi0 ^ c3 ^ k1;
        std::uint64_t n3 = lo0;
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    buf_ = {c0, c1, c2, c3};
    pos_ = 0;
}

std::uint64_t CounterRng::next_u64() {
    if (pos_ >= 4) refill();
    return buf_[static_cast<std::size_t>(pos_++)];
}

double CounterRng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

void CounterRng::next_gaussian_pair(double& g0, double& g1) {
    for (;;) {
        double u = 2.0 * next_unit() - 1.0;
        double v = 2.0 * next_unit() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            double f = std::sqrt(-2.0 * std::log(s) / s);
            g0 = u * f;
            g1 = v * f;
            return;
        }
    }
}

std::complex<double> CounterRng::next_standard_complex_gaussian() {
    double g0, g1;
    next_gaussian_pair(g0, g1);
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    return {g0 * inv_sqrt2, g1 * inv_sqrt2};
}

matcore::UnitaryMatrix sample_unitary(int k, const SeededStream& stream) {
    if (k < 1) throw_invalid("sample_unitary: k must be >= 1");
    CounterRng rng(stream);
    matcore::ComplexMatrix z(k, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) z(i, j) = rng.next_standard_complex_gaussian();

    matcore::ComplexMatrix q(k, k);
    const double degenerate = 1e-150;
    for (int j = 0; j < k; ++j) {
        Eigen::VectorXcd v = z.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < j; ++i) v -= q.col(i).dot(v) * q.col(i);
        double norm = v.norm();
        if (!(norm > degenerate)) {
            for (int i = 0; i < k; ++i) z(i, j) = rng.next_standard_complex_gaussian();
            --j;
            continue;
        }
        q.col(j) = v / norm;
    }
    return matcore::UnitaryMatrix::trusted(std::move(q));
}

std::vector<matcore::UnitaryMatrix> sample_tuple(int k, int n, const SeededStream& stream) {
    if (n < 0) throw_invalid("sample_tuple: n must be >= 0");
    std::vector<matcore::UnitaryMatrix> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        out.push_back(sample_unitary(k, stream.substream(static_cast<std::uint64_t>(j))));
    return out;
}

double InvarianceReport::max_deviation() const {
    return std::max(max_dev_degree1, max_dev_degree2);
}

InvarianceReport invariance_report(int k, const matcore::UnitaryMatrix& v, int degree,
                                   std::int64_t samples, const SeededStream& stream,
                                   int threads) {
    if (degree != 1 && degree != 2) throw_invalid("invariance_report: degree must be 1 or 2");
    if (v.dim() != k) throw_invalid("invariance_report: v has wrong dimension");
    if (samples < 1) throw_invalid("invariance_report: samples must be >= 1");

    const std::size_t n1 = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
    const std::size_t n2 = degree >= 2 ? n1 * n1 : 0;
    using Acc = std::vector<std::complex<double>>;

    // Chunk boundaries depend only on the sample count, so partial sums are
    // identical for every thread count; capping the chunk count bounds the
    // k^4-sized partial buffers.
    const std::int64_t chunk = std::max<std::int64_t>(256, (samples + 63) / 64);
    const std::int64_t num_chunks = (samples + chunk - 1) / chunk;
    std::vector<Acc> part_a1(static_cast<std::size_t>(num_chunks)),
        part_b1(static_cast<std::size_t>(num_chunks)),
        part_a2(static_cast<std::size_t>(num_chunks)),
        part_b2(static_cast<std::size_t>(num_chunks));

    parallel_chunks(samples, chunk, threads, [&](std::int64_t begin, std::int64_t end) {
        const std::size_t c = static_cast<std::size_t>(begin / chunk);
        Acc a1(n1), b1(n1), a2(n2), b2(n2);
        for (std::int64_t i = begin; i < end; ++i) {
            matcore::ComplexMatrix u =
                sample_unitary(k, stream.substream(static_cast<std::uint64_t>(i))).matrix();
            matcore::ComplexMatrix vu = v.matrix() * u;
            const std::complex<double>* pu = u.data();
            const std::complex<double>* pv = vu.data();
            for (std::size_t e = 0; e < n1; ++e) {
                a1[e] += pu[e];
                b1[e] += pv[e];
            }
            if (degree >= 2) {
                for (std::size_t e = 0; e < n1; ++e) {
                    const std::complex<double> ue = pu[e];
                    const std::complex<double> ve = pv[e];
                    for (std::size_t f = 0; f < n1; ++f) {
                        a2[e * n1 + f] += ue * std::conj(pu[f]);
                        b2[e * n1 + f] += ve * std::conj(pv[f]);
                    }
                }
            }
        }
        part_a1[c] = std::move(a1);
        part_b1[c] = std::move(b1);
        part_a2[c] = std::move(a2);
        part_b2[c] = std::move(b2);
    });

    Acc a1(n1), b1(n1), a2(n2), b2(n2);
    for (std::int64_t c = 0; c < num_chunks; ++c) {
        const auto& ca1 = part_a1[static_cast<std::size_t>(c)];
        const auto& cb1 = part_b1[static_cast<std::size_t>(c)];
        for (std::size_t e = 0; e < n1; ++e) {
            a1[e] += ca1[e];
            b1[e] += cb1[e];
        }
        const auto& ca2 = part_a2[static_cast<std::size_t>(c)];
        const auto& cb2 = part_b2[static_cast<std::size_t>(c)];
        for (std::size_t e = 0; e < n2; ++e) {
            a2[e] += ca2[e];
            b2[e] += cb2[e];
        }
    }

    InvarianceReport rep;
    rep.k = k;
    rep.degree = degree;
    rep.samples = samples;
    const double inv_n = 1.0 / static_cast<double>(samples);
    // Entry (i, j) sits at column-major offset j*k + i.
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < k; ++i) {
            std::size_t e = static_cast<std::size_t>(j) * static_cast<std::size_t>(k) +
                            static_cast<std::size_t>(i);
            double d = std::abs(a1[e] - b1[e]) * inv_n;
            if (d > rep.max_dev_degree1) {
                rep.max_dev_degree1 = d;
                rep.arg_degree1 = {i + 1, j + 1};
            }
        }
    }
    if (degree >= 2) {
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i)
                for (int t = 0; t < k; ++t)
                    for (int s = 0; s < k; ++s) {
                        std::size_t e = static_cast<std::size_t>(j) * static_cast<std::size_t>(k) +
                                        static_cast<std::size_t>(i);
                        std::size_t f = static_cast<std::size_t>(t) * static_cast<std::size_t>(k) +
                                        static_cast<std::size_t>(s);
                        double d = std::abs(a2[e * n1 + f] - b2[e * n1 + f]) * inv_n;
                        if (d > rep.max_dev_degree2) {
                            rep.max_dev_degree2 = d;
                            rep.arg_degree2 = {i + 1, j + 1, s + 1, t + 1};
                        }
                        if (i == s && j == t && d > rep.max_dev_modsq) {
                            rep.max_dev_modsq = d;
                            rep.arg_modsq = {i + 1, j + 1};
                        }
                    }
    }
    return rep;
}

}  // namespace asymfree::haarsample
