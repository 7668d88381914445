#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asymfree/bounds.hpp"
#include "asymfree/haarsample.hpp"
#include "asymfree/matcore.hpp"
#include "asymfree/wordcore.hpp"

namespace asymfree::experiments {

// ---- free moments ----------------------------------------------------------

// One letter of a *-monomial over the alphabet {x_1..x_s, u_1..u_n} with
// exponents in {1, *}.
struct MonomialLetter {
    bool is_x = true;
    int index = 1;  // 1-based
    bool star = false;
};

using Monomial = std::vector<MonomialLetter>;

// "x1 u2* x1*" style round trip used for target-map keys and the CLI.
std::string monomial_key(const Monomial& mono);
Monomial monomial_from_string(const std::string& text);

// tau values of x-only monomials of the commuting family, keyed by the
// canonical sorted multiset string (commuting letters commute).
class XMomentMap {
  public:
    void set(const std::vector<std::pair<int, bool>>& letters, std::complex<double> value);
    std::complex<double> get(const std::vector<std::pair<int, bool>>& letters) const;

    // Joint moments of fixed commuting diagonal matrices, all multisets up to
    // total degree max_degree.
    static XMomentMap from_diagonals(std::span<const matcore::DiagonalObservable> xs,
                                     int max_degree);

    static std::string key_of(std::vector<std::pair<int, bool>> letters);

  private:
    std::map<std::string, std::complex<double>> values_;
};

// tau of the monomial in the free product where the u_i are free Haar
// unitaries (tau(u_i^p) = 0 for p != 0), free from the commuting x-family
// whose internal moments come from the map. Centering recursion; each
// expansion strictly shortens the word.
std::complex<double> free_moment(const Monomial& mono, const XMomentMap& x_moments,
                                 int degree_cap = 6);

// ---- Monte Carlo over sampled Haar tuples ----------------------------------

struct McEstimate {
    std::complex<double> mean;
    double second_abs_moment = 0;  // mean of |tau|^2
    double std_error_mean = 0;     // sample sd of tau / sqrt(N)
    double std_error_second = 0;   // sample sd of |tau|^2 / sqrt(N)
    std::int64_t samples = 0;
    std::uint64_t master_seed = 0;
};

struct TailEstimate {
    double fraction = 0;
    double std_error = 0;  // binomial
    std::int64_t hits = 0;
    std::int64_t samples = 0;
};

// The alternating product g_1(u) x_1 ... g_w(u) x_w at one sampled tuple.
matcore::ComplexMatrix evaluate_alternating(const wordcore::AlternatingExpression& expr,
                                            std::span<const matcore::UnitaryMatrix> us,
                                            std::span<const matcore::DiagonalObservable> obs);

McEstimate mc_trace_moment(const wordcore::AlternatingExpression& expr,
                           std::span<const matcore::DiagonalObservable> obs, int k, int n,
                           std::int64_t samples, const haarsample::SeededStream& stream,
                           int threads = 0);

TailEstimate mc_tail_probability(const wordcore::AlternatingExpression& expr,
                                 std::span<const matcore::DiagonalObservable> obs, int k, int n,
                                 double eps, std::int64_t samples,
                                 const haarsample::SeededStream& stream, int threads = 0);

struct DecayRow {
    long k = 0;
    McEstimate estimate;
    bounds::BoundReport bound;
    double tail_fraction = 0;
    bool has_tail = false;
};

// Observable slot described at the pattern level so a sweep can rebuild it at
// each k.
struct SweepObservable {
    matcore::DiagonalPattern pattern = matcore::DiagonalPattern::Balanced;
    double M = 1.0;
};

// One row per k with the matching theorem bounds; same per-sample substreams
// across rows (common random numbers) so rate ratios are stable.
std::vector<DecayRow> decay_sweep(const wordcore::AlternatingExpression& expr,
                                  std::span<const SweepObservable> slots,
                                  std::span<const long> ks, int n, std::int64_t samples,
                                  const haarsample::SeededStream& stream,
                                  std::optional<double> eps = std::nullopt, int threads = 0);

// ---- microstate experiments (corollaries) ----------------------------------

struct MicrostateSpec {
    double R = 1.0;    // norm cap of Gamma_R
    int m = 2;         // degree cap
    double eps = 0.1;  // tolerance
    // Optional target overrides keyed by monomial_key.
    std::map<std::string, std::complex<double>> target_overrides;
};

// Fraction of sampled unitary n-tuples v for which (x_1..x_s, v_1..v_n) lies
// in Gamma_R(X, U; m, k, eps), targets from free Haar moments.
double microstate_fraction(int k, int n, int s, const MicrostateSpec& spec,
                           std::span<const matcore::DiagonalObservable> xs,
                           std::int64_t samples, const haarsample::SeededStream& stream,
                           int threads = 0);

// Fraction of sampled s-tuples v for which (v_1* x_1 v_1, ..., v_s* x_s v_s)
// lies in Gamma_R(X_1..X_s; m, k, eps), targets = moments of free normal
// operators via the u-sandwich encoding.
double conjugation_freeness_fraction(int k, int s, const MicrostateSpec& spec,
                                     std::span<const matcore::DiagonalObservable> xs,
                                     std::int64_t samples,
                                     const haarsample::SeededStream& stream, int threads = 0);

// The Gamma monomial alphabet made finite: all words of degree 1..m over
// {x_1..x_s, u_1..u_n} x {1, *}, deduplicated by canonical string.
std::vector<Monomial> enumerate_monomials(int s, int n, int m);

}  // namespace asymfree::experiments
