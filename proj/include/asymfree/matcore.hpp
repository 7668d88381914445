#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "asymfree/errors.hpp"

namespace asymfree::matcore {

using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kDefaultUnitaryTol = 1e-10;

// tau_k = (1/k) Tr
std::complex<double> normalized_trace(const ComplexMatrix& a);

// Which entry condition produced the worst violation.
enum class UnitarityCondition { RowNorm, ColNorm, RowInner, ColInner };

struct UnitarityReport {
    bool pass = false;
    double worst = 0.0;  // largest violation across all conditions
    UnitarityCondition condition = UnitarityCondition::RowNorm;
    int first = 0;   // row/column index (1-based)
    int second = 0;  // partner index for inner-product conditions, else == first
    std::string describe() const;
};

// Entry test: every row/column squared-modulus sum within tol of 1, and every
// distinct row/column pair inner product of modulus <= tol.
UnitarityReport check_unitary(const ComplexMatrix& a, double tol = kDefaultUnitaryTol);

// A ComplexMatrix tagged as unitary. `verified` runs check_unitary and throws
// on failure; the sampler uses the trusted tag for matrices orthonormal by
// construction (the contract is covered by its tests).
class UnitaryMatrix {
  public:
    static UnitaryMatrix verified(ComplexMatrix m, double tol = kDefaultUnitaryTol);
    static UnitaryMatrix trusted(ComplexMatrix m);

    const ComplexMatrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

  private:
    explicit UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

enum class DiagonalPattern { Alternating, Balanced, RootsOfUnity };

DiagonalPattern pattern_from_string(const std::string& s);
std::string pattern_to_string(DiagonalPattern p);

// Trace-zero diagonal observable with sup-norm bound M.
class DiagonalObservable {
  public:
    // alternating requires even k; balanced appends a trailing 0 for odd k;
    // roots_of_unity is M * (w^0, ..., w^{k-1}) and needs k >= 2 for trace 0.
    static DiagonalObservable make(int k, DiagonalPattern pattern, double M);
    static DiagonalObservable explicit_list(std::vector<std::complex<double>> entries, double M);

    int dim() const { return static_cast<int>(entries_.size()); }
    double norm_bound() const { return bound_; }
    const std::vector<std::complex<double>>& entries() const { return entries_; }
    ComplexMatrix as_matrix() const;

    // acc <- acc * diag(entries): column scaling, avoids a dense product.
    void apply_right(ComplexMatrix& acc) const;

  private:
    DiagonalObservable(std::vector<std::complex<double>> e, double b)
        : entries_(std::move(e)), bound_(b) {}
    std::vector<std::complex<double>> entries_;
    double bound_;
};

}  // namespace asymfree::matcore
