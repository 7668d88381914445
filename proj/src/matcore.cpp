#include "asymfree/matcore.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace asymfree::matcore {

std::complex<double> normalized_trace(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw_invalid("normalized_trace: matrix not square");
    if (a.rows() == 0) throw_invalid("normalized_trace: empty matrix");
    return a.trace() / static_cast<double>(a.rows());
}

std::string UnitarityReport::describe() const {
    std::ostringstream os;
    os << (pass ? "pass" : "fail") << " worst=" << worst << " at ";
    switch (condition) {
        case UnitarityCondition::RowNorm: os << "row-norm " << first; break;
        case UnitarityCondition::ColNorm: os << "col-norm " << first; break;
        case UnitarityCondition::RowInner: os << "rows (" << first << "," << second << ")"; break;
        case UnitarityCondition::ColInner: os << "cols (" << first << "," << second << ")"; break;
    }
    return os.str();
}

UnitarityReport check_unitary(const ComplexMatrix& a, double tol) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        UnitarityReport r;
        r.pass = false;
        r.worst = std::numeric_limits<double>::infinity();
        return r;
    }
    const int k = static_cast<int>(a.rows());
    // Row conditions live in a a*, column conditions in a* a.
    ComplexMatrix row_gram = a * a.adjoint();
    ComplexMatrix col_gram = a.adjoint() * a;

    UnitarityReport r;
    r.pass = true;
    auto note = [&](double v, UnitarityCondition c, int i, int j) {
        if (v > r.worst) {
            r.worst = v;
            r.condition = c;
            r.first = i;
            r.second = j;
        }
        if (v > tol) r.pass = false;
    };
    for (int i = 0; i < k; ++i) {
        note(std::abs(row_gram(i, i).real() - 1.0) + std::abs(row_gram(i, i).imag()),
             UnitarityCondition::RowNorm, i + 1, i + 1);
        note(std::abs(col_gram(i, i).real() - 1.0) + std::abs(col_gram(i, i).imag()),
             UnitarityCondition::ColNorm, i + 1, i + 1);
    }
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            note(std::abs(row_gram(i, j)), UnitarityCondition::RowInner, i + 1, j + 1);
            note(std::abs(col_gram(i, j)), UnitarityCondition::ColInner, i + 1, j + 1);
        }
    }
    return r;
}

UnitaryMatrix UnitaryMatrix::verified(ComplexMatrix m, double tol) {
    UnitarityReport r = check_unitary(m, tol);
    if (!r.pass) throw_invalid("UnitaryMatrix: " + r.describe());
    return UnitaryMatrix(std::move(m));
}

UnitaryMatrix UnitaryMatrix::trusted(ComplexMatrix m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw_invalid("UnitaryMatrix::trusted: matrix not square");
    return UnitaryMatrix(std::move(m));
}

DiagonalPattern pattern_from_string(const std::string& s) {
    if (s == "alternating") return DiagonalPattern::Alternating;
    if (s == "balanced") return DiagonalPattern::Balanced;
    if (s == "roots" || s == "roots_of_unity") return DiagonalPattern::RootsOfUnity;
    throw_invalid("unknown diagonal pattern: " + s);
}

std::string pattern_to_string(DiagonalPattern p) {
    switch (p) {
        case DiagonalPattern::Alternating: return "alternating";
        case DiagonalPattern::Balanced: return "balanced";
        case DiagonalPattern::RootsOfUnity: return "roots_of_unity";
    }
    return "?";
}

namespace {

constexpr double kTraceTol = 1e-12;

void validate_entries(const std::vector<std::complex<double>>& e, double M) {
    std::complex<double> sum = 0;
    for (const auto& v : e) sum += v;
    if (std::abs(sum) > kTraceTol)
        throw_invalid("DiagonalObservable: trace not zero (|sum| = " + std::to_string(std::abs(sum)) + ")");
    for (const auto& v : e) {
        if (std::abs(v) > M * (1.0 + 1e-12))
            throw_invalid("DiagonalObservable: entry modulus exceeds norm bound M");
    }
}

}  // namespace

DiagonalObservable DiagonalObservable::make(int k, DiagonalPattern pattern, double M) {
    if (k < 1) throw_invalid("DiagonalObservable: k must be positive");
    if (M <= 0) throw_invalid("DiagonalObservable: M must be positive");
    std::vector<std::complex<double>> e(static_cast<std::size_t>(k));
    switch (pattern) {
        case DiagonalPattern::Alternating:
            if (k % 2 != 0)
                throw_invalid("DiagonalObservable: alternating pattern requires even k");
            for (int a = 0; a < k; ++a) e[static_cast<std::size_t>(a)] = (a % 2 == 0) ? M : -M;
            break;
        case DiagonalPattern::Balanced:
            for (int a = 0; a < k; ++a) e[static_cast<std::size_t>(a)] = (a % 2 == 0) ? M : -M;
            if (k % 2 != 0) e.back() = 0.0;
            break;
        case DiagonalPattern::RootsOfUnity: {
            if (k < 2)
                throw_invalid("DiagonalObservable: roots_of_unity needs k >= 2 for trace 0");
            for (int a = 0; a < k; ++a) {
                double th = 2.0 * std::numbers::pi * a / k;
                e[static_cast<std::size_t>(a)] = M * std::complex<double>(std::cos(th), std::sin(th));
            }
            // The float sum of all k-th roots is ~1e-16; snap it to the exact 0.
            std::complex<double> sum = 0;
            for (const auto& v : e) sum += v;
            e[0] -= sum;
            break;
        }
    }
    return DiagonalObservable(std::move(e), M);
}

DiagonalObservable DiagonalObservable::explicit_list(std::vector<std::complex<double>> entries,
                                                     double M) {
    if (entries.empty()) throw_invalid("DiagonalObservable: empty entry list");
    if (M <= 0) throw_invalid("DiagonalObservable: M must be positive");
    validate_entries(entries, M);
    return DiagonalObservable(std::move(entries), M);
}

ComplexMatrix DiagonalObservable::as_matrix() const {
    ComplexMatrix m = ComplexMatrix::Zero(dim(), dim());
    for (int a = 0; a < dim(); ++a) m(a, a) = entries_[static_cast<std::size_t>(a)];
    return m;
}

void DiagonalObservable::apply_right(ComplexMatrix& acc) const {
    if (acc.cols() != dim()) throw_invalid("DiagonalObservable: dimension mismatch");
    for (int j = 0; j < dim(); ++j) acc.col(j) *= entries_[static_cast<std::size_t>(j)];
}

}  // namespace asymfree::matcore
