#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "asymfree/matcore.hpp"

namespace asymfree::io {

// 17 significant digits: doubles round-trip exactly.
std::string format_double(double v);

// Matrix document: {"k": int, "entries": k x k array of [re, im]}.
nlohmann::ordered_json matrix_to_json(const matcore::ComplexMatrix& m);
matcore::ComplexMatrix matrix_from_json(const nlohmann::json& j);

// Observable document: {"k": int, "diag": array of [re, im], "M": number}.
nlohmann::ordered_json observable_to_json(const matcore::DiagonalObservable& x);
matcore::DiagonalObservable observable_from_json(const nlohmann::json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// One flat record per estimate; the same fields drive the CSV row and the
// JSON document so decay curves plot from either.
struct ResultRecord {
    std::string run_id;
    std::string command;
    std::string expr;
    std::optional<long> k;
    std::optional<int> n;
    std::optional<int> m;
    std::optional<int> w;
    std::optional<double> M;
    std::optional<long long> samples;
    std::optional<unsigned long long> seed;
    std::optional<double> mean_re;
    std::optional<double> mean_im;
    std::optional<double> second_abs;
    std::optional<double> stderr_mean;
    std::optional<double> stderr_second;
    std::optional<double> eps;
    std::optional<double> tail_frac;
    std::optional<double> mean_bound;
    std::optional<double> second_bound;
    std::optional<double> tail_bound;
    std::optional<bool> tail_valid;
    // JSON-only extras (exact oracle output, fractions, notes).
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();

    static std::string csv_header();
    std::string csv_row() const;
    nlohmann::ordered_json to_json() const;
};

// Emits records in the requested format ("json" or "csv"); JSON output wraps
// rows with a meta object. Deterministic: no clocks, no environment echoes.
std::string render_records(const std::vector<ResultRecord>& records, const std::string& format);

}  // namespace asymfree::io
