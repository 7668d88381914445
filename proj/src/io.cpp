#include "asymfree/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace asymfree::io {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

nlohmann::ordered_json complex_pair(const std::complex<double>& z) {
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

std::complex<double> complex_from(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw_invalid("matrix file: complex entries must be [re, im] number pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::ordered_json matrix_to_json(const matcore::ComplexMatrix& m) {
    nlohmann::ordered_json j;
    j["k"] = m.rows();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_pair(m(i, c)));
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

matcore::ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.contains("k") || !j.contains("entries"))
        throw_invalid("matrix file: expected fields \"k\" and \"entries\"");
    const long k = j.at("k").get<long>();
    if (k < 1) throw_invalid("matrix file: k must be positive");
    const auto& entries = j.at("entries");
    if (!entries.is_array() || static_cast<long>(entries.size()) != k)
        throw_invalid("matrix file: entries must be a k x k array");
    matcore::ComplexMatrix m(k, k);
    for (long i = 0; i < k; ++i) {
        const auto& row = entries[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<long>(row.size()) != k)
            throw_invalid("matrix file: entries must be a k x k array");
        for (long c = 0; c < k; ++c)
            m(i, c) = complex_from(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

nlohmann::ordered_json observable_to_json(const matcore::DiagonalObservable& x) {
    nlohmann::ordered_json j;
    j["k"] = x.dim();
    nlohmann::ordered_json diag = nlohmann::ordered_json::array();
    for (const auto& e : x.entries()) diag.push_back(complex_pair(e));
    j["diag"] = std::move(diag);
    j["M"] = x.norm_bound();
    return j;
}

matcore::DiagonalObservable observable_from_json(const nlohmann::json& j) {
    if (!j.contains("k") || !j.contains("diag") || !j.contains("M"))
        throw_invalid("observable file: expected fields \"k\", \"diag\", \"M\"");
    const long k = j.at("k").get<long>();
    const auto& diag = j.at("diag");
    if (!diag.is_array() || static_cast<long>(diag.size()) != k)
        throw_invalid("observable file: diag must have k entries");
    std::vector<std::complex<double>> entries;
    entries.reserve(static_cast<std::size_t>(k));
    for (const auto& e : diag) entries.push_back(complex_from(e));
    return matcore::DiagonalObservable::explicit_list(std::move(entries),
                                                      j.at("M").get<double>());
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_invalid("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_invalid("cannot write file: " + path);
    out << content;
}

std::string ResultRecord::csv_header() {
    return "run_id,command,expr,k,n,m,w,M,samples,seed,mean_re,mean_im,second_abs,"
           "stderr_mean,stderr_second,eps,tail_frac,mean_bound,second_bound,tail_bound,"
           "tail_valid";
}

namespace {

template <typename T>
std::string csv_num(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_same_v<T, double>)
        return format_double(*v);
    else
        return std::to_string(*v);
}

std::string csv_text(const std::string& s) {
    bool quote = s.find_first_of(",\"\n") != std::string::npos;
    if (!quote) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string ResultRecord::csv_row() const {
    std::ostringstream os;
    os << csv_text(run_id) << ',' << csv_text(command) << ',' << csv_text(expr) << ','
       << csv_num(k) << ',' << csv_num(n) << ',' << csv_num(m) << ',' << csv_num(w) << ','
       << csv_num(M) << ',' << csv_num(samples) << ',' << csv_num(seed) << ','
       << csv_num(mean_re) << ',' << csv_num(mean_im) << ',' << csv_num(second_abs) << ','
       << csv_num(stderr_mean) << ',' << csv_num(stderr_second) << ',' << csv_num(eps) << ','
       << csv_num(tail_frac) << ',' << csv_num(mean_bound) << ',' << csv_num(second_bound) << ','
       << csv_num(tail_bound) << ','
       << (tail_valid ? (*tail_valid ? "true" : "false") : "");
    return os.str();
}

nlohmann::ordered_json ResultRecord::to_json() const {
    nlohmann::ordered_json j;
    j["run_id"] = run_id;
    j["command"] = command;
    j["expr"] = expr;
    auto put = [&j](const char* name, const auto& opt) {
        if (opt)
            j[name] = *opt;
        else
            j[name] = nullptr;
    };
    put("k", k);
    put("n", n);
    put("m", m);
    put("w", w);
    put("M", M);
    put("samples", samples);
    put("seed", seed);
    put("mean_re", mean_re);
    put("mean_im", mean_im);
    put("second_abs", second_abs);
    put("stderr_mean", stderr_mean);
    put("stderr_second", stderr_second);
    put("eps", eps);
    put("tail_frac", tail_frac);
    put("mean_bound", mean_bound);
    put("second_bound", second_bound);
    put("tail_bound", tail_bound);
    put("tail_valid", tail_valid);
    if (!extra.empty()) j["extra"] = extra;
    return j;
}

std::string render_records(const std::vector<ResultRecord>& records, const std::string& format) {
    if (format == "csv") {
        std::ostringstream os;
        os << ResultRecord::csv_header() << '\n';
        for (const auto& r : records) os << r.csv_row() << '\n';
        return os.str();
    }
    if (format != "json") throw_invalid("output format must be json or csv");
    nlohmann::ordered_json doc;
    doc["meta"] = {{"tool", "asymfree"}, {"version", "0.1.0"}, {"format", 1}};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : records) rows.push_back(r.to_json());
    doc["results"] = std::move(rows);
    return doc.dump(2) + "\n";
}

}  // namespace asymfree::io
