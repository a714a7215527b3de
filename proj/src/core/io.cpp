#include "io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sgev::io {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Matrix parse_csv(const std::string& text, const CsvOptions& opts) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool skipped_header = !opts.header;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // skip blank lines
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (!skipped_header) {
            skipped_header = true;
            continue;
        }
        std::vector<double> row;
        std::size_t start = 0;
        int col = 0;
        while (true) {
            std::size_t end = line.find(opts.delimiter, start);
            std::string cell = line.substr(start, end == std::string::npos ? end : end - start);
            ++col;
            const char* begin = cell.c_str();
            char* stop = nullptr;
            double v = std::strtod(begin, &stop);
            while (stop && *stop == ' ') ++stop;
            if (stop == begin || (stop && *stop != '\0'))
                fail(ErrorCode::parse_error, "csv: invalid number at (row " + std::to_string(lineno) +
                                                 ", col " + std::to_string(col) + "): '" + cell + "'");
            if (!std::isfinite(v))
                fail(ErrorCode::parse_error, "csv: non-finite value at (row " + std::to_string(lineno) +
                                                 ", col " + std::to_string(col) + ")");
            row.push_back(v);
            if (end == std::string::npos) break;
            start = end + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail(ErrorCode::parse_error, "csv: row " + std::to_string(lineno) + " has " +
                                             std::to_string(row.size()) + " columns, expected " +
                                             std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(ErrorCode::parse_error, "csv: no data rows");
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return m;
}

Matrix load_csv(const std::string& path, const CsvOptions& opts) {
    try {
        return parse_csv(read_file(path), opts);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::parse_error) fail(e.code(), path + ": " + e.what());
        throw;
    }
}

SymMatrix load_matrix(const std::string& path, const CsvOptions& opts) {
    Matrix m = load_csv(path, opts);
    if (m.rows() != m.cols())
        fail(ErrorCode::parse_error,
             path + ": matrix-csv must be square, got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    return SymMatrix(m.rows(), m.data(), SymMatrix::OnAsymmetric::reject, 1e-8);
}

SymMatrix covariance_from_data(const Matrix& data, bool center, bool scaled) {
    const int p = data.rows(), n = data.cols();
    if (p < 1) fail(ErrorCode::invalid_argument, "covariance_from_data: empty data");
    Matrix c = data;
    if (center) {
        for (int j = 0; j < n; ++j) {
            double mean = 0.0;
            for (int i = 0; i < p; ++i) mean += c(i, j);
            mean /= p;
            for (int i = 0; i < p; ++i) c(i, j) -= mean;
        }
    }
    double s = (scaled && p > 1) ? 1.0 / (p - 1) : 1.0;
    SymMatrix out(n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double acc = 0.0;
            for (int i = 0; i < p; ++i) acc += c(i, a) * c(i, b);
            out.at(a, b) = acc * s;
            out.at(b, a) = acc * s;
        }
    return out;
}

Matrix cross_covariance(const Matrix& x, const Matrix& y, bool center, bool scaled) {
    if (x.rows() != y.rows()) fail(ErrorCode::dimension_mismatch, "cross_covariance: sample counts differ");
    const int p = x.rows();
    Matrix cx = x, cy = y;
    if (center) {
        for (int j = 0; j < cx.cols(); ++j) {
            double mean = 0.0;
            for (int i = 0; i < p; ++i) mean += cx(i, j);
            mean /= p;
            for (int i = 0; i < p; ++i) cx(i, j) -= mean;
        }
        for (int j = 0; j < cy.cols(); ++j) {
            double mean = 0.0;
            for (int i = 0; i < p; ++i) mean += cy(i, j);
            mean /= p;
            for (int i = 0; i < p; ++i) cy(i, j) -= mean;
        }
    }
    double s = (scaled && p > 1) ? 1.0 / (p - 1) : 1.0;
    Matrix out(cx.cols(), cy.cols());
    for (int a = 0; a < cx.cols(); ++a)
        for (int b = 0; b < cy.cols(); ++b) {
            double acc = 0.0;
            for (int i = 0; i < p; ++i) acc += cx(i, a) * cy(i, b);
            out(a, b) = acc * s;
        }
    return out;
}

SymMatrix gram_from_bow(const Matrix& docs) {
    for (int i = 0; i < docs.rows(); ++i)
        for (int j = 0; j < docs.cols(); ++j) {
            double v = docs(i, j);
            if (v != 0.0 && v != 1.0)
                fail(ErrorCode::invalid_argument, "gram_from_bow: non-binary entry at (" +
                                                      std::to_string(i) + "," + std::to_string(j) + ")");
        }
    const int n = docs.rows();
    SymMatrix out(n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double acc = 0.0;
            for (int j = 0; j < docs.cols(); ++j) acc += docs(a, j) * docs(b, j);
            out.at(a, b) = acc;
            out.at(b, a) = acc;
        }
    return out;
}

namespace {

std::string fnv1a(const std::string& canon) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::string canonical(int rows, int cols, const std::vector<double>& data) {
    std::string s = std::to_string(rows) + "x" + std::to_string(cols);
    char buf[40];
    for (double v : data) {
        std::snprintf(buf, sizeof buf, ";%.17g", v);
        s += buf;
    }
    return s;
}

}  // namespace

std::string fingerprint(const Matrix& m) { return fnv1a(canonical(m.rows(), m.cols(), m.data())); }

std::string fingerprint(const SymMatrix& m) {
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.dim()) * m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) data.push_back(m(i, j));
    return fnv1a(canonical(m.dim(), m.dim(), data));
}

std::string make_timestamp() {
    std::time_t t;
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"))
        t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
    else
        t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string to_json(const ResultRecord& rec) {
    nlohmann::ordered_json j;
    j["solver"] = rec.solver;
    j["config"] = rec.config;
    j["x"] = rec.x;
    j["objective"] = rec.objective;
    j["cardinality"] = rec.cardinality;
    j["iterations"] = rec.iterations;
    j["final_step_norm"] = rec.final_step_norm;
    j["converged"] = rec.converged;
    j["fingerprint"] = rec.fingerprint;
    j["timestamp"] = rec.timestamp;
    return j.dump(2);
}

ResultRecord from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::parse_error, std::string("result record: ") + e.what());
    }
    ResultRecord rec;
    try {
        rec.solver = j.at("solver").get<std::string>();
        rec.config = j.at("config").get<std::map<std::string, double>>();
        rec.x = j.at("x").get<std::vector<Vector>>();
        rec.objective = j.at("objective").get<Vector>();
        rec.cardinality = j.at("cardinality").get<std::vector<int>>();
        rec.iterations = j.at("iterations").get<int>();
        rec.final_step_norm = j.at("final_step_norm").get<double>();
        rec.converged = j.at("converged").get<bool>();
        rec.fingerprint = j.at("fingerprint").get<std::string>();
        rec.timestamp = j.at("timestamp").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse_error, std::string("result record: ") + e.what());
    }
    return rec;
}

void save_result(const ResultRecord& rec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io_error, "cannot write " + path);
    out << to_json(rec) << "\n";
    if (!out) fail(ErrorCode::io_error, "write failed: " + path);
}

ResultRecord load_result(const std::string& path) {
    return from_json(read_file(path));
}

}  // namespace sgev::io
