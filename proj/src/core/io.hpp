#pragma once

#include <map>
#include <string>

#include "matrix.hpp"

namespace sgev::io {

struct CsvOptions {
    char delimiter = ',';
    bool header = false;  // skip the first row
};

/// Numeric CSV into a dense matrix; parse failures report (row, column).
Matrix load_csv(const std::string& path, const CsvOptions& opts = {});
Matrix parse_csv(const std::string& text, const CsvOptions& opts = {});

/// Square symmetric matrix: asymmetry up to 1e-8 is averaged away, anything
/// larger is rejected with the max deviation in the message.
SymMatrix load_matrix(const std::string& path, const CsvOptions& opts = {});

/// C^T C of an optionally column-centered data matrix; `scaled` divides by
/// (rows - 1).
SymMatrix covariance_from_data(const Matrix& data, bool center, bool scaled = false);

/// Cross block C_x^T C_y with shared centering flags.
Matrix cross_covariance(const Matrix& x, const Matrix& y, bool center, bool scaled = false);

/// E E^T of a binary bag-of-words matrix; non-binary entries are rejected.
SymMatrix gram_from_bow(const Matrix& docs);

/// FNV-1a over a canonical text serialization (dims + %.17g entries).
std::string fingerprint(const Matrix& m);
std::string fingerprint(const SymMatrix& m);

/// JSON-shaped persisted result with stable field names.
struct ResultRecord {
    std::string solver;
    std::map<std::string, double> config;
    std::vector<Vector> x;      // one or more solution vectors
    Vector objective;           // per component
    std::vector<int> cardinality;
    int iterations = 0;
    double final_step_norm = 0.0;
    bool converged = false;
    std::string fingerprint;
    std::string timestamp;
};

/// ISO-8601 UTC; honors SOURCE_DATE_EPOCH for reproducible output.
std::string make_timestamp();

std::string to_json(const ResultRecord& rec);
ResultRecord from_json(const std::string& text);

void save_result(const ResultRecord& rec, const std::string& path);
ResultRecord load_result(const std::string& path);

}  // namespace sgev::io
