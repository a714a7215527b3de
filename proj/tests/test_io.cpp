#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "core/io.hpp"
#include "helpers.hpp"

using namespace sgev;
using namespace sgev::io;

namespace {

std::string temp_path(const std::string& name) { return "/tmp/sgev_io_test_" + name; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("parse_csv basics") {
    Matrix m = parse_csv("1,0\n0,1\n");
    CHECK(m.rows() == 2);
    CHECK(m(0, 0) == 1.0);
    CHECK(m(0, 1) == 0.0);

    CHECK_THROWS_WITH_AS(parse_csv("1,abc\n"), doctest::Contains("row 1, col 2"), Error);
    CHECK_THROWS_AS(parse_csv("1,2\n3\n"), Error);   // ragged
    CHECK_THROWS_AS(parse_csv(""), Error);           // empty
    CHECK_THROWS_AS(parse_csv("1,inf\n"), Error);    // non-finite

    Matrix h = parse_csv("colA;colB\n1.5;2\n", CsvOptions{';', true});
    CHECK(h.rows() == 1);
    CHECK(h(0, 0) == 1.5);
}

TEST_CASE("load_matrix symmetrizes small deviations and rejects larger ones") {
    std::string p = temp_path("sym.csv");
    write_file(p, "1,0.5000000001\n0.5,1\n");  // deviation 1e-10 <= 1e-8
    SymMatrix s = load_matrix(p);
    CHECK(s(0, 1) == doctest::Approx(0.50000000005));
    CHECK(s(0, 1) == s(1, 0));

    write_file(p, "1,0.6\n0.5,1\n");
    CHECK_THROWS_WITH_AS(load_matrix(p), doctest::Contains("asymmetric"), Error);

    write_file(p, "1,2,3\n4,5,6\n");
    CHECK_THROWS_WITH_AS(load_matrix(p), doctest::Contains("square"), Error);
    std::remove(p.c_str());

    CHECK_THROWS_AS(load_matrix("/nonexistent/file.csv"), Error);
}

TEST_CASE("pit props fixture loads with a unit diagonal") {
    SymMatrix a = load_matrix(SGEV_DATA_DIR "/pitprops.csv");
    CHECK(a.dim() == 13);
    for (int i = 0; i < 13; ++i) CHECK(a(i, i) == 1.0);
    CHECK(a(0, 1) == 0.954);
    CHECK(a.trace() == doctest::Approx(13.0));
}

TEST_CASE("covariance_from_data") {
    // single row: rank-one outer product structure
    Matrix row(1, 3);
    row(0, 0) = 1;
    row(0, 1) = 2;
    row(0, 2) = 3;
    SymMatrix c = covariance_from_data(row, false);
    CHECK(c(0, 0) == 1.0);
    CHECK(c(1, 2) == 6.0);
    CHECK(c(2, 2) == 9.0);

    // centered identical rows vanish
    Matrix two(2, 3);
    for (int j = 0; j < 3; ++j) {
        two(0, j) = j + 1.0;
        two(1, j) = j + 1.0;
    }
    CHECK(covariance_from_data(two, true).max_abs() == 0.0);

    // random data against a naive double loop, centered and scaled
    auto gen = testutil::rng(71);
    Matrix d = testutil::random_dense(gen, 10, 4);
    SymMatrix got = covariance_from_data(d, true, true);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double ma = 0, mb = 0;
            for (int i = 0; i < 10; ++i) {
                ma += d(i, a);
                mb += d(i, b);
            }
            ma /= 10;
            mb /= 10;
            double want = 0.0;
            for (int i = 0; i < 10; ++i) want += (d(i, a) - ma) * (d(i, b) - mb);
            want /= 9.0;
            CHECK(std::abs(got(a, b) - want) <= 1e-12);
        }
}

TEST_CASE("gram_from_bow") {
    Matrix docs(2, 4);
    docs(0, 0) = 1;
    docs(0, 2) = 1;
    docs(1, 0) = 1;
    docs(1, 2) = 1;
    SymMatrix g = gram_from_bow(docs);
    CHECK(g(0, 1) == 2.0);  // identical documents share their word count
    CHECK(g(0, 0) == 2.0);

    Matrix disjoint(2, 4);
    disjoint(0, 0) = 1;
    disjoint(1, 3) = 1;
    CHECK(gram_from_bow(disjoint)(0, 1) == 0.0);

    Matrix bad(1, 2);
    bad(0, 0) = 0.5;
    CHECK_THROWS_WITH_AS(gram_from_bow(bad), doctest::Contains("non-binary"), Error);

    // random binary matrix: PSD within tolerance
    auto gen = testutil::rng(72);
    Matrix rb(20, 50);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 50; ++j) rb(i, j) = (gen() % 4 == 0) ? 1.0 : 0.0;
    SymMatrix gr = gram_from_bow(rb);
    CHECK(lambda_min(gr) >= -1e-8);
}

TEST_CASE("result record round trip at full precision") {
    auto gen = testutil::rng(73);
    ResultRecord rec;
    rec.solver = "pca";
    rec.config = {{"rho", 1.2345678901234567}, {"epsilon", 2.220446049250313e-16}};
    rec.x = {testutil::random_vector(gen, 7), testutil::random_vector(gen, 7)};
    rec.objective = {3.141592653589793, 1.0 / 3.0};
    rec.cardinality = {7, 3};
    rec.iterations = 42;
    rec.final_step_norm = 8.765432109876543e-7;
    rec.converged = true;
    rec.fingerprint = "deadbeefdeadbeef";
    rec.timestamp = make_timestamp();

    std::string p = temp_path("rec.json");
    save_result(rec, p);
    ResultRecord back = load_result(p);
    CHECK(back.solver == rec.solver);
    CHECK(back.config == rec.config);
    CHECK(back.x == rec.x);               // bitwise: doubles round-trip
    CHECK(back.objective == rec.objective);
    CHECK(back.cardinality == rec.cardinality);
    CHECK(back.iterations == rec.iterations);
    CHECK(back.final_step_norm == rec.final_step_norm);
    CHECK(back.converged == rec.converged);
    CHECK(back.fingerprint == rec.fingerprint);
    std::remove(p.c_str());
}

TEST_CASE("truncated result file reports a parse error") {
    std::string p = temp_path("trunc.json");
    write_file(p, "{\"solver\": \"pca\", \"config\": {");
    CHECK_THROWS_AS(load_result(p), Error);
    write_file(p, "{\"solver\": \"pca\"}");  // valid json, missing fields
    CHECK_THROWS_AS(load_result(p), Error);
    std::remove(p.c_str());
}

TEST_CASE("fingerprint is sensitive to any entry change") {
    auto gen = testutil::rng(74);
    SymMatrix a = testutil::random_symmetric(gen, 5);
    std::string fp = fingerprint(a);
    CHECK(fp.size() == 16);
    SymMatrix b = a;
    b.set(2, 3, a(2, 3) + 1e-13);
    CHECK(fingerprint(b) != fp);
    SymMatrix c = a;
    CHECK(fingerprint(c) == fp);
}

TEST_CASE("timestamp honors SOURCE_DATE_EPOCH") {
    setenv("SOURCE_DATE_EPOCH", "0", 1);
    CHECK(make_timestamp() == "1970-01-01T00:00:00Z");
    unsetenv("SOURCE_DATE_EPOCH");
}
