#include "doctest.h"

#include "betamix/cli.hpp"
#include "betamix/lemma_lab.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using betamix::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path write_temp(const std::string& name, const std::string& text)
{
    const fs::path dir = fs::temp_directory_path() / "betamix_cli_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

std::vector<std::string> data_rows(const std::string& text)
{
    std::vector<std::string> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#')
            rows.push_back(line);
    return rows;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

TEST_CASE("eval")
{
    const fs::path flat = write_temp("flat.json", R"({"M": 2, "weights": [1, 1, 1]})");
    const Result r = call({"eval", "--input", flat.string(), "--grid-points", "5"});
    CHECK(r.code == 0);
    const auto rows = data_rows(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == "x,f,d1,d2,log_f,log_curvature");
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::stod(rows[i].substr(rows[i].find(',') + 1)) == doctest::Approx(1.0));

    const fs::path geo = write_temp("geo.json", R"({"M": 2, "weights": [1, 2, 4]})");
    const Result g = call({"eval", "--input", geo.string(), "--grid-points", "11"});
    CHECK(g.code == 0);
    for (const std::string& row : data_rows(g.out)) {
        if (row[0] == 'x')
            continue;
        const double x = std::stod(row);
        const double f = std::stod(row.substr(row.find(',') + 1));
        CHECK(f == doctest::Approx((2 - x) * (2 - x)).epsilon(1e-12));
    }

    const Result missing = call({"eval", "--input", "/nonexistent/mix.json"});
    CHECK(missing.code == 2);
    CHECK_FALSE(missing.err.empty());
    CHECK(call({"eval", "--input", write_temp("bad.json", "{not json").string()}).code == 2);
}

TEST_CASE("certify exit codes")
{
    CHECK(call({"certify", "--input", write_temp("c1.json", R"({"M":2,"weights":[1,1,1]})").string()}).code == 0);
    const Result bad = call({"certify", "--input", write_temp("c2.json", R"({"M":2,"weights":[1,0.01,1]})").string()});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("\"worst_x\"") != std::string::npos);
    CHECK(call({"certify", "--input", write_temp("c3.json", R"({"M":2,"weights":[0,0,0]})").string()}).code == 4);
    const fs::path cont =
        write_temp("c4.json", R"({"M": 3.5, "knots": [0, 1.5, 3.5], "log_alpha": ["-inf", 0.5, -1]})");
    CHECK(call({"certify", "--input", cont.string(), "--grid-points", "64"}).code == 0);
}

TEST_CASE("lemmas")
{
    const Result r = call({"lemmas", "--M", "5", "--count", "3", "--seed", "4"});
    CHECK(r.code == 0);
    const auto rows = data_rows(r.out);
    CHECK(rows.size() == 1 + betamix::sweep_lemma2_discrete(5).size() + 9);
    CHECK(r.out.find("# rows: " + std::to_string(rows.size() - 1) + " failures: 0") != std::string::npos);
    CHECK(call({"lemmas", "--M", "5", "--count", "3", "--seed", "4"}).out == r.out);
    CHECK(call({"lemmas", "--M", "5", "--count", "3", "--debug-negate"}).code == 1);
}

TEST_CASE("single lemma cases")
{
    const Result exact = call({"lemmas", "--M", "3", "--n", "2", "--k", "1"});
    CHECK(exact.code == 0);
    CHECK(data_rows(exact.out).size() == 4);
    const Result cont = call({"lemmas", "--M", "6.5", "--n", "4", "--q", "2"});
    CHECK(cont.code == 0);
    CHECK(data_rows(cont.out).size() == 4);
    CHECK(call({"lemmas", "--M", "3", "--n", "2", "--k", "1", "--debug-negate"}).code == 1);
    CHECK(call({"lemmas", "--M", "3", "--n", "2"}).code == 2);
    CHECK(call({"lemmas", "--M", "3", "--n", "2", "--k", "2"}).code == 2);
}

TEST_CASE("demo")
{
    const Result sharp = call({"demo", "--M", "10", "--r", "2"});
    CHECK(sharp.code == 0);
    const auto rows = data_rows(sharp.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1].substr(rows[1].rfind(',') + 1)) <= 1e-8);

    const Result kernel = call({"demo", "--M", "2", "--s", "-0.5"});
    CHECK(kernel.code == 0);
    const std::string row = data_rows(kernel.out).at(1);
    CHECK(std::stod(row.substr(row.rfind(',') + 1)) > 0.0);

    CHECK(call({"demo", "--M", "2", "--s", "1"}).code == 2);
    CHECK(call({"demo", "--M", "5", "--r", "1"}).code == 2);
}

TEST_CASE("sample writes identical files for a fixed seed")
{
    const fs::path flat = write_temp("s.json", R"({"M": 2, "weights": [1, 1, 1]})");
    const fs::path a = write_temp("a.csv", ""), b = write_temp("b.csv", "");
    CHECK(call({"sample", "--input", flat.string(), "--count", "1000", "--seed", "3", "--out", a.string()}).code == 0);
    CHECK(call({"sample", "--input", flat.string(), "--count", "1000", "--seed", "3", "--out", b.string()}).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(data_rows(slurp(a)).size() == 1000);
}

TEST_CASE("usage errors")
{
    CHECK(call({}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({"eval"}).code == 2);
    CHECK(call({"--help"}).code == 0);
}
