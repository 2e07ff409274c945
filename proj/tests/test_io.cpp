#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "bellstat/counts.hpp"
#include "bellstat/errors.hpp"
#include "bellstat/io.hpp"

using namespace bellstat;

namespace {

std::string error_text(const std::string& input, Format fmt) {
    try {
        parse_dataset(input, fmt);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";  // no error raised
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name, const std::string& content) {
        path = std::filesystem::temp_directory_path() / name;
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

const char* kMinimalJson = R"({
  "name": "mini",
  "tables": {
    "11": [[1, 2], [3, 4]],
    "12": [[5, 6], [7, 8]],
    "21": [[9, 10], [11, 12]],
    "22": [[13, 14], [15, 16]]
  }
})";

}  // namespace

TEST_SUITE("io") {

TEST_CASE("JSON round-trips every embedded dataset") {
    for (const std::string& name : embedded_names()) {
        const BellDataset ds = load_embedded(name);
        const std::string text = serialize_dataset(ds, Format::json);
        const BellDataset back = parse_dataset(text, Format::json);
        CAPTURE(name);
        CHECK(back == ds);
        CHECK_FALSE(back.canonical);  // parsing never asserts orientation
    }
}

TEST_CASE("CSV round-trips counts; name and labels are not carried") {
    for (const std::string& name : embedded_names()) {
        const BellDataset ds = load_embedded(name);
        const BellDataset back =
            parse_dataset(serialize_dataset(ds, Format::csv), Format::csv);
        CAPTURE(name);
        CHECK(back.tables == ds.tables);
        CHECK(back.name.empty());
        CHECK(back.alice_labels == std::array<std::string, 2>{"+", "-"});
    }
}

TEST_CASE("CSV serialization is the documented fixed layout") {
    const std::string expect =
        "setting_a,setting_b,n_pp,n_pm,n_mp,n_mm\n"
        "1,1,23,3,4,23\n"
        "1,2,33,11,5,30\n"
        "2,1,22,10,6,24\n"
        "2,2,4,20,21,6\n";
    CHECK(serialize_dataset(load_embedded("delft"), Format::csv) == expect);
}

TEST_CASE("JSON parsing accepts minimal input and optional labels") {
    const BellDataset ds = parse_dataset(kMinimalJson, Format::json);
    CHECK(ds.name == "mini");
    CHECK(ds.alice_labels == std::array<std::string, 2>{"+", "-"});
    CHECK(ds.table(1, 1).at(0, 1) == 2);
    CHECK(ds.table(2, 2).at(1, 1) == 16);

    const std::string labelled = R"({
      "name": "lab",
      "outcome_labels": {"alice": ["d", "n"]},
      "tables": {"11": [[1,1],[1,1]], "12": [[1,1],[1,1]],
                 "21": [[1,1],[1,1]], "22": [[1,1],[1,1]]}
    })";
    const BellDataset lab = parse_dataset(labelled, Format::json);
    CHECK(lab.alice_labels == std::array<std::string, 2>{"d", "n"});
    CHECK(lab.bob_labels == std::array<std::string, 2>{"+", "-"});
}

TEST_CASE("JSON parse errors name the offending field") {
    CHECK_THROWS_AS(parse_dataset("{not json", Format::json), ParseError);
    CHECK(error_text("{not json", Format::json).find("malformed JSON") !=
          std::string::npos);

    CHECK(error_text("[1,2,3]", Format::json).find("top level") !=
          std::string::npos);

    CHECK(error_text(R"({"tables": {}})", Format::json).find("\"name\"") !=
          std::string::npos);

    CHECK(error_text(R"({"name": "x"})", Format::json).find("\"tables\"") !=
          std::string::npos);

    const std::string missing_pair = R"({"name":"x","tables":{
        "11": [[1,1],[1,1]], "12": [[1,1],[1,1]], "22": [[1,1],[1,1]]}})";
    CHECK(error_text(missing_pair, Format::json).find("(2,1)") !=
          std::string::npos);

    const std::string bad_shape = R"({"name":"x","tables":{
        "11": [[1,1,1],[1,1]], "12": [[1,1],[1,1]],
        "21": [[1,1],[1,1]], "22": [[1,1],[1,1]]}})";
    CHECK(error_text(bad_shape, Format::json).find("2x2") !=
          std::string::npos);

    const std::string negative = R"({"name":"x","tables":{
        "11": [[1,-3],[1,1]], "12": [[1,1],[1,1]],
        "21": [[1,1],[1,1]], "22": [[1,1],[1,1]]}})";
    const std::string neg_msg = error_text(negative, Format::json);
    CHECK(neg_msg.find("negative") != std::string::npos);
    CHECK(neg_msg.find("tables.11[0][1]") != std::string::npos);

    const std::string fractional = R"({"name":"x","tables":{
        "11": [[1,1],[1,1.5]], "12": [[1,1],[1,1]],
        "21": [[1,1],[1,1]], "22": [[1,1],[1,1]]}})";
    const std::string frac_msg = error_text(fractional, Format::json);
    CHECK(frac_msg.find("not an integer") != std::string::npos);
    CHECK(frac_msg.find("tables.11[1][1]") != std::string::npos);
}

TEST_CASE("JSON duplicate setting pairs are rejected despite object merging") {
    const std::string dup = R"({"name":"x","tables":{
        "11": [[1,1],[1,1]], "12": [[1,1],[1,1]],
        "11": [[2,2],[2,2]], "21": [[1,1],[1,1]], "22": [[1,1],[1,1]]}})";
    const std::string msg = error_text(dup, Format::json);
    CHECK(msg.find("duplicate setting pair (1,1)") != std::string::npos);

    // Keys inside the 2x2 arrays or other objects must not confuse the scan.
    CHECK_NOTHROW(parse_dataset(kMinimalJson, Format::json));
}

TEST_CASE("CSV accepts whitespace, CRLF and arbitrary row order") {
    const std::string messy =
        "setting_a, setting_b, n_pp, n_pm, n_mp, n_mm\r\n"
        "2,2,4,20,21,6\r\n"
        "  1 , 1 , 23 , 3 , 4 , 23\n"
        "\n"
        "2,1,22,10,6,24\n"
        "1,2,33,11,5,30\n";
    const BellDataset ds = parse_dataset(messy, Format::csv);
    CHECK(ds.tables == load_embedded("delft").tables);
}

TEST_CASE("CSV parse errors cite row numbers") {
    CHECK(error_text("", Format::csv).find("empty") != std::string::npos);

    CHECK(error_text("a,b,c\n1,1,1,1,1,1\n", Format::csv)
              .find("header") != std::string::npos);

    const std::string head = "setting_a,setting_b,n_pp,n_pm,n_mp,n_mm\n";
    CHECK(error_text(head + "1,1,1,1,1\n", Format::csv)
              .find("row 2") != std::string::npos);

    CHECK(error_text(head + "1,1,1,1,1,1\n3,1,1,1,1,1\n", Format::csv)
              .find("row 3") != std::string::npos);

    const std::string dup =
        head + "1,1,1,1,1,1\n1,2,1,1,1,1\n1,1,2,2,2,2\n";
    const std::string dup_msg = error_text(dup, Format::csv);
    CHECK(dup_msg.find("row 4") != std::string::npos);
    CHECK(dup_msg.find("duplicate setting pair (1,1)") != std::string::npos);

    const std::string missing = head + "1,1,1,1,1,1\n1,2,1,1,1,1\n"
                                       "2,1,1,1,1,1\n";
    CHECK(error_text(missing, Format::csv).find("missing setting pair (2,2)") !=
          std::string::npos);

    const std::string negative =
        head + "1,1,1,1,1,1\n1,2,1,-4,1,1\n2,1,1,1,1,1\n2,2,1,1,1,1\n";
    const std::string neg_msg = error_text(negative, Format::csv);
    CHECK(neg_msg.find("row 3") != std::string::npos);
    CHECK(neg_msg.find("n_pm") != std::string::npos);
    CHECK(neg_msg.find("negative") != std::string::npos);

    const std::string text_field = head + "1,1,1,one,1,1\n";
    const std::string txt_msg = error_text(text_field, Format::csv);
    CHECK(txt_msg.find("not an integer") != std::string::npos);
    CHECK(txt_msg.find("\"one\"") != std::string::npos);
}

TEST_CASE("load_dataset_file infers format and derives CSV names") {
    const BellDataset delft = load_embedded("delft");

    const TempFile jf("bellstat_io_test.json",
                      serialize_dataset(delft, Format::json));
    const BellDataset from_json = load_dataset_file(jf.path.string());
    CHECK(from_json == delft);

    const TempFile cf("bellstat_io_test.csv",
                      serialize_dataset(delft, Format::csv));
    const BellDataset from_csv = load_dataset_file(cf.path.string());
    CHECK(from_csv.tables == delft.tables);
    CHECK(from_csv.name == "bellstat_io_test");  // stem of the file name

    const TempFile xf("bellstat_io_test.txt", "whatever");
    CHECK_THROWS_AS(load_dataset_file(xf.path.string()), ParseError);

    try {
        load_dataset_file("/nonexistent/bellstat.json");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("cannot open") != std::string::npos);
    }
}

}  // TEST_SUITE
