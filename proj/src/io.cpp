#include "bellstat/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "bellstat/errors.hpp"

namespace bellstat {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::array<std::string, 4> kTableKeys = {"11", "12", "21", "22"};

// JSON objects silently keep only the last of duplicate keys, so a repeated
// setting pair inside "tables" must be caught on the raw text: walk the
// object following "tables" and collect its depth-1 keys.
void check_duplicate_table_keys(const std::string& text) {
    const auto pos = text.find("\"tables\"");
    if (pos == std::string::npos) return;  // missing key reported later
    const auto open = text.find('{', pos);
    if (open == std::string::npos) return;

    int depth = 0;
    bool in_string = false, escaped = false, key_position = true;
    std::string current;
    std::vector<std::string> keys;
    for (std::size_t i = open; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped)
                escaped = false;
            else if (c == '\\')
                escaped = true;
            else if (c == '"') {
                in_string = false;
                if (depth == 1 && key_position) keys.push_back(current);
            } else
                current += c;
            continue;
        }
        switch (c) {
            case '"':
                in_string = true;
                current.clear();
                break;
            case '{':
            case '[':
                ++depth;
                key_position = c == '{';
                break;
            case '}':
            case ']':
                if (--depth == 0) i = text.size();
                break;
            case ':':
                key_position = false;
                break;
            case ',':
                if (depth == 1) key_position = true;
                break;
            default:
                break;
        }
    }
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = i + 1; j < keys.size(); ++j)
            if (keys[i] == keys[j])
                throw ParseError("duplicate setting pair (" +
                                 std::string(1, keys[i][0]) + "," +
                                 std::string(1, keys[i][1]) + ") in tables");
}

std::int64_t json_count(const ordered_json& cell, const std::string& where) {
    if (!cell.is_number_integer() ||
        (cell.is_number_unsigned() == false && cell.get<std::int64_t>() < 0)) {
        if (cell.is_number_integer() && cell.get<std::int64_t>() < 0)
            throw ParseError("negative count at " + where + ": " +
                             cell.dump());
        if (!cell.is_number_integer())
            throw ParseError("count at " + where +
                             " is not an integer: " + cell.dump());
    }
    return cell.get<std::int64_t>();
}

BellDataset parse_json(const std::string& input) {
    ordered_json j;
    try {
        j = ordered_json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("top level must be a JSON object");
    check_duplicate_table_keys(input);

    BellDataset ds;
    if (!j.contains("name") || !j["name"].is_string())
        throw ParseError("missing or non-string field \"name\"");
    ds.name = j["name"].get<std::string>();

    if (j.contains("outcome_labels")) {
        const ordered_json& labels = j["outcome_labels"];
        for (const auto& [side, target] :
             {std::pair<const char*, std::array<std::string, 2>*>{
                  "alice", &ds.alice_labels},
              {"bob", &ds.bob_labels}}) {
            if (!labels.contains(side)) continue;
            const ordered_json& pair = labels[side];
            if (!pair.is_array() || pair.size() != 2 ||
                !pair[0].is_string() || !pair[1].is_string())
                throw ParseError(std::string("outcome_labels.") + side +
                                 " must be an array of two strings");
            (*target)[0] = pair[0].get<std::string>();
            (*target)[1] = pair[1].get<std::string>();
        }
    }

    if (!j.contains("tables") || !j["tables"].is_object())
        throw ParseError("missing or non-object field \"tables\"");
    const ordered_json& tables = j["tables"];
    for (int i = 0; i < 4; ++i) {
        const std::string& key = kTableKeys[i];
        if (!tables.contains(key))
            throw ParseError("missing setting pair (" +
                             std::string(1, key[0]) + "," +
                             std::string(1, key[1]) + ")");
        const ordered_json& t = tables[key];
        if (!t.is_array() || t.size() != 2 || !t[0].is_array() ||
            !t[1].is_array() || t[0].size() != 2 || t[1].size() != 2)
            throw ParseError("tables." + key + " must be a 2x2 array");
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                ds.tables[i].at(r, c) =
                    json_count(t[r][c], "tables." + key + "[" +
                                            std::to_string(r) + "][" +
                                            std::to_string(c) + "]");
    }
    ds.canonical = false;
    return ds;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto a = field.find_first_not_of(" \t\r");
        const auto b = field.find_last_not_of(" \t\r");
        fields.push_back(a == std::string::npos
                             ? ""
                             : field.substr(a, b - a + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::int64_t csv_int(const std::string& field, int row,
                     const std::string& column) {
    std::int64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("row " + std::to_string(row) + ", column " + column +
                         ": not an integer: \"" + field + "\"");
    return value;
}

const std::array<std::string, 6> kCsvHeader = {"setting_a", "setting_b",
                                               "n_pp",      "n_pm",
                                               "n_mp",      "n_mm"};

BellDataset parse_csv(const std::string& input) {
    std::vector<std::string> lines;
    std::stringstream ss(input);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") != std::string::npos)
            lines.push_back(line);
    }
    if (lines.empty()) throw ParseError("empty CSV input");

    const std::vector<std::string> header = split_csv_line(lines[0]);
    if (header.size() != 6 ||
        !std::equal(header.begin(), header.end(), kCsvHeader.begin()))
        throw ParseError(
            "row 1: header must be "
            "setting_a,setting_b,n_pp,n_pm,n_mp,n_mm");

    BellDataset ds;
    std::array<bool, 4> seen{};
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const int row = static_cast<int>(r) + 1;
        const std::vector<std::string> f = split_csv_line(lines[r]);
        if (f.size() != 6)
            throw ParseError("row " + std::to_string(row) + ": expected 6 "
                             "fields, got " + std::to_string(f.size()));
        const std::int64_t a = csv_int(f[0], row, "setting_a");
        const std::int64_t b = csv_int(f[1], row, "setting_b");
        if (a < 1 || a > 2 || b < 1 || b > 2)
            throw ParseError("row " + std::to_string(row) +
                             ": settings must be 1 or 2, got (" +
                             std::to_string(a) + "," + std::to_string(b) +
                             ")");
        const int block = static_cast<int>(2 * (a - 1) + (b - 1));
        if (seen[block])
            throw ParseError("row " + std::to_string(row) +
                             ": duplicate setting pair (" + std::to_string(a) +
                             "," + std::to_string(b) + ")");
        seen[block] = true;
        for (int j = 0; j < 4; ++j) {
            const std::int64_t v = csv_int(f[2 + j], row, kCsvHeader[2 + j]);
            if (v < 0)
                throw ParseError("row " + std::to_string(row) + ", column " +
                                 kCsvHeader[2 + j] + ": negative count " +
                                 std::to_string(v));
            ds.tables[block].at(j / 2, j % 2) = v;
        }
    }
    for (int i = 0; i < 4; ++i)
        if (!seen[i])
            throw ParseError("missing setting pair (" +
                             std::to_string(i / 2 + 1) + "," +
                             std::to_string(i % 2 + 1) + ")");
    ds.canonical = false;
    return ds;
}

}  // namespace

BellDataset parse_dataset(const std::string& input, Format format) {
    return format == Format::json ? parse_json(input) : parse_csv(input);
}

std::string serialize_dataset(const BellDataset& ds, Format format) {
    if (format == Format::csv) {
        std::string out = "setting_a,setting_b,n_pp,n_pm,n_mp,n_mm\n";
        for (int i = 0; i < 4; ++i) {
            out += std::to_string(i / 2 + 1) + "," + std::to_string(i % 2 + 1);
            for (int j = 0; j < 4; ++j)
                out += "," + std::to_string(ds.tables[i].at(j / 2, j % 2));
            out += "\n";
        }
        return out;
    }
    ordered_json j;
    j["name"] = ds.name;
    j["outcome_labels"]["alice"] = {ds.alice_labels[0], ds.alice_labels[1]};
    j["outcome_labels"]["bob"] = {ds.bob_labels[0], ds.bob_labels[1]};
    for (int i = 0; i < 4; ++i) {
        const CountTable& t = ds.tables[i];
        j["tables"][kTableKeys[i]] = {{t.at(0, 0), t.at(0, 1)},
                                      {t.at(1, 0), t.at(1, 1)}};
    }
    return j.dump(2) + "\n";
}

BellDataset load_dataset_file(const std::string& path) {
    Format format;
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        format = Format::json;
    else if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
        format = Format::csv;
    else
        throw ParseError("cannot infer format of \"" + path +
                         "\": expected a .json or .csv extension");

    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open \"" + path + "\"");
    std::stringstream buf;
    buf << in.rdbuf();
    BellDataset ds = parse_dataset(buf.str(), format);
    if (ds.name.empty()) {
        // Derive a name from the file for CSV inputs, which carry none.
        auto slash = path.find_last_of("/\\");
        std::string base =
            slash == std::string::npos ? path : path.substr(slash + 1);
        auto dot = base.find_last_of('.');
        ds.name = dot == std::string::npos ? base : base.substr(0, dot);
    }
    return ds;
}

}  // namespace bellstat
