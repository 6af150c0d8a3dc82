#include "fluxtune/table.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace fluxtune {

void ResultTable::add_row(std::vector<Cell> row)
{
    if (row.size() != columns.size()) {
        throw std::invalid_argument("ResultTable: row width " +
                                    std::to_string(row.size()) +
                                    " does not match column count " +
                                    std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

OutputFormat parse_format(const std::string& name)
{
    if (name == "csv") {
        return OutputFormat::csv;
    }
    if (name == "json") {
        return OutputFormat::json;
    }
    throw std::invalid_argument("unknown output format '" + name +
                                "' (expected csv or json)");
}

std::string format_double(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(const std::string& text)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string cell_text(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) {
        return format_double(*d);
    }
    if (const auto* i = std::get_if<std::int64_t>(&c)) {
        return std::to_string(*i);
    }
    if (const auto* b = std::get_if<bool>(&c)) {
        return *b ? "true" : "false";
    }
    return std::get<std::string>(c);
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string to_csv(const ResultTable& t)
{
    std::ostringstream os;
    for (const auto& [key, value] : t.provenance) {
        os << "# " << key << ": " << value << "\r\n";
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        os << (i ? "," : "") << csv_escape(t.columns[i]);
    }
    os << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << csv_escape(cell_text(row[i]));
        }
        os << "\r\n";
    }
    return os.str();
}

std::string to_json_text(const ResultTable& t)
{
    nlohmann::ordered_json doc;
    auto& prov = doc["provenance"];
    prov = nlohmann::ordered_json::object();
    for (const auto& [key, value] : t.provenance) {
        prov[key] = value;
    }
    auto& rows = doc["rows"];
    rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (const auto* d = std::get_if<double>(&row[i])) {
                obj[t.columns[i]] = *d;
            } else if (const auto* n = std::get_if<std::int64_t>(&row[i])) {
                obj[t.columns[i]] = *n;
            } else if (const auto* b = std::get_if<bool>(&row[i])) {
                obj[t.columns[i]] = *b;
            } else {
                obj[t.columns[i]] = std::get<std::string>(row[i]);
            }
        }
        rows.push_back(std::move(obj));
    }
    return doc.dump(2) + "\n";
}

void write_table(const ResultTable& t, OutputFormat format,
                 const std::string& path)
{
    const std::string text =
        format == OutputFormat::csv ? to_csv(t) : to_json_text(t);
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw std::runtime_error("cannot open '" + tmp + "' for writing");
        }
        os << text;
        os.flush();
        if (!os) {
            throw std::runtime_error("write failed for '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot rename '" + tmp + "' to '" + path +
                                 "'");
    }
}

} // namespace fluxtune
