#include "lossforecast/csv.hpp"

#include "lossforecast/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lossforecast {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\"");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r\"");
    return s.substr(a, b - a + 1);
}

} // namespace

std::vector<DatedObservation> ingest_csv(const std::filesystem::path& path,
                                         const std::string& id) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path.string() + "' for indicator '" + id + "'");

    std::string line;
    if (!std::getline(in, line))
        throw ParseError(path.string() + ": empty file");
    std::vector<std::string> header = split_line(line);
    int date_col = -1, value_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string h = strip(header[i]);
        if (h == "DATE")
            date_col = static_cast<int>(i);
        else if (h == "VALUE")
            value_col = static_cast<int>(i);
    }
    if (date_col < 0 || value_col < 0)
        throw ParseError(path.string() + ": header must contain DATE and VALUE columns");

    std::vector<DatedObservation> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty())
            continue;
        std::vector<std::string> fields = split_line(line);
        if (fields.size() <= static_cast<std::size_t>(std::max(date_col, value_col)))
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": too few columns");

        std::string date = strip(fields[static_cast<std::size_t>(date_col)]);
        DatedObservation obs;
        if (date.size() != 10 || date[4] != '-' || date[7] != '-')
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad date '" +
                             date + "'");
        auto parse_int = [&](std::size_t pos, std::size_t len, int& target) {
            auto res = std::from_chars(date.data() + pos, date.data() + pos + len, target);
            if (res.ec != std::errc() || res.ptr != date.data() + pos + len)
                throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad date '" +
                                 date + "'");
        };
        parse_int(0, 4, obs.year);
        parse_int(5, 2, obs.month);
        parse_int(8, 2, obs.day);
        if (obs.month < 1 || obs.month > 12 || obs.day < 1 || obs.day > 31)
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad date '" +
                             date + "'");

        if (!out.empty()) {
            const DatedObservation& prev = out.back();
            bool earlier = obs.year < prev.year ||
                           (obs.year == prev.year &&
                            (obs.month < prev.month ||
                             (obs.month == prev.month && obs.day < prev.day)));
            if (earlier)
                throw NonMonotoneDates(path.string() + ":" + std::to_string(line_no) +
                                       ": date '" + date + "' goes backwards");
        }

        std::string value = strip(fields[static_cast<std::size_t>(value_col)]);
        if (value.empty() || value == ".")
            continue; // the source's missing-value marker
        char* end = nullptr;
        obs.value = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0')
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad value '" +
                             value + "'");
        out.push_back(obs);
    }
    if (out.empty())
        throw EmptyInput(path.string() + ": no observations for indicator '" + id + "'");
    return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    for (const auto& row : rows)
        if (row.size() != header.size())
            throw LengthMismatch("write_csv: row width " + std::to_string(row.size()) +
                                 " does not match header width " +
                                 std::to_string(header.size()));
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write '" + path.string() + "'");
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot hash '" + path.string() + "'");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

} // namespace lossforecast
