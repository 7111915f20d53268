#include "snv/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "snv/common.hpp"

namespace snv {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (columns.size() != header.size())
        throw invariant_error("csv header and column counts differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns)
        if (col.size() != rows) throw invariant_error("csv columns differ in length");

    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    for (std::size_t c = 0; c < header.size(); ++c)
        out << header[c] << (c + 1 < header.size() ? "," : "\n");
    std::string line;
    for (std::size_t r = 0; r < rows; ++r) {
        line.clear();
        for (std::size_t c = 0; c < columns.size(); ++c) {
            line += format_double(columns[c][r]);
            line += c + 1 < columns.size() ? ',' : '\n';
        }
        out << line;
    }
    if (!out) throw config_error("write failed: " + path);
}

std::vector<std::vector<double>> read_csv(const std::string& path,
                                          std::vector<std::string>* header) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty csv: " + path);

    std::vector<std::string> names;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) names.push_back(cell);
    }
    if (header) *header = names;

    std::vector<std::vector<double>> columns(names.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t pos = 0;
        for (std::size_t c = 0; c < names.size(); ++c) {
            const std::size_t end = c + 1 < names.size() ? line.find(',', pos) : line.size();
            if (end == std::string::npos) throw config_error("short csv row in " + path);
            double v = 0.0;
            const auto res = std::from_chars(line.data() + pos, line.data() + end, v);
            if (res.ec != std::errc())
                throw config_error("unparsable csv value in " + path);
            columns[c].push_back(v);
            pos = end + 1;
        }
    }
    return columns;
}

} // namespace snv
