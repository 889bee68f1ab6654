#include "lifesurplus/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace lifesurplus {

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.11e", x);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
    raw_row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (double v : values) fields.push_back(format_number(v));
    raw_row(fields);
}

void CsvWriter::raw_row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_)
        throw std::runtime_error("csv row width does not match the header");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
}

}  // namespace lifesurplus
