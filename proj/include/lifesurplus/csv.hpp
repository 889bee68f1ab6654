#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace lifesurplus {

/// Fixed-precision scientific rendering with 12 significant digits, the
/// format of every numeric CSV field the tool emits.
std::string format_number(double x);

/// Minimal CSV emitter: header row first, then rows of numbers. Output is
/// byte-deterministic for identical inputs.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace lifesurplus
