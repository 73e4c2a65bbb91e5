#pragma once

#include "smcf/diagnostics.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace smcf {

/// Appends diagnostics rows to a CSV file, flushing after every record so
/// partial results survive aborted runs.
class SeriesWriter {
public:
    explicit SeriesWriter(const std::string& path);
    void append(const DiagnosticsRecord& r);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
};

std::vector<DiagnosticsRecord> read_series(const std::string& path);

} // namespace smcf
