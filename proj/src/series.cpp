#include "smcf/series.hpp"

#include "smcf/config.hpp"

#include <cstdio>
#include <sstream>

namespace smcf {

namespace {

std::string format_row(const DiagnosticsRecord& r) {
    char buf[64];
    std::string row;
    const auto& names = DiagnosticsRecord::column_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.column(names[i]));
        if (i) row += ',';
        row += buf;
    }
    return row;
}

} // namespace

SeriesWriter::SeriesWriter(const std::string& path) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot open series file for writing: " + path);
    const auto& names = DiagnosticsRecord::column_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out_ << ',';
        out_ << names[i];
    }
    out_ << '\n';
    out_.flush();
}

void SeriesWriter::append(const DiagnosticsRecord& r) {
    out_ << format_row(r) << '\n';
    out_.flush();
    if (!out_) throw IoError("write failure on series file: " + path_);
}

std::vector<DiagnosticsRecord> read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open series file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty series file: " + path);

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) header.push_back(col);
    }

    std::vector<DiagnosticsRecord> series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        DiagnosticsRecord r;
        for (const std::string& col : header) {
            if (!std::getline(ss, cell, ','))
                throw IoError("short row in series file: " + path);
            double v = 0.0;
            try {
                v = std::stod(cell);
            } catch (...) {
                throw IoError("bad numeric cell '" + cell + "' in " + path);
            }
            if (col == "t") r.t = v;
            else if (col == "l2") r.l2 = v;
            else if (col == "h2") r.h2 = v;
            else if (col == "hk") r.hk = v;
            else if (col == "w2qprime") r.w2qprime = v;
            else if (col == "sup_du") r.sup_du = v;
            else if (col == "sup_d2u") r.sup_d2u = v;
            else if (col == "volume") r.volume = v;
            else if (col == "a_l2_sq") r.a_l2_sq = v;
            else if (col == "a_sup") r.a_sup = v;
            else if (col == "grad_a_l2_sq") r.grad_a_l2_sq = v;
            else if (col == "linf") r.linf = v;
            else throw IoError("unknown series column '" + col + "' in " + path);
        }
        series.push_back(r);
    }
    return series;
}

} // namespace smcf
