// SPDX-License-Identifier: MIT
#pragma once

// Measurement output: CSV rows with IEEE-754 shortest round-trip decimal
// formatting, so that re-parsing a file reproduces every double bit-exactly
// and identical runs produce bit-identical files.

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace bouss::io {

/// Shortest decimal string that round-trips to the same double.
inline std::string shortest(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) throw std::runtime_error("shortest: to_chars failed");
    return std::string(buf, res.ptr);
}

/// One measurement: a quantity identifier plus the (a, b, p) norm indices
/// (repurposed as documented per experiment kind when the measurement is not
/// a weighted norm), the value, and a data-quality flag.
struct MeasurementRow {
    double t = 0.0;
    std::string quantity;
    double a = 0.0;
    double b = 0.0;
    double p = 2.0;
    double value = 0.0;
    bool flag = false;
};

inline std::string csv_line(const MeasurementRow& r) {
    return shortest(r.t) + "," + r.quantity + "," + shortest(r.a) + "," + shortest(r.b) + "," +
           shortest(r.p) + "," + shortest(r.value) + "," + (r.flag ? "1" : "0");
}

/// Write rows to a CSV file with the fixed header `t,quantity,a,b,p,value,flag`.
inline void write_csv(const std::string& path, const std::vector<MeasurementRow>& rows) {
    std::ofstream out(path, std::ios::binary); // binary: identical bytes on every platform
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << "t,quantity,a,b,p,value,flag\n";
    for (const auto& r : rows) out << csv_line(r) << "\n";
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

} // namespace bouss::io
