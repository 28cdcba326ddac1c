#pragma once

#include <array>
#include <charconv>
#include <optional>
#include <ostream>
#include <string>

#include "entropy.hpp"
#include "observables.hpp"

namespace sfent {

/// Column order of the run CSV.
inline constexpr std::array<const char*, 19> kCsvColumns{
    "t",         "Ez",        "f",     "vz",    "S_z",     "S_x",     "S_cz", "S_ez", "S_cx", "S_ex",
    "negcond_z", "negcond_x", "mut_z", "mut_x", "S_total", "S_bound", "SL_z", "SL_cz", "SL_ez"};

/// One output time: diagnostics and entropies.
struct RunRow {
    DiagnosticsRow diag;
    std::optional<EntropyRecord> ent;
};

namespace csv {

inline std::string cell(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

inline std::string cell(const std::optional<double>& v) { return v ? cell(*v) : std::string(); }

}  // namespace csv

inline void write_csv_header(std::ostream& os, bool aligned_time = false) {
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) os << (i ? "," : "") << kCsvColumns[i];
    if (aligned_time) os << ",t_aligned";
    os << '\n';
}

/// Missing values (x samples between x ticks, disabled entropies) are empty cells.
inline void write_csv_row(std::ostream& os, const RunRow& r, std::optional<double> t_aligned = std::nullopt) {
    using csv::cell;
    const DiagnosticsRow& d = r.diag;
    os << cell(d.t) << ',' << cell(d.Ez) << ',' << cell(d.f) << ',' << cell(d.vz);
    if (r.ent) {
        const EntropyRecord& e = *r.ent;
        os << ',' << cell(e.S_z) << ',' << cell(e.S_x) << ',' << cell(e.S_cz) << ',' << cell(e.S_ez) << ','
           << cell(e.S_cx) << ',' << cell(e.S_ex) << ',' << cell(e.negcond_z) << ',' << cell(e.negcond_x) << ','
           << cell(e.mut_z) << ',' << cell(e.mut_x) << ',' << cell(e.S_total) << ',' << cell(e.S_bound) << ','
           << cell(e.SL_z) << ',' << cell(e.SL_cz) << ',' << cell(e.SL_ez);
    } else {
        for (int i = 0; i < 15; ++i) os << ',';
    }
    if (t_aligned) os << ',' << cell(*t_aligned);
    os << '\n';
}

}  // namespace sfent
