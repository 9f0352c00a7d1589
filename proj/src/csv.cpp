#include "regs/csv.hpp"

#include <cstdio>
#include <fstream>

namespace regs {

const char* const diagnostics_csv_header =
    "t,mass,F,D_d,D_r,E_L,D_L,E_g,D_g,clamp_events,monitor_lhs,monitor_rhs";

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void put_opt(std::ostream& os, const std::optional<double>& v) {
    os << ',';
    if (v) os << format_double(*v);
}

} // namespace

void append_diagnostics(std::ostream& os, const DiagnosticsRecord& rec) {
    os << format_double(rec.t) << ',' << format_double(rec.mass);
    put_opt(os, rec.F);
    put_opt(os, rec.D_d);
    put_opt(os, rec.D_r);
    put_opt(os, rec.E_L);
    put_opt(os, rec.D_L);
    put_opt(os, rec.E_g);
    put_opt(os, rec.D_g);
    os << ',' << rec.clamp_events;
    put_opt(os, rec.monitor_lhs);
    put_opt(os, rec.monitor_rhs);
    os << '\n';
}

void write_diagnostics_csv(const std::string& path, std::span<const DiagnosticsRecord> recs) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << diagnostics_csv_header << '\n';
    for (const auto& r : recs) append_diagnostics(out, r);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace regs
