#pragma once

#include "regs/stepper.hpp"

#include <ostream>
#include <span>
#include <string>

// Diagnostics tables: fixed column order
//   t, mass, F, D_d, D_r, E_L, D_L, E_g, D_g, clamp_events, monitor_lhs, monitor_rhs
// Values are written with 17 significant digits so they parse back bit-exactly;
// absent quantities are empty cells.

namespace regs {

extern const char* const diagnostics_csv_header;

void append_diagnostics(std::ostream& os, const DiagnosticsRecord& rec);
void write_diagnostics_csv(const std::string& path, std::span<const DiagnosticsRecord> recs);

// shortest round-trip-exact decimal rendering used across all CSV output
std::string format_double(double x);

} // namespace regs
