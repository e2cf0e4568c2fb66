#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "beamblow/bounds.hpp"
#include "beamblow/dynamics.hpp"
#include "beamblow/mesh.hpp"
#include "beamblow/scenarios.hpp"
#include "beamblow/spectra.hpp"

namespace beamblow {

inline constexpr const char* kTimeseriesHeader =
    "t,dt,E,J,I,l2_u,lp1_u,linf_u,l2_v,grad_u_sq,lap_u_sq,dissipation_rate,energy_residual";

void write_timeseries(std::ostream& out, const Trajectory& trajectory);
// x,value in 1D; x,y,value in 2D.
void write_field(std::ostream& out, const Grid& grid, const Field& field);
void write_constants(std::ostream& out, const VariationalConstants& c);
void write_initial_meta(std::ostream& out, const InitialData& data);
// key=value, every field once.
void write_report(std::ostream& out, const BoundReport& report);

// CSV header and row used by the bounds command and the sweep summary.
std::string report_csv_header();
std::string report_csv_row(const BoundReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace beamblow
