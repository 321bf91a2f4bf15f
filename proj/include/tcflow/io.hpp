/// @file io.hpp
/// @brief Field snapshots, sweep tables and JSON documents on disk.
///
/// A snapshot is one CSV per component with columns (i, j, [k], r, z, [theta],
/// value) plus a `<stem>_meta.json` sidecar holding the grid, gauge, viscosity
/// and wall data. Doubles are written with 17 significant digits, so a
/// write/read cycle reproduces every array bit for bit.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tcflow/grid.hpp"
#include "tcflow/lab.hpp"
#include "tcflow/operators.hpp"

namespace tcflow {

std::string format_double(double v);
/// Strict: the whole token must parse.
double parse_double(const std::string& token);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);
void ensure_directory(const std::filesystem::path& dir);

struct Snapshot {
    Field field;
    std::optional<PressureField> pressure;
    double viscosity = 1.0;
    nlohmann::json meta;
};

/// Writes `<stem>_v_r.csv`, `<stem>_v_theta.csv`, `<stem>_v_z.csv`, optionally
/// `<stem>_p.csv`, and `<stem>_meta.json`. `extra` is stored under "config".
void write_snapshot(const std::filesystem::path& dir, const std::string& stem, const Field& field,
                    const PressureField* pressure, double viscosity, const std::string& gauge,
                    const nlohmann::json& extra = nlohmann::json::object());

Snapshot read_snapshot(const std::filesystem::path& dir, const std::string& stem);

nlohmann::json to_json(const ResidualReport& report);
nlohmann::json to_json(const EnergyReport& report);
nlohmann::json to_json(const SweepSummary& summary);
nlohmann::json to_json(const Thresholds& t);

/// Sweep records, one per row, fixed column order.
void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_records_csv(std::istream& in);

/// Y ladder table: l_cut, y, y_prime, then one y column per term.
void write_energy_csv(std::ostream& out, const std::vector<EnergyReport>& ladder);

}  // namespace tcflow
