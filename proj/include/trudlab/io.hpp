#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "trudlab/eigensolver.hpp"
#include "trudlab/experiments.hpp"
#include "trudlab/operators.hpp"
#include "trudlab/pde_solver.hpp"

namespace trudlab {

using Json = nlohmann::ordered_json;

/// Exponent as written on the command line: "inf" or the shortest decimal.
std::string exponent_label(const Exponent& p);

Json to_json(const ResidualReport& report);
Json to_json(const EigenResult& result);
Json to_json(const BvpResult& result);
Json to_json(const ScalingResult& result);
/// Run summary without the field values or the data callbacks.
Json to_json(const SolverRun& run);
Json to_json(const ExperimentReport& report);

/// Pretty-printed JSON, newline terminated. Creates parent directories.
void write_json(const std::filesystem::path& path, const Json& value);
/// Header "t,r,u", one row per node and level, time-major.
void write_field_csv(const std::filesystem::path& path, const SpaceTimeField& field);
/// Header "r,psi,flux".
void write_profile_csv(const std::filesystem::path& path, const RadialSamples& samples);
void write_table_csv(const std::filesystem::path& path, const Table& table);

/// UTC time as YYYYMMDDTHHMMSSmmmZ.
std::string utc_timestamp();
/// "<name>-<p>-<n>-<timestamp>".
std::string output_stem(const std::string& name, const Exponent& p, int n, const std::string& timestamp);

}  // namespace trudlab
