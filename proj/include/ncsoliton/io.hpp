#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncsoliton/dnls.hpp"
#include "ncsoliton/soliton.hpp"
#include "ncsoliton/verify.hpp"

namespace ncsoliton::io {

using nlohmann::json;

inline constexpr const char* kConstructFormat = "ncsoliton.construct/1";
inline constexpr const char* kReportFormat = "ncsoliton.report/1";
inline constexpr const char* kSnapshotFormat = "ncsoliton.snapshots/1";

/// Doubles are written in shortest round-trip form; non-finite values as
/// the strings "inf", "-inf", "nan".
json number(double v);
double to_double(const json& j);

json to_json(const Thresholds& t);
json to_json(const SolitonResult& r);
json to_json(const VerificationReport& r);
json to_json(const std::vector<dnls::Snapshot>& snapshots);

Thresholds thresholds_from_json(const json& j);
/// Rebuilds a result from a construct file; DomainError on schema mismatch.
SolitonResult soliton_from_json(const json& j);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

/// Comma-separated table with a header line; numbers at 17 significant digits.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(const std::vector<double>& row);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace ncsoliton::io
