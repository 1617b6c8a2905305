#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "evifuse/experiments.hpp"

namespace evifuse::report {

enum class Format { Json, Csv, Text };

std::string to_json(const experiments::RunReport& report);
std::string to_json(const experiments::SweepReport& report);
experiments::RunReport run_report_from_json(const std::string& text);
experiments::SweepReport sweep_report_from_json(const std::string& text);

/// Aligned text tables; the BIM row of the classifier table carries a `*`
/// in its marker column.
std::string to_text(const experiments::RunReport& report);
std::string to_text(const experiments::SweepReport& report);

/// One CSV document per table, keyed by file name.
std::vector<std::pair<std::string, std::string>> to_csv(const experiments::RunReport& report);
std::vector<std::pair<std::string, std::string>> to_csv(const experiments::SweepReport& report);

/// Writes the requested formats into `dir` (created if needed) and returns
/// the written paths. Throws IoError.
std::vector<std::filesystem::path> emit_report(const experiments::RunReport& report,
                                               const std::vector<Format>& formats,
                                               const std::filesystem::path& dir);
std::vector<std::filesystem::path> emit_report(const experiments::SweepReport& report,
                                               const std::vector<Format>& formats,
                                               const std::filesystem::path& dir);

void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace evifuse::report
