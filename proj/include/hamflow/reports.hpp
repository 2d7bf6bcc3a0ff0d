#pragma once

#include <filesystem>
#include <string>

#include "hamflow/expansion.hpp"
#include "hamflow/solvers.hpp"

namespace hamflow {

enum class TableFormat { csv, json };

// The three schedule tables. Columns are departure time steps 1..T.
//   vehicles:  vehicles per arc
//   cargo:     total mass per arc, sum_k L_k x
//   inventory: per (depot, commodity) mass on hand during the step, with
//              delivered demand kept in the depot's total
struct ReportTables {
  std::string vehicles;
  std::string cargo;
  std::string inventory;
};

// Throws ValidationError unless the assignment verifies as feasible.
ReportTables render_report_tables(const Model& model, const Assignment& assignment,
                                  TableFormat format = TableFormat::csv);

// Writes vehicles.<ext>, cargo.<ext> and inventory.<ext> into `directory`.
void render_reports(const Model& model, const Assignment& assignment,
                    const std::filesystem::path& directory,
                    TableFormat format = TableFormat::csv);

// kind,bin_lower,bin_upper,count with one row per bin and a closing
// "summary,<best>,<worst>,<samples>" row.
std::string histogram_csv(const SampleSet& samples);

void emit_histogram(const SampleSet& samples, const std::filesystem::path& file);

void write_text_file(const std::filesystem::path& file, const std::string& text);
std::string read_text_file(const std::filesystem::path& file);

}  // namespace hamflow
