#pragma once

#include <string>
#include <vector>

#include "mqf/json_io.hpp"

namespace mqf {

/// One place where a printed formula and direct calculation (or Monte Carlo)
/// part ways, with the numbers that show it.
struct DiscrepancyRow {
    std::string topic;
    std::string printed;
    std::string derived;
    std::string evidence;
    std::string status;
};

/// Builds the rows. Rows backed by Monte Carlo read the matching entries
/// (by "topic") of a suite report such as run_suite(default_suite_config(..)).
std::vector<DiscrepancyRow> discrepancy_rows(const json& suite_report);

std::string render_discrepancy_text(const std::vector<DiscrepancyRow>& rows);
std::string render_discrepancy_csv(const std::vector<DiscrepancyRow>& rows);
json discrepancy_json(const std::vector<DiscrepancyRow>& rows);

} // namespace mqf
